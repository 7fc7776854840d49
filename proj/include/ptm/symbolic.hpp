#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "ptm/rational.hpp"

namespace ptm::sym {

// A monomial maps symbol names to non-zero integer exponents. Negative
// exponents encode division (n*L^-1 is n/L), so every formula is a Laurent
// polynomial and stays exact under rational arithmetic.
using Monomial = std::map<std::string, int>;

// Symbol name -> exact value used for substitution and evaluation.
using Bindings = std::map<std::string, Rational>;

class SymbolicError : public std::runtime_error {
public:
    explicit SymbolicError(const std::string& what) : std::runtime_error(what) {}
};

// Canonical sparse polynomial: term map from monomial to rational coefficient,
// never storing zero coefficients or zero exponents. Equal formulas therefore
// compare equal through the term map alone.
class Formula {
public:
    Formula() = default;

    static Formula constant(Rational value);
    static Formula symbol(const std::string& name);

    friend Formula operator+(const Formula& a, const Formula& b);
    friend Formula operator-(const Formula& a, const Formula& b);
    friend Formula operator*(const Formula& a, const Formula& b);
    Formula& operator+=(const Formula& o) { return *this = *this + o; }
    Formula& operator*=(const Formula& o) { return *this = *this * o; }

    // Divisor must be a single monomial with non-zero coefficient.
    Formula divided_by(const Formula& divisor) const;

    friend bool operator==(const Formula& a, const Formula& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

    // Replaces bound symbols by their values; unbound symbols stay symbolic.
    // A zero value bound to a negatively-exponentiated symbol is rejected.
    Formula substitute(const Bindings& bindings) const;

    // Exact value; every symbol must be bound.
    Rational eval(const Bindings& bindings) const;

    // Returns g with f == g*symbol + (terms with exponent 0 on symbol),
    // computed by decrementing the symbol's exponent per monomial.
    Formula coefficient_of(const std::string& symbol) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    bool is_monomial() const { return terms_.size() == 1; }

    const std::map<Monomial, Rational>& terms() const { return terms_; }

    // Deterministic rendering: monomials in term-map order, explicit '*' and
    // '^', exponent 1 elided.
    std::string str() const;

    // Human-oriented variant grouping the terms that carry an n/L factor.
    std::string str_factored() const;

private:
    std::map<Monomial, Rational> terms_;

    void add_term(const Monomial& m, const Rational& coeff);
};

inline Formula make(Rational constant) { return Formula::constant(constant); }
inline Formula make(const std::string& symbol) { return Formula::symbol(symbol); }

std::string render_monomial(const Monomial& m);

}  // namespace ptm::sym
