#include "ptm/symbolic.hpp"

#include <sstream>

namespace ptm::sym {

void Formula::add_term(const Monomial& m, const Rational& coeff) {
    if (coeff.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, coeff);
        return;
    }
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
}

Formula Formula::constant(Rational value) {
    Formula f;
    f.add_term(Monomial{}, value);
    return f;
}

Formula Formula::symbol(const std::string& name) {
    if (name.empty()) throw SymbolicError("empty symbol name");
    Formula f;
    f.add_term(Monomial{{name, 1}}, Rational(1));
    return f;
}

Formula operator+(const Formula& a, const Formula& b) {
    Formula out = a;
    for (const auto& [mono, coeff] : b.terms_) out.add_term(mono, coeff);
    return out;
}

Formula operator-(const Formula& a, const Formula& b) {
    Formula out = a;
    for (const auto& [mono, coeff] : b.terms_) out.add_term(mono, -coeff);
    return out;
}

Formula operator*(const Formula& a, const Formula& b) {
    Formula out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            for (const auto& [name, exp] : mb) {
                int merged = (m.count(name) ? m[name] : 0) + exp;
                if (merged == 0)
                    m.erase(name);
                else
                    m[name] = merged;
            }
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

Formula Formula::divided_by(const Formula& divisor) const {
    if (divisor.terms_.size() != 1)
        throw SymbolicError("divisor must be a single non-zero monomial, got: " + divisor.str());
    const auto& [mono, coeff] = *divisor.terms_.begin();
    Formula inverse;
    Monomial inverted;
    for (const auto& [name, exp] : mono) inverted[name] = -exp;
    inverse.add_term(inverted, Rational(1) / coeff);
    return *this * inverse;
}

Formula Formula::substitute(const Bindings& bindings) const {
    Formula out;
    for (const auto& [mono, coeff] : terms_) {
        Rational c = coeff;
        Monomial residual;
        for (const auto& [name, exp] : mono) {
            auto it = bindings.find(name);
            if (it == bindings.end()) {
                residual[name] = exp;
                continue;
            }
            if (it->second.is_zero() && exp < 0)
                throw SymbolicError("zero binding for symbol '" + name + "' with negative exponent");
            c *= it->second.pow(exp);
        }
        out.add_term(residual, c);
    }
    return out;
}

Rational Formula::eval(const Bindings& bindings) const {
    Formula reduced = substitute(bindings);
    for (const auto& [mono, coeff] : reduced.terms_) {
        if (!mono.empty())
            throw SymbolicError("unbound symbol '" + mono.begin()->first + "' in evaluation");
        (void)coeff;
    }
    if (reduced.terms_.empty()) return Rational(0);
    return reduced.terms_.begin()->second;
}

Formula Formula::coefficient_of(const std::string& symbol) const {
    Formula out;
    for (const auto& [mono, coeff] : terms_) {
        auto it = mono.find(symbol);
        if (it == mono.end()) continue;
        Monomial m = mono;
        if (it->second == 1)
            m.erase(symbol);
        else
            m[symbol] = it->second - 1;
        out.add_term(m, coeff);
    }
    return out;
}

std::string render_monomial(const Monomial& m) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [name, exp] : m) {
        if (!first) os << "*";
        first = false;
        os << name;
        if (exp != 1) os << "^" << exp;
    }
    return os.str();
}

namespace {

void render_term(std::ostringstream& os, const Monomial& mono, const Rational& coeff, bool leading) {
    Rational mag = coeff.abs();
    if (leading) {
        if (coeff < Rational(0)) os << "-";
    } else {
        os << (coeff < Rational(0) ? " - " : " + ");
    }
    if (mono.empty()) {
        os << mag.str();
        return;
    }
    if (mag != Rational(1)) os << mag.str() << "*";
    os << render_monomial(mono);
}

}  // namespace

std::string Formula::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool leading = true;
    for (const auto& [mono, coeff] : terms_) {
        render_term(os, mono, coeff, leading);
        leading = false;
    }
    return os.str();
}

std::string Formula::str_factored() const {
    // Split off the terms divisible by n/L and print them as one group.
    Formula group;
    Formula rest;
    for (const auto& [mono, coeff] : terms_) {
        auto n_it = mono.find("n");
        auto l_it = mono.find("L");
        bool divisible = n_it != mono.end() && n_it->second >= 1 &&
                         l_it != mono.end() && l_it->second <= -1;
        Formula term;
        term.add_term(mono, coeff);
        if (divisible)
            group += term;
        else
            rest += term;
    }
    if (group.is_zero()) return str();
    Formula unit = Formula::symbol("n").divided_by(Formula::symbol("L"));
    std::string out = "n/L * (" + group.divided_by(unit).str() + ")";
    if (!rest.is_zero()) out += " + " + rest.str();
    return out;
}

}  // namespace ptm::sym
