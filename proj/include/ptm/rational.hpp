#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ptm {

// Exact rational over 64-bit integers, always normalized (gcd 1, den > 0).
// Intermediate products go through __int128 so cycle-scale arithmetic
// cannot silently wrap.
class Rational {
public:
    Rational() = default;
    Rational(long long value) : num_(value), den_(1) {}
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational::from128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                                 (__int128)a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational::from128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                                 (__int128)a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational::from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return Rational::from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

    // Integer exponent; negative exponents require a non-zero value.
    Rational pow(int exp) const {
        if (exp == 0) return Rational(1);
        Rational base = *this;
        if (exp < 0) {
            if (num_ == 0) throw std::domain_error("zero raised to negative exponent");
            base = Rational(den_, num_);
            exp = -exp;
        }
        Rational result(1);
        for (int i = 0; i < exp; ++i) result *= base;
        return result;
    }

    // Exact value as integer; throws when not an integer.
    long long as_integer() const {
        if (den_ != 1) throw std::domain_error("rational is not an integer: " + str());
        return num_;
    }

    double as_double() const { return (double)num_ / (double)den_; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Exact decimal ("0.25") when the denominator is 2^a*5^b, else "p/q".
    std::string decimal_str() const;

private:
    long long num_ = 0;
    long long den_ = 1;

    static Rational from128(__int128 num, __int128 den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        __int128 a = num < 0 ? -num : num;
        __int128 g = gcd128(a, den);
        if (g > 1) { num /= g; den /= g; }
        if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = (long long)num;
        r.den_ = (long long)den;
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a < 0 ? -a : a;
    }

    void normalize() { *this = from128(num_, den_); }
};

inline std::string Rational::decimal_str() const {
    if (den_ == 1) return std::to_string(num_);
    long long d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return str();  // non-terminating decimal, keep exact
    int digits = twos > fives ? twos : fives;
    __int128 scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    __int128 scaled = (__int128)(num_ < 0 ? -num_ : num_) * scale / den_;
    std::string whole = std::to_string((long long)(scaled / scale));
    std::string frac = std::to_string((long long)(scaled % scale));
    frac.insert(frac.begin(), (size_t)digits - frac.size(), '0');
    return (num_ < 0 ? "-" : "") + whole + "." + frac;
}

}  // namespace ptm
