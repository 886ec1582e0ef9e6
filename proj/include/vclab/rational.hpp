#pragma once

// Exact arbitrary-precision integers and rationals backed by GMP.
//
// Both types are canonical after every operation: a Rational always has a
// positive denominator coprime to its numerator, so structural equality is
// value equality.

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace vclab {

class Integer {
public:
    Integer() = default;
    Integer(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Integer(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
    Integer(unsigned long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    explicit Integer(const mpz_class& v) : v_(v) {}

    static Integer parse(std::string_view text);
    static Integer pow2(unsigned long exponent);
    static Integer pow(const Integer& base, unsigned long exponent);

    const mpz_class& gmp() const noexcept { return v_; }

    int sign() const noexcept { return sgn(v_); }
    bool fits_long() const noexcept { return v_.fits_slong_p(); }
    long to_long() const;
    double to_double() const { return v_.get_d(); }
    std::size_t bit_length() const;
    std::string str() const { return v_.get_str(); }

    Integer& operator+=(const Integer& o) { v_ += o.v_; return *this; }
    Integer& operator-=(const Integer& o) { v_ -= o.v_; return *this; }
    Integer& operator*=(const Integer& o) { v_ *= o.v_; return *this; }

    friend Integer operator+(const Integer& a, const Integer& b) { return Integer(mpz_class(a.v_ + b.v_)); }
    friend Integer operator-(const Integer& a, const Integer& b) { return Integer(mpz_class(a.v_ - b.v_)); }
    friend Integer operator*(const Integer& a, const Integer& b) { return Integer(mpz_class(a.v_ * b.v_)); }
    friend Integer operator-(const Integer& a) { return Integer(mpz_class(-a.v_)); }

    friend bool operator==(const Integer& a, const Integer& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) { return cmp(a.v_, b.v_) <=> 0; }

    friend std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.v_; }

private:
    mpz_class v_;
};

class Rational {
public:
    Rational() = default;
    Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
    Rational(int v) : v_(v) {}   // NOLINT(google-explicit-constructor)
    Rational(const Integer& v) : v_(v.gmp()) {}  // NOLINT(google-explicit-constructor)
    Rational(const Integer& num, const Integer& den);
    Rational(long num, long den) : Rational(Integer(num), Integer(den)) {}
    explicit Rational(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    /// Parses "p" or "p/q" with q > 0. Non-reduced fractions are reduced.
    static Rational parse(std::string_view text);
    /// 2^exponent for any signed exponent.
    static Rational pow2(long exponent);

    const mpq_class& gmp() const noexcept { return v_; }

    Integer numerator() const { return Integer(v_.get_num()); }
    Integer denominator() const { return Integer(v_.get_den()); }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const noexcept { return sgn(v_); }
    bool is_zero() const noexcept { return sgn(v_) == 0; }

    Integer floor() const;
    Integer ceil() const;
    Rational abs() const { return sign() < 0 ? -*this : *this; }
    Rational pow(unsigned long exponent) const;

    double to_double() const { return v_.get_d(); }
    /// Canonical text form: "p" when the denominator is 1, else "p/q".
    std::string str() const;
    /// Decimal rounded to `places` digits after the point (half away from zero).
    std::string decimal(int places = 6) const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Raw{}, mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Raw{}, mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Raw{}, mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) { Rational r = a; r /= b; return r; }
    friend Rational operator-(const Rational& a) { return Rational(Raw{}, mpq_class(-a.v_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) <=> 0; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& v) { return os << v.str(); }

private:
    struct Raw {};
    // gmpxx arithmetic already yields canonical results.
    Rational(Raw, mpq_class&& v) : v_(std::move(v)) {}

    mpq_class v_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// "p/q (≈ d.dddddd)"; the decimal part is advisory only.
std::string describe(const Rational& v, int places = 6);

} // namespace vclab

template <>
struct std::hash<vclab::Rational> {
    std::size_t operator()(const vclab::Rational& r) const noexcept;
};
