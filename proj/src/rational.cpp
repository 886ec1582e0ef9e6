#include "vclab/rational.hpp"

#include <cmath>
#include <cstdio>

#include "vclab/error.hpp"

namespace vclab {

namespace {

bool is_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// Optional leading '-', then decimal digits.
bool is_signed_digits(std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    return is_digits(s);
}

} // namespace

Integer Integer::parse(std::string_view text) {
    if (!is_signed_digits(text)) throw ParseError("invalid integer literal '" + std::string(text) + "'");
    return Integer(mpz_class(std::string(text), 10));
}

Integer Integer::pow2(unsigned long exponent) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, exponent);
    return Integer(v);
}

Integer Integer::pow(const Integer& base, unsigned long exponent) {
    mpz_class v;
    mpz_pow_ui(v.get_mpz_t(), base.v_.get_mpz_t(), exponent);
    return Integer(v);
}

long Integer::to_long() const {
    if (!fits_long()) throw DomainError("integer " + str() + " does not fit in a machine word");
    return v_.get_si();
}

std::size_t Integer::bit_length() const {
    if (sgn(v_) == 0) return 0;
    return mpz_sizeinbase(v_.get_mpz_t(), 2);
}

Rational::Rational(const Integer& num, const Integer& den) {
    if (den.sign() == 0) throw DomainError("rational with zero denominator");
    v_ = mpq_class(num.gmp(), den.gmp());
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    if (!is_signed_digits(num)) throw ParseError("invalid rational literal '" + std::string(text) + "'");
    if (slash == std::string_view::npos) return Rational(Integer::parse(num));
    std::string_view den = text.substr(slash + 1);
    if (!is_digits(den)) throw ParseError("invalid rational literal '" + std::string(text) + "'");
    Integer d = Integer::parse(den);
    if (d.sign() == 0) throw ParseError("rational literal '" + std::string(text) + "' has zero denominator");
    return Rational(Integer::parse(num), d);
}

Rational Rational::pow2(long exponent) {
    if (exponent >= 0) return Rational(Integer::pow2(static_cast<unsigned long>(exponent)));
    return Rational(Integer(1), Integer::pow2(static_cast<unsigned long>(-exponent)));
}

Integer Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Integer(q);
}

Integer Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return Integer(q);
}

Rational Rational::pow(unsigned long exponent) const {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), v_.get_num_mpz_t(), exponent);
    mpz_pow_ui(den.get_mpz_t(), v_.get_den_mpz_t(), exponent);
    return Rational(Raw{}, mpq_class(num, den));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    v_ /= o.v_;
    return *this;
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rational::decimal(int places) const {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    // round(|x| * 10^places) with ties away from zero
    mpq_class scaled = (sgn(v_) < 0 ? mpq_class(-v_) : v_) * scale + mpq_class(1, 2);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    std::string digits = q.get_str();
    if (places > 0) {
        if (digits.size() <= static_cast<std::size_t>(places)) digits.insert(0, places + 1 - digits.size(), '0');
        digits.insert(digits.size() - places, ".");
    }
    if (sign() < 0 && q != 0) digits.insert(0, "-");
    return digits;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::string describe(const Rational& v, int places) {
    constexpr std::size_t kMaxExactDigits = 48;
    std::string exact = v.str();
    if (exact.size() <= kMaxExactDigits) return exact + " (≈ " + v.decimal(places) + ")";

    // Too large to print usefully; give sizes and a scientific approximation.
    long exp_num = 0, exp_den = 0;
    double mant_num = mpz_get_d_2exp(&exp_num, v.gmp().get_num_mpz_t());
    double mant_den = mpz_get_d_2exp(&exp_den, v.gmp().get_den_mpz_t());
    double log10_abs = std::log10(std::abs(mant_num / mant_den)) + static_cast<double>(exp_num - exp_den) * std::log10(2.0);
    double exponent = std::floor(log10_abs);
    double mantissa = std::pow(10.0, log10_abs - exponent);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%.6fe+%.0f", v.sign() < 0 ? "-" : "", mantissa, exponent);
    return "<" + std::to_string(v.numerator().str().size()) + "-digit numerator, " +
           std::to_string(v.denominator().str().size()) + "-digit denominator> (≈ " + buf + ")";
}

} // namespace vclab

std::size_t std::hash<vclab::Rational>::operator()(const vclab::Rational& r) const noexcept {
    std::size_t h = mpz_get_ui(r.gmp().get_num_mpz_t());
    h ^= mpz_get_ui(r.gmp().get_den_mpz_t()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(r.sign() + 1);
}
