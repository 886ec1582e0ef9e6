#include "vclab/certified.hpp"

#include "vclab/error.hpp"

namespace vclab {

namespace {

// Working precision of the fixed-point mantissa during repeated squaring.
constexpr unsigned long kMantissaBits = 96;

enum class Rounding { down, up };

mpz_class div_2exp(const mpz_class& v, unsigned long bits, Rounding mode) {
    mpz_class q;
    if (mode == Rounding::up) mpz_cdiv_q_2exp(q.get_mpz_t(), v.get_mpz_t(), bits);
    else mpz_fdiv_q_2exp(q.get_mpz_t(), v.get_mpz_t(), bits);
    return q;
}

mpz_class div_round(const mpz_class& n, const mpz_class& d, Rounding mode) {
    mpz_class q;
    if (mode == Rounding::up) mpz_cdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    else mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

// One-sided bound on log2(num/den) as a multiple of 2^-kLog2FractionBits.
//
// Normalise x = 2^e * y with y in [1, 2), hold y as a fixed-point integer
// Z / 2^P rounded in `mode`, then peel one fractional bit per squaring. With
// upward rounding every step over-approximates, so
//   log2 y <= bits + 2^-i log2(z_i) < bits + 2^-i,
// and with downward rounding log2 y >= bits.
Rational log2_one_sided(const mpz_class& num, const mpz_class& den, Rounding mode) {
    long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    auto scaled = [&](long exp) {
        // compare num with den * 2^exp
        mpz_class lhs = num, rhs = den;
        if (exp >= 0) rhs <<= static_cast<unsigned long>(exp);
        else lhs <<= static_cast<unsigned long>(-exp);
        return cmp(lhs, rhs);
    };
    if (scaled(e) < 0) --e;

    const unsigned long P = kMantissaBits;
    mpz_class n = num, d = den;
    n <<= P;
    if (e >= 0) d <<= static_cast<unsigned long>(e);
    else n <<= static_cast<unsigned long>(-e);
    mpz_class z = div_round(n, d, mode);

    const mpz_class one = mpz_class(1) << P;
    const mpz_class two = one << 1;
    const Rational base{Integer(e)};

    long bits = 0;
    if (z >= two) {
        // y rounded up to 2: log2 y <= 1.
        return base + 1;
    }
    for (int i = 1; i <= kLog2FractionBits; ++i) {
        z = div_2exp(z * z, P, mode);
        bits <<= 1;
        if (z >= two) {
            bits |= 1;
            z = div_2exp(z, 1, mode);
            if (z >= two) {
                // Only reachable when rounding up: remaining tail is at most 2^-i.
                return base + Rational(Integer(bits + 1), Integer::pow2(static_cast<unsigned long>(i)));
            }
        }
    }
    if (mode == Rounding::up) bits += 1;
    return base + Rational(Integer(bits), Integer::pow2(kLog2FractionBits));
}

bool is_power_of_two(const mpz_class& v) {
    return sgn(v) > 0 && mpz_popcount(v.get_mpz_t()) == 1;
}

} // namespace

Enclosure::Enclosure(Rational lower, Rational upper) : lo(std::move(lower)), hi(std::move(upper)) {
    if (hi < lo) throw DomainError("enclosure with lower end above upper end");
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return Enclosure(a.lo + b.lo, a.hi + b.hi); }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
    if (a.lo.sign() < 0 || b.lo.sign() < 0) throw DomainError("enclosure product requires non-negative operands");
    return Enclosure(a.lo * b.lo, a.hi * b.hi);
}

Enclosure pow(const Enclosure& base, unsigned long exponent) {
    if (base.lo.sign() < 0) throw DomainError("enclosure power requires a non-negative base");
    return Enclosure(base.lo.pow(exponent), base.hi.pow(exponent));
}

const Enclosure& euler_e() {
    static const Enclosure e(Rational(2718281828L, 1000000000L), Rational(2718281829L, 1000000000L));
    return e;
}

Enclosure log2_enclosure(const Rational& x) {
    if (x.sign() <= 0) throw DomainError("log2 of non-positive value " + x.str());
    const mpz_class& num = x.gmp().get_num();
    const mpz_class& den = x.gmp().get_den();
    if (is_power_of_two(num) && is_power_of_two(den)) {
        long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                 static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
        return Enclosure(Rational(Integer(e)));
    }
    return Enclosure(log2_one_sided(num, den, Rounding::down), log2_one_sided(num, den, Rounding::up));
}

Enclosure log2(const Enclosure& a) {
    if (a.is_exact()) return log2_enclosure(a.lo);
    return Enclosure(log2_enclosure(a.lo).lo, log2_enclosure(a.hi).hi);
}

} // namespace vclab
