#pragma once

// Certified rational enclosures for quantities involving e and log2.
//
// Every bound in the library is monotone non-decreasing in e and in each
// log2 argument, so evaluating with the enclosure endpoints yields a
// certified [lower, upper] bracket of the true real value.

#include "vclab/rational.hpp"

namespace vclab {

/// Fractional bits of precision in every log2 enclosure.
inline constexpr int kLog2FractionBits = 30;

struct Enclosure {
    Rational lo;
    Rational hi;

    Enclosure() = default;
    Enclosure(Rational exact) : lo(exact), hi(std::move(exact)) {}  // NOLINT(google-explicit-constructor)
    Enclosure(Rational lower, Rational upper);

    bool is_exact() const { return lo == hi; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    /// floor of the upper end: the integer an upper bound may be reported as.
    Integer floor() const { return hi.floor(); }

    friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
/// Product of two enclosures whose lower ends are non-negative.
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure pow(const Enclosure& base, unsigned long exponent);

/// Euler's number: [2.718281828, 2.718281829].
const Enclosure& euler_e();

/// log2 of a positive rational, bracketed to kLog2FractionBits fractional
/// bits. Exact when x is a power of two.
Enclosure log2_enclosure(const Rational& x);
/// log2 applied endpoint-wise; requires a.lo > 0.
Enclosure log2(const Enclosure& a);

} // namespace vclab
