#pragma once

// Closed-form growth-function and VC-dimension bounds, evaluated as certified
// rational enclosures (see certified.hpp). The upper end of each enclosure
// is the reported bound; checks of the form "x <= bound" that must be sound
// compare against the lower end.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vclab/certified.hpp"
#include "vclab/network.hpp"

namespace vclab {

/// Sign-vector count bound for m polynomials of degree <= d in n <= m
/// variables: 2 (2 e m d / n)^n.
Enclosure warren_bound(const Integer& m, const Integer& n, const Integer& d);

struct GrowthBound {
    /// prod_i 2 (2 e m k_i p (1 + (i-1) d^(i-1)) / W_i)^(W_i), layers with W_i = 0 omitted
    Enclosure product;
    /// (4 e m p (1 + (L-1) d^(L-1)))^(sum W_i)
    Enclosure simplified;
    bool product_le_simplified = false;
};

/// Growth function bound for m points. Holds for m >= Lbar*W only; below
/// that throws RegimeError (the trivial 2^m is the caller's fallback).
GrowthBound growth_bound_thm3(const ArchSummary& arch, const Integer& m);

struct DepthVcBound {
    /// L + Lbar W log2(4 e p R log2(2 e p R))
    Enclosure general;
    /// d = 0 form: L + W log2(4 e p U log2(2 e p U))
    std::optional<Enclosure> piecewise_constant;
    /// d = 1 form with sum_i i k_i in place of R
    std::optional<Enclosure> piecewise_linear;
};

/// Requires U > 2; throws ConditionError otherwise.
DepthVcBound vc_bound_thm3(const ArchSummary& arch);

/// 2 W log2(16 e max{U+1, 2 d^U} (1+p)^U).
Enclosure vc_bound_thm6(const Integer& W, const Integer& U, const Integer& p, const Integer& d);

/// L log2(13 p d^((L+1)/2) W / L): the largest m for which any such network
/// can match x mod 2 within 1/2 on {0, ..., 2^m - 1}.
Enclosure barrier_bound_thm9(const Integer& W, const Integer& L, const Integer& p, const Integer& d);

/// (B+1)(2+bD) - 1 breakpoints after applying a degree-d activation with b
/// breakpoints to a sum of degree-D functions with B breakpoints in total.
Integer lemma8_bound(const Integer& B, const Integer& D, const Integer& b);

/// t + w log2(2 r log2 r); requires r >= 16 and w >= t >= 0, w >= 1.
Enclosure invert_growth_lemma10(const Integer& t, const Integer& w, const Rational& r);

/// (6p)^i d^(i(i-1)/2) gamma - 1: breakpoints possible at a node in layer i
/// reached by gamma input paths.
Integer node_breakpoint_bound(std::size_t layer, const Integer& p, const Integer& d, const Integer& gamma);

/// (2W/L)^L, the cap on input-to-output path counts.
Rational path_count_cap(const Integer& W, std::size_t L);

struct NodeBreakpoints {
    NodeIndex node;
    std::size_t layer;
    std::size_t breakpoints;
    Integer paths;            // gamma(v)
    Integer path_bound;       // node_breakpoint_bound
    Integer lemma8_step;      // composition bound from the predecessors' actual breakpoints
    Integer lemma8_iterated;  // composition bound iterated from the inputs
    bool within_bounds() const {
        Integer b(static_cast<unsigned long>(breakpoints));
        return b <= path_bound && b <= lemma8_step && b <= lemma8_iterated;
    }
};

/// Symbolic breakpoint count of every unit of a univariate piecewise-linear
/// network next to each bound that constrains it.
std::vector<NodeBreakpoints> analyze_breakpoints(const Network& net);

/// Parameter values drawn by estimate_sign_patterns: k/4 for k in [-8, 8].
Rational sample_grid_value(std::uint64_t draw);

/// Distinct output sign vectors over `points` seen across `samples` random
/// parameter vectors, a lower bound on the true count K. Deterministic in
/// (seed, samples) and independent of `threads`.
std::size_t estimate_sign_patterns(const Network& net, std::span<const std::vector<Rational>> points,
                                   std::size_t samples, std::uint64_t seed, std::size_t threads = 1);

} // namespace vclab
