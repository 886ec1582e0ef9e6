#pragma once

// Lower-bound constructions: ReLU networks that shatter S_n x S_m by bit
// extraction, their building blocks, a parameter planner, and the tent-map
// network that computes x mod 2 together with its barrier check.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vclab/certified.hpp"
#include "vclab/network.hpp"

namespace vclab {

/// Bits per extraction block r, label width m, label count n.
struct ShatterPlan {
    long r = 1;
    long m = 1;
    long n = 1;

    /// Throws DomainError unless r, m, n >= 1.
    static ShatterPlan make(long r, long m, long n);

    /// Number of extraction blocks, ceil(m / r).
    long k() const { return (m + r - 1) / r; }
    /// Indicator margin 2^-(m+2).
    Rational epsilon() const { return Rational::pow2(-(m + 2)); }

    friend bool operator==(const ShatterPlan&, const ShatterPlan&) = default;
};

struct StructureCounts {
    Integer layers;
    Integer params;
    Integer inputs;
    Integer units;

    friend bool operator==(const StructureCounts&, const StructureCounts&) = default;
};

/// Closed-form counts of the shattering network: 3+5k layers,
/// 2+n+4m+k((11+r)2^r+2r+2) parameters, m+n inputs, m+2+k(5*2^r+r+1) units.
StructureCounts closed_form_counts(const ShatterPlan& plan);
/// Counts measured on a built network.
StructureCounts measure(const Network& net);

/// Approximate indicator of [a, b]: exactly 1 on [a, b], exactly 0 outside
/// (a - epsilon, b + epsilon), within [0, 1] in between.
struct GadgetSpec {
    Rational a;
    Rational b;
    Rational epsilon;
};

/// sigma(1 - sigma((a - x)/eps)) + sigma(1 - sigma((x - b)/eps)) - 1 as a
/// 3-layer, 5-unit, 11-parameter network. Throws DomainError if a > b or eps <= 0.
Network build_indicator(const GadgetSpec& spec);

struct ExtractionBlock {
    Network network;
    /// r bit nodes (most significant first), then the remainder node.
    std::vector<NodeIndex> outputs;
};

/// Maps x = 0.b_1...b_m (binary) to (b_1, ..., b_r, 0.b_{r+1}...b_m) with
/// 5 layers, 5*2^r+r+1 units and (11+r)2^r+2r+2 parameters.
/// Throws DomainError unless 1 <= r <= m.
ExtractionBlock build_extraction_block(long r, long m);

/// a_j = sum_i f(e_j, e_i) 2^-i, the row j of the labelling as an m-bit fraction.
Rational encode_row(const LabelMatrix& labels, std::size_t j);

/// Network on m+n inputs (x_1 in S_n first, then x_2 in S_m) whose output at
/// (e_j, e_i) is exactly labels.bit(j, i). Throws DomainError when the
/// labelling is not n x m.
Network build_shatter_network(const ShatterPlan& plan, const LabelMatrix& labels);

/// Inputs (e_j, e_i) for the shattered point (j, i).
std::vector<Rational> basis_pair(const ShatterPlan& plan, std::size_t j, std::size_t i);

/// Largest nm accepted by exhaustive verification (2^nm labellings).
inline constexpr long kExhaustiveCap = 24;

struct LabelingResult {
    unsigned long long index = 0;
    bool pass = false;
    /// First (j, i) where the sign disagreed with the label.
    std::optional<std::pair<std::size_t, std::size_t>> counterexample;
};

struct ShatterReport {
    ShatterPlan plan;
    bool exhaustive = false;
    std::vector<LabelingResult> results;

    std::size_t realized() const;
    bool all_pass() const { return realized() == results.size(); }
    /// Every labelling of S_n x S_m was realized, so VCdim >= nm.
    bool shattered() const { return exhaustive && all_pass(); }
};

/// Builds and checks the network for each of the 2^nm labellings. Throws
/// DomainError when nm > kExhaustiveCap.
ShatterReport verify_shattering_exhaustive(const ShatterPlan& plan, std::size_t threads = 1);
ShatterReport verify_shattering(const ShatterPlan& plan, std::span<const LabelMatrix> labelings, std::size_t threads = 1);

struct LowerBoundPlan {
    ShatterPlan plan;
    Integer vc_lower_bound;   // m n
    StructureCounts counts;   // closed_form_counts(plan)
};

/// Picks (r, m, n) for a budget of W parameters and L layers:
/// r = max(1, floor(log2(W/L)/2)), m = max(1, floor(rL/8)), n = W - 5m2^r,
/// then lowers m (and caps n) until the network fits. Throws DomainError when
/// nothing fits.
LowerBoundPlan plan_lower_bound(const Integer& W, const Integer& L);

/// Univariate ReLU network computing T^m(x / 2^m) with the tent map
/// T(y) = 2 sigma(y) - 4 sigma(y - 1/2); equals x mod 2 on {0, ..., 2^m - 1}.
/// m + 1 layers, 2m + 1 units, 6m + 1 parameters.
Network build_sawtooth_mod2(long m);

struct Mod2Report {
    long m = 0;
    bool property_holds = false;
    /// First integer x where |f(x) - (x mod 2)| >= 1/2.
    std::optional<unsigned long long> failing_input;
    std::optional<Rational> failing_output;
    Integer W;
    std::size_t L = 0;
    /// Present only when the property holds.
    std::optional<Enclosure> barrier;
    /// m <= certified lower end of the barrier bound.
    std::optional<bool> within_barrier;
};

/// Largest m accepted by verify_mod2_barrier (2^m evaluations).
inline constexpr long kMod2CheckCap = 30;

/// Checks |f(x) - (x mod 2)| < 1/2 for all x in {0, ..., 2^m - 1}; when it
/// holds, also evaluates the barrier bound at the network's (W, L).
Mod2Report verify_mod2_barrier(const Network& net, long m, const Integer& p, const Integer& d);

} // namespace vclab
