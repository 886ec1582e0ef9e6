#include "vclab/shatter.hpp"

#include <algorithm>
#include <string>

#include "vclab/bounds.hpp"
#include "vclab/error.hpp"
#include "vclab/parallel.hpp"

namespace vclab {

namespace {

std::string cat(const std::string& prefix, const std::string& name) {
    return prefix.empty() ? name : prefix + "." + name;
}

// Appends the indicator gadget reading node x; returns the summing unit.
NodeIndex add_indicator(NetworkBuilder& nb, NodeIndex x, const GadgetSpec& g, const std::string& prefix,
                        Activation sum_activation) {
    const Rational inv = Rational(1) / g.epsilon;
    NodeIndex below = nb.add_unit(cat(prefix, "below"), g.a * inv, Activation::relu());  // sigma((a - x)/eps)
    nb.add_edge(x, below, -inv);
    NodeIndex lower = nb.add_unit(cat(prefix, "lower"), 1, Activation::relu());  // sigma(1 - below)
    nb.add_edge(below, lower, -1);
    NodeIndex above = nb.add_unit(cat(prefix, "above"), -(g.b * inv), Activation::relu());  // sigma((x - b)/eps)
    nb.add_edge(x, above, inv);
    NodeIndex upper = nb.add_unit(cat(prefix, "upper"), 1, Activation::relu());  // sigma(1 - above)
    nb.add_edge(above, upper, -1);
    NodeIndex sum = nb.add_unit(cat(prefix, "sum"), -1, std::move(sum_activation));
    nb.add_edge(lower, sum, 1);
    nb.add_edge(upper, sum, 1);
    return sum;
}

void check_gadget(const GadgetSpec& g) {
    if (g.b < g.a) throw DomainError("indicator interval needs a <= b");
    if (g.epsilon.sign() <= 0) throw DomainError("indicator margin epsilon must be positive");
}

// What the block's final unit computes.
struct Tail {
    enum class Kind { remainder, recover_bit } kind = Kind::remainder;
    long bit = 0;  // for recover_bit: position q in 1..r
};

struct BlockNodes {
    std::vector<NodeIndex> bits;
    NodeIndex tail;
};

// Extracts the leading r bits of an input that is a multiple of 2^-precision
// in [0, 1). State s in [0, 2^r) is detected on [s 2^-r, (s+1) 2^-r - 2^-precision]
// with margin 2^-(precision+2), so the gadgets are exactly 0/1 on the grid.
//
// Tail::remainder appends 2^r x - sum_t 2^(r-t) b_t. Tail::recover_bit
// appends 2^q x - sum_{t<q} 2^(q-t) b_t, which equals b_q when every bit
// after q is zero; its edges from b_q..b_r carry weight 0 so the parameter
// count matches the remainder's.
BlockNodes add_extraction_block(NetworkBuilder& nb, NodeIndex x, long r, long precision, const std::string& prefix,
                                Tail tail, Activation tail_activation) {
    const long states = 1L << r;
    const Rational eps = Rational::pow2(-(precision + 2));
    const Rational step = Rational::pow2(-r);
    const Rational grid = Rational::pow2(-precision);

    std::vector<NodeIndex> indicators;
    indicators.reserve(static_cast<std::size_t>(states));
    for (long s = 0; s < states; ++s) {
        GadgetSpec g{Rational(s) * step, Rational(s + 1) * step - grid, eps};
        indicators.push_back(add_indicator(nb, x, g, cat(prefix, "ind" + std::to_string(s)), Activation::relu()));
    }

    BlockNodes out;
    for (long t = 1; t <= r; ++t) {
        NodeIndex bit = nb.add_unit(cat(prefix, "bit" + std::to_string(t)), 0, Activation::relu());
        for (long s = 0; s < states; ++s) nb.add_edge(indicators[static_cast<std::size_t>(s)], bit, (s >> (r - t)) & 1L);
        out.bits.push_back(bit);
    }

    const bool recover = tail.kind == Tail::Kind::recover_bit;
    const long top = recover ? tail.bit : r;
    out.tail = nb.add_unit(cat(prefix, recover ? "lastbit" : "rest"), 0, std::move(tail_activation));
    nb.add_edge(x, out.tail, Rational::pow2(top));
    for (long t = 1; t <= r; ++t) {
        Rational w = t < top || !recover ? -Rational::pow2(top - t) : Rational(0);
        nb.add_edge(out.bits[static_cast<std::size_t>(t - 1)], out.tail, std::move(w));
    }
    return out;
}

Integer pow2i(long e) { return Integer::pow2(static_cast<unsigned long>(e)); }

} // namespace

ShatterPlan ShatterPlan::make(long r, long m, long n) {
    if (r < 1 || m < 1 || n < 1) throw DomainError("shatter plan needs r, m, n >= 1");
    if (r > 30) throw DomainError("r > 30 would need more than 2^30 indicator gadgets per block");
    return ShatterPlan{r, m, n};
}

StructureCounts closed_form_counts(const ShatterPlan& plan) {
    const Integer r(plan.r), m(plan.m), n(plan.n), k(plan.k());
    const Integer two_r = pow2i(plan.r);
    return StructureCounts{
        Integer(3) + Integer(5) * k,
        Integer(2) + n + Integer(4) * m + k * ((Integer(11) + r) * two_r + Integer(2) * r + Integer(2)),
        m + n,
        m + Integer(2) + k * (Integer(5) * two_r + r + Integer(1)),
    };
}

StructureCounts measure(const Network& net) {
    const ArchSummary s = summarize(net);
    return StructureCounts{Integer(static_cast<unsigned long>(s.L)), s.W, Integer(static_cast<unsigned long>(net.input_count())), s.U};
}

Network build_indicator(const GadgetSpec& spec) {
    check_gadget(spec);
    NetworkBuilder nb(1);
    NodeIndex out = add_indicator(nb, nb.input(0), spec, "", Activation::identity());
    return nb.build(out);
}

ExtractionBlock build_extraction_block(long r, long m) {
    if (r < 1 || r > m) throw DomainError("extraction block needs 1 <= r <= m");
    if (r > 20) throw DomainError("extraction block with r > 20 is too large to build");
    NetworkBuilder nb(1);
    BlockNodes block = add_extraction_block(nb, nb.input(0), r, m, "", Tail{}, Activation::identity());
    ExtractionBlock out{nb.build(block.tail), block.bits};
    out.outputs.push_back(block.tail);
    return out;
}

Rational encode_row(const LabelMatrix& labels, std::size_t j) {
    Rational a = 0;
    for (std::size_t i = 0; i < labels.m(); ++i) {
        if (labels.bit(j, i)) a += Rational::pow2(-static_cast<long>(i + 1));
    }
    return a;
}

Network build_shatter_network(const ShatterPlan& plan, const LabelMatrix& labels) {
    if (labels.n() != static_cast<std::size_t>(plan.n) || labels.m() != static_cast<std::size_t>(plan.m)) {
        throw DomainError("labelling is " + std::to_string(labels.n()) + "x" + std::to_string(labels.m()) + ", plan expects " +
                          std::to_string(plan.n) + "x" + std::to_string(plan.m));
    }
    const long n = plan.n, m = plan.m, r = plan.r, k = plan.k();
    // Block inputs are multiples of 2^-m; with r > m the r-bit states are finer still.
    const long precision = std::max(m, r);

    NetworkBuilder nb(static_cast<std::size_t>(n + m));
    auto x1 = [&](long j) { return nb.input(static_cast<std::size_t>(j)); };
    auto x2 = [&](long i) { return nb.input(static_cast<std::size_t>(n + i)); };

    // a_j = sigma(a^T x_1)
    NodeIndex select = nb.add_unit("select", 0, Activation::relu());
    for (long j = 0; j < n; ++j) nb.add_edge(x1(j), select, encode_row(labels, static_cast<std::size_t>(j)));

    // k blocks peel r bits each; the last block's tail recovers bit m so the
    // final AND reads through it.
    std::vector<NodeIndex> bit_source(static_cast<std::size_t>(m));
    NodeIndex carry = select;
    for (long s = 0; s < k; ++s) {
        const bool last = s + 1 == k;
        Tail tail = last ? Tail{Tail::Kind::recover_bit, m - (k - 1) * r} : Tail{};
        BlockNodes block = add_extraction_block(nb, carry, r, precision, "block" + std::to_string(s + 1), tail,
                                                Activation::relu());
        for (long t = 0; t < r && s * r + t < m; ++t) {
            bit_source[static_cast<std::size_t>(s * r + t)] = block.bits[static_cast<std::size_t>(t)];
        }
        if (last) bit_source[static_cast<std::size_t>(m - 1)] = block.tail;
        carry = block.tail;
    }

    // a_{j,i} = sum_t sigma(x_{2,t} + a_{j,t} - 1)
    NodeIndex out = nb.add_unit("out", 0, Activation::identity());
    for (long t = 0; t < m; ++t) {
        NodeIndex conj = nb.add_unit("and" + std::to_string(t + 1), -1, Activation::relu());
        nb.add_edge(x2(t), conj, 1);
        nb.add_edge(bit_source[static_cast<std::size_t>(t)], conj, 1);
        nb.add_edge(conj, out, 1);
    }
    return nb.build(out);
}

std::vector<Rational> basis_pair(const ShatterPlan& plan, std::size_t j, std::size_t i) {
    std::vector<Rational> x(static_cast<std::size_t>(plan.n + plan.m), Rational(0));
    x.at(j) = 1;
    x.at(static_cast<std::size_t>(plan.n) + i) = 1;
    return x;
}

std::size_t ShatterReport::realized() const {
    return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; }));
}

namespace {

LabelingResult check_labeling(const ShatterPlan& plan, const LabelMatrix& labels, unsigned long long index) {
    const Network net = build_shatter_network(plan, labels);
    LabelingResult result{index, true, std::nullopt};
    for (std::size_t j = 0; j < labels.n() && result.pass; ++j) {
        for (std::size_t i = 0; i < labels.m(); ++i) {
            if (sign_of_output(net, basis_pair(plan, j, i)) != labels.bit(j, i)) {
                result.pass = false;
                result.counterexample = {j, i};
                break;
            }
        }
    }
    return result;
}

} // namespace

ShatterReport verify_shattering_exhaustive(const ShatterPlan& plan, std::size_t threads) {
    if (plan.m * plan.n > kExhaustiveCap) {
        throw DomainError("exhaustive verification enumerates 2^(mn) labellings; mn = " + std::to_string(plan.m * plan.n) +
                          " exceeds the cap of " + std::to_string(kExhaustiveCap) + ", pass explicit labellings instead");
    }
    const unsigned long long total = 1ULL << (plan.m * plan.n);
    ShatterReport report{plan, true, std::vector<LabelingResult>(total)};
    parallel_for(total, threads, [&](std::size_t idx) {
        report.results[idx] = check_labeling(
            plan, LabelMatrix::from_index(static_cast<std::size_t>(plan.n), static_cast<std::size_t>(plan.m), idx), idx);
    });
    return report;
}

ShatterReport verify_shattering(const ShatterPlan& plan, std::span<const LabelMatrix> labelings, std::size_t threads) {
    ShatterReport report{plan, false, std::vector<LabelingResult>(labelings.size())};
    parallel_for(labelings.size(), threads, [&](std::size_t idx) { report.results[idx] = check_labeling(plan, labelings[idx], idx); });
    return report;
}

LowerBoundPlan plan_lower_bound(const Integer& W, const Integer& L) {
    if (W < Integer(1) || L < Integer(1)) throw DomainError("parameter and layer budgets must be positive");

    // floor(log2(W/L)): largest e with L 2^e <= W (negative when W < L)
    long e = static_cast<long>(W.bit_length()) - static_cast<long>(L.bit_length()) + 1;
    auto fits = [&](long ex) {
        return ex >= 0 ? L * pow2i(ex) <= W : L <= W * pow2i(-ex);
    };
    while (!fits(e)) --e;
    long r = std::max(1L, e >= 0 ? e / 2 : -1);
    r = std::min(r, 30L);

    const Integer two_r = pow2i(r);
    const Integer m_start = std::max(Integer(1), Rational(Integer(r) * L, Integer(8)).floor());
    if (!m_start.fits_long()) throw DomainError("layer budget too large");

    for (long m = m_start.to_long(); m >= 1; --m) {
        const long k = (m + r - 1) / r;
        if (Integer(3 + 5 * k) > L) continue;
        const Integer fixed = Integer(2) + Integer(4 * m) +
                              Integer(k) * ((Integer(11 + r)) * two_r + Integer(2 * r + 2));
        const Integer n_max = W - fixed;
        const Integer n = std::min(W - Integer(5 * m) * two_r, n_max);
        if (n < Integer(1) || !n.fits_long()) continue;
        ShatterPlan plan = ShatterPlan::make(r, m, n.to_long());
        return LowerBoundPlan{plan, Integer(m) * n, closed_form_counts(plan)};
    }
    throw DomainError("no shattering network fits in W = " + W.str() + " parameters and L = " + L.str() +
                      " layers (needs L >= 8 and room for one extraction block)");
}

Network build_sawtooth_mod2(long m) {
    if (m < 1) throw DomainError("sawtooth depth m must be at least 1");
    if (m > 62) throw DomainError("sawtooth depth m must be at most 62");
    const Rational half(1, 2);
    NetworkBuilder nb(1);
    // layer 1 scales the input into [0, 1]
    const Rational scale = Rational::pow2(-m);
    NodeIndex rise = nb.add_unit("t1.rise", 0, Activation::relu());
    nb.add_edge(nb.input(0), rise, scale);
    NodeIndex fall = nb.add_unit("t1.fall", -half, Activation::relu());
    nb.add_edge(nb.input(0), fall, scale);
    // each later layer applies T to 2 rise - 4 fall
    for (long step = 2; step <= m; ++step) {
        const std::string p = "t" + std::to_string(step);
        NodeIndex next_rise = nb.add_unit(p + ".rise", 0, Activation::relu());
        NodeIndex next_fall = nb.add_unit(p + ".fall", -half, Activation::relu());
        for (NodeIndex target : {next_rise, next_fall}) {
            nb.add_edge(rise, target, 2);
            nb.add_edge(fall, target, -4);
        }
        rise = next_rise;
        fall = next_fall;
    }
    NodeIndex out = nb.add_unit("out", 0, Activation::identity());
    nb.add_edge(rise, out, 2);
    nb.add_edge(fall, out, -4);
    return nb.build(out);
}

Mod2Report verify_mod2_barrier(const Network& net, long m, const Integer& p, const Integer& d) {
    if (net.input_count() != 1) throw ArityError("mod-2 check needs a univariate network");
    if (m < 1 || m > kMod2CheckCap) throw DomainError("mod-2 check needs 1 <= m <= " + std::to_string(kMod2CheckCap));
    const ArchSummary arch = summarize(net);
    Mod2Report report;
    report.m = m;
    report.W = arch.W;
    report.L = arch.L;
    report.property_holds = true;

    const Rational half(1, 2);
    const unsigned long long count = 1ULL << m;
    std::vector<Rational> x(1);
    for (unsigned long long v = 0; v < count; ++v) {
        x[0] = Rational(Integer(static_cast<unsigned long>(v)));
        Rational y = forward_eval(net, x);
        if (!((y - Rational(static_cast<long>(v % 2))).abs() < half)) {
            report.property_holds = false;
            report.failing_input = v;
            report.failing_output = y;
            break;
        }
    }
    if (report.property_holds) {
        report.barrier = barrier_bound_thm9(arch.W, Integer(static_cast<unsigned long>(arch.L)), p, d);
        report.within_barrier = Rational(m) <= report.barrier->lo;
    }
    return report;
}

} // namespace vclab
