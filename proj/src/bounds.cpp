#include "vclab/bounds.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "vclab/error.hpp"
#include "vclab/parallel.hpp"

namespace vclab {

namespace {

unsigned long to_exponent(const Integer& v, const char* what) {
    if (v.sign() < 0 || !v.fits_long()) throw DomainError(std::string(what) + " out of range");
    return static_cast<unsigned long>(v.to_long());
}

Enclosure scale(const Rational& c, const Enclosure& x) {
    if (c.sign() < 0) throw DomainError("negative scale factor");
    return Enclosure(c * x.lo, c * x.hi);
}

// 1 + (i-1) d^(i-1), with 0^0 = 1
Integer degree_factor(std::size_t i, const Integer& d) {
    return Integer(1) + Integer(static_cast<long>(i - 1)) * Integer::pow(d, i - 1);
}

// L + S log2(4 e p X log2(2 e p X))
Enclosure depth_vc_formula(std::size_t L, const Integer& S, const Integer& p, const Integer& X) {
    Enclosure two_epx = scale(Rational(Integer(2) * p * X), euler_e());
    Enclosure inner = scale(2, two_epx) * log2(two_epx);
    return Enclosure(Rational(Integer(static_cast<long>(L)))) + scale(Rational(S), log2(inner));
}

} // namespace

Enclosure warren_bound(const Integer& m, const Integer& n, const Integer& d) {
    if (n < Integer(1) || m < n) throw DomainError("warren bound needs 1 <= n <= m");
    if (d < Integer(1)) throw DomainError("warren bound needs degree d >= 1");
    Enclosure base = scale(Rational(Integer(2) * m * d, n), euler_e());
    return scale(2, pow(base, to_exponent(n, "n")));
}

GrowthBound growth_bound_thm3(const ArchSummary& arch, const Integer& m) {
    const Integer regime = arch.Wi_sum();
    if (m < regime) {
        throw RegimeError("growth bound holds for m >= Lbar*W = " + regime.str() + " points, got m = " + m.str() +
                          "; use the trivial bound 2^m");
    }
    const auto& Wi = arch.Wi();
    const Enclosure& e = euler_e();

    Enclosure product(1);
    for (std::size_t i = 1; i <= arch.L; ++i) {
        const Integer& w = Wi[i - 1];
        if (w.sign() == 0) continue;
        Rational ratio(Integer(2) * m * arch.k[i - 1] * arch.p * degree_factor(i, arch.d), w);
        product = product * scale(2, pow(scale(ratio, e), to_exponent(w, "W_i")));
    }

    Rational base(Integer(4) * m * arch.p * degree_factor(arch.L, arch.d));
    Enclosure simplified = pow(scale(base, e), to_exponent(regime, "sum W_i"));

    GrowthBound out{std::move(product), std::move(simplified), false};
    out.product_le_simplified = out.product.hi <= out.simplified.hi && out.product.lo <= out.simplified.lo;
    return out;
}

DepthVcBound vc_bound_thm3(const ArchSummary& arch) {
    if (arch.U <= Integer(2)) {
        throw ConditionError("depth-weighted VC bound needs more than 2 computation units, got U = " + arch.U.str());
    }
    DepthVcBound out{depth_vc_formula(arch.L, arch.Wi_sum(), arch.p, arch.R), std::nullopt, std::nullopt};
    if (arch.d.sign() == 0) out.piecewise_constant = depth_vc_formula(arch.L, arch.W, arch.p, arch.U);
    if (arch.d == Integer(1)) {
        Integer sum_ik = 0;
        for (std::size_t i = 1; i <= arch.L; ++i) sum_ik += Integer(static_cast<long>(i)) * arch.k[i - 1];
        out.piecewise_linear = depth_vc_formula(arch.L, arch.Wi_sum(), arch.p, sum_ik);
    }
    return out;
}

Enclosure vc_bound_thm6(const Integer& W, const Integer& U, const Integer& p, const Integer& d) {
    if (W < Integer(1) || U < Integer(1) || p < Integer(1) || d.sign() < 0) {
        throw DomainError("unit-count VC bound needs W, U, p >= 1 and d >= 0");
    }
    const unsigned long u = to_exponent(U, "U");
    Integer degree_cap = std::max(U + Integer(1), Integer(2) * Integer::pow(d, u));
    Rational arg(Integer(16) * degree_cap * Integer::pow(Integer(1) + p, u));
    return scale(Rational(Integer(2) * W), log2(scale(arg, euler_e())));
}

Enclosure barrier_bound_thm9(const Integer& W, const Integer& L, const Integer& p, const Integer& d) {
    if (W < Integer(1) || L < Integer(1) || p < Integer(1) || d < Integer(1)) {
        throw DomainError("mod-2 barrier needs W, L, p, d >= 1");
    }
    // log2(13 p W / L) + (L+1)/2 log2 d
    Enclosure log_arg = log2_enclosure(Rational(Integer(13) * p * W, L)) +
                        scale(Rational(L + Integer(1), Integer(2)), log2_enclosure(Rational(d)));
    Rational scale_by(L);
    return Enclosure(scale_by * log_arg.lo, scale_by * log_arg.hi);
}

Integer lemma8_bound(const Integer& B, const Integer& D, const Integer& b) {
    if (B.sign() < 0 || D.sign() < 0 || b.sign() < 0) throw DomainError("composition breakpoint bound needs B, D, b >= 0");
    return (B + Integer(1)) * (Integer(2) + b * D) - Integer(1);
}

Enclosure invert_growth_lemma10(const Integer& t, const Integer& w, const Rational& r) {
    if (r < Rational(16)) throw DomainError("growth inversion needs r >= 16, got " + r.str());
    if (t.sign() < 0 || w < t || w < Integer(1)) throw DomainError("growth inversion needs w >= t >= 0 and w >= 1");
    Enclosure inner = scale(2 * r, log2_enclosure(r));
    return Enclosure(Rational(t)) + scale(Rational(w), log2(inner));
}

Integer node_breakpoint_bound(std::size_t layer, const Integer& p, const Integer& d, const Integer& gamma) {
    const unsigned long i = layer;
    return Integer::pow(Integer(6) * p, i) * Integer::pow(d, i * (i - 1) / 2) * gamma - Integer(1);
}

Rational path_count_cap(const Integer& W, std::size_t L) {
    return Rational(Integer(2) * W, Integer(static_cast<long>(L))).pow(L);
}

std::vector<NodeBreakpoints> analyze_breakpoints(const Network& net) {
    const std::vector<PwlFunction> fn = symbolic_forward_all(net);
    const std::vector<Integer> gamma = path_counts(net);
    const ArchSummary arch = summarize(net);
    const Integer d = std::max(arch.d, Integer(1));

    std::vector<Integer> iterated(net.node_count(), Integer(0));
    std::vector<NodeBreakpoints> out;
    for (NodeIndex v : net.topological_order()) {
        const Activation& act = net.unit(v).activation;
        const Integer b(static_cast<unsigned long>(act.breakpoints()));

        std::vector<Rational> merged;
        int inner_degree = 0;
        Integer iterated_in = 0;
        for (std::size_t e : net.in_edges(v)) {
            NodeIndex u = net.edges()[e].from;
            merged.insert(merged.end(), fn[u].breakpoints().begin(), fn[u].breakpoints().end());
            inner_degree = std::max(inner_degree, fn[u].degree());
            iterated_in += iterated[u];
        }
        std::sort(merged.begin(), merged.end());
        merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
        iterated[v] = lemma8_bound(iterated_in, 1, b);

        out.push_back(NodeBreakpoints{
            v, net.layer(v), breakpoint_count(fn[v]), gamma[v], node_breakpoint_bound(net.layer(v), arch.p, d, gamma[v]),
            lemma8_bound(Integer(static_cast<unsigned long>(merged.size())), inner_degree, b), iterated[v]});
    }
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::size_t kSampleChunks = 64;

} // namespace

Rational sample_grid_value(std::uint64_t draw) { return Rational(static_cast<long>(draw % 17) - 8, 4); }

std::size_t estimate_sign_patterns(const Network& net, std::span<const std::vector<Rational>> points,
                                   std::size_t samples, std::uint64_t seed, std::size_t threads) {
    if (samples < 1) throw DomainError("need at least one parameter sample");
    for (const auto& x : points) {
        if (x.size() != net.input_count()) throw ArityError("sample point has the wrong number of coordinates");
    }
    const std::size_t W = net.edges().size() + net.unit_count();

    // Fixed chunking keeps the union of observed patterns independent of threads.
    std::vector<std::set<std::string>> seen(kSampleChunks);
    parallel_for(kSampleChunks, threads, [&](std::size_t chunk) {
        std::vector<Rational> params(W);
        std::vector<Rational> scratch;
        std::string pattern(points.size(), '0');
        for (std::size_t s = chunk; s < samples; s += kSampleChunks) {
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(s)));
            for (auto& w : params) w = sample_grid_value(rng());
            for (std::size_t j = 0; j < points.size(); ++j) {
                pattern[j] = forward_eval_with(net, params, points[j], scratch).sign() > 0 ? '1' : '0';
            }
            seen[chunk].insert(pattern);
        }
    });
    std::set<std::string> all;
    for (auto& s : seen) all.merge(s);
    return all.size();
}

} // namespace vclab
