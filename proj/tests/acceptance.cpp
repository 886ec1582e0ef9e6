// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "helpers.hpp"
#include "vclab/bounds.hpp"
#include "vclab/parallel.hpp"
#include "vclab/shatter.hpp"

using namespace vclab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (pass) detail.str("");
        pass = false;
        detail << why << "; ";
    }
};

struct Criterion {
    int id;
    std::string name;
    double time_limit_s;
    std::function<void(Outcome&)> body;
};

const std::size_t kThreads = resolve_threads();

using Triple = std::tuple<long, long, long>;  // (m, n, r)
const std::vector<Triple> kShatterCases{{2, 2, 1}, {2, 3, 1}, {3, 2, 1}, {4, 3, 2}};

void exhaustive_shattering(Outcome& o) {
    for (auto [m, n, r] : kShatterCases) {
        ShatterReport rep = verify_shattering_exhaustive(ShatterPlan::make(r, m, n), kThreads);
        o.detail << "(m=" << m << ",n=" << n << ",r=" << r << ") " << rep.realized() << "/" << rep.results.size() << "  ";
        if (!rep.shattered() || rep.results.size() != (1ULL << (m * n))) o.fail("not shattered at m=" + std::to_string(m));
    }
}

void structural_counts(Outcome& o) {
    int cases = 0;
    for (long r = 1; r <= 3; ++r) {
        for (long m = r; m <= 6; ++m) {
            for (long n = 1; n <= 8; ++n) {
                long k = (m + r - 1) / r, two_r = 1L << r;
                StructureCounts want{3 + 5 * k, 2 + n + 4 * m + k * ((11 + r) * two_r + 2 * r + 2), m + n,
                                     m + 2 + k * (5 * two_r + r + 1)};
                ShatterPlan plan = ShatterPlan::make(r, m, n);
                StructureCounts got = measure(build_shatter_network(plan, LabelMatrix(n, m)));
                ++cases;
                if (!(got == want) || !(closed_form_counts(plan) == want)) o.fail("counts differ at r=" + std::to_string(r) + " m=" + std::to_string(m) + " n=" + std::to_string(n));
            }
        }
    }
    o.detail << cases << " (r,m,n) cases, zero deviation";
}

void gadget_exactness(Outcome& o) {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 50; ++t) {
        Rational a = testing::random_rational(rng, 4, 16);
        Rational b = a + testing::random_rational(rng, 2, 16).abs();
        Rational eps = testing::random_rational(rng, 1, 32).abs() + Rational(1, 256);
        Network net = build_indicator({a, b, eps});
        ArchSummary s = summarize(net);
        if (s.L != 3 || s.U != Integer(5) || s.W != Integer(11)) o.fail("structure");
        PwlFunction f = symbolic_forward(net);
        const auto& bps = f.breakpoints();
        for (std::size_t i = 0; i < f.piece_count(); ++i) {
            const Affine& piece = f.pieces()[i];
            // piece i covers [left, right); unbounded ends are probed one unit out
            Rational left = i == 0 ? bps.front() - 1 : bps[i - 1];
            Rational right = i + 1 == f.piece_count() ? bps.back() + 1 : bps[i];
            bool unbounded = i == 0 || i + 1 == f.piece_count();
            bool meets_low_zone = left < a - eps;
            bool meets_high_zone = b + eps < right;
            if ((meets_low_zone || meets_high_zone) && !(piece == Affine{0, 0})) o.fail("nonzero outside (a-eps, b+eps)");
            if (max(left, a) < min(right, b) && !(piece == Affine{0, 1})) o.fail("not 1 on [a, b]");
            if (unbounded && !piece.slope.is_zero()) o.fail("unbounded piece is not constant");
            for (const Rational& x : {left, right}) {
                Rational y = piece(x);
                if (y < Rational(0) || Rational(1) < y) o.fail("range leaves [0, 1]");
            }
        }
        if (f(a) != Rational(1) || f(b) != Rational(1)) o.fail("endpoint values");
        if (!f(a - eps).is_zero() || !f(b + eps).is_zero()) o.fail("nonzero at a-eps or b+eps");
        if (bps.front() < a - eps || b + eps < bps.back()) o.fail("breakpoints outside [a-eps, b+eps]");
    }
    o.detail << "50 random (a, b, eps) triples checked piece by piece";
}

void extraction_soundness(Outcome& o) {
    std::vector<std::pair<long, long>> jobs;
    for (long m = 1; m <= 10; ++m) {
        for (long r = 1; r <= m; ++r) jobs.emplace_back(m, r);
    }
    std::vector<std::string> failures(jobs.size());
    parallel_for(jobs.size(), kThreads, [&](std::size_t idx) {
        auto [m, r] = jobs[idx];
        ExtractionBlock blk = build_extraction_block(r, m);
        std::vector<Rational> x(1);
        for (unsigned long v = 0; v < (1UL << m); ++v) {
            x[0] = Rational(Integer(v), Integer::pow2(static_cast<unsigned long>(m)));
            std::vector<Rational> values = forward_all(blk.network, x);
            for (long t = 1; t <= r; ++t) {
                if (values[blk.outputs[t - 1]] != Rational(static_cast<long>((v >> (m - t)) & 1UL))) {
                    failures[idx] = "bit mismatch m=" + std::to_string(m) + " r=" + std::to_string(r);
                    return;
                }
            }
            Rational rest(Integer(v & ((1UL << (m - r)) - 1)), Integer::pow2(static_cast<unsigned long>(m - r)));
            if (values[blk.outputs[r]] != rest) {
                failures[idx] = "remainder mismatch m=" + std::to_string(m) + " r=" + std::to_string(r);
                return;
            }
        }
    });
    for (const auto& f : failures) {
        if (!f.empty()) o.fail(f);
    }
    o.detail << jobs.size() << " (m, r) pairs, all 2^m grid inputs";
}

void breakpoint_property(Outcome& o) {
    std::mt19937_64 rng(88);
    std::size_t nodes = 0, max_bps = 0;
    for (int t = 0; t < 200; ++t) {
        Network net = testing::random_relu_net(rng, 3, 4, 3);
        for (const NodeBreakpoints& row : analyze_breakpoints(net)) {
            ++nodes;
            max_bps = std::max(max_bps, row.breakpoints);
            Integer b(static_cast<unsigned long>(row.breakpoints));
            if (!(b <= row.lemma8_iterated)) o.fail("iterated breakpoint bound exceeded");
            if (!(b <= row.path_bound)) o.fail("per-node path bound exceeded");
        }
    }
    o.detail << "200 networks, " << nodes << " units, max breakpoints " << max_bps;
}

void mod2_barrier(Outcome& o) {
    for (long m = 1; m <= 10; ++m) {
        Network net = build_sawtooth_mod2(m);
        std::vector<Rational> x(1);
        for (long v = 0; v < (1L << m); ++v) {
            x[0] = Rational(v);
            if (forward_eval(net, x) != Rational(v % 2)) o.fail("inexact at m=" + std::to_string(m));
        }
        ArchSummary s = summarize(net);
        Enclosure barrier = barrier_bound_thm9(s.W, Integer(static_cast<unsigned long>(s.L)), 2, 1);
        if (!(Rational(m) <= barrier.lo)) o.fail("m=" + std::to_string(m) + " above barrier");
        if (m == 10) o.detail << "m=10: W=" << s.W << " L=" << s.L << " barrier " << barrier.hi.decimal(2);
    }
}

ArchSummary random_summary(std::mt19937_64& rng, std::optional<long> degree = std::nullopt) {
    int L = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<Integer> k, Wi;
    for (int i = 0; i < L; ++i) {
        long ki = std::uniform_int_distribution<long>(1, 8)(rng);
        k.push_back(ki);
        Wi.push_back(ki * std::uniform_int_distribution<long>(1, 6)(rng));
    }
    long p = std::uniform_int_distribution<long>(1, 4)(rng);
    long d = degree.value_or(std::uniform_int_distribution<long>(0, 3)(rng));
    return ArchSummary::from_layers(k, Wi, p, d);
}

// Univariate ReLU net with 1-2 hidden layers of 1-2 units.
Network tiny_net(std::mt19937_64& rng) { return testing::random_relu_net(rng, 2, 2, 2); }

void bound_calculators(Outcome& o) {
    // growth inversion against brute force
    long checked = 0;
    for (long r : {16, 32, 64}) {
        for (long w = 1; w <= 8; ++w) {
            for (long t = 0; t <= w; ++t) {
                Enclosure bound = invert_growth_lemma10(t, w, r);
                for (long m = 1; m <= 200; ++m) {
                    Integer lhs = Integer::pow2(static_cast<unsigned long>(m)) * Integer::pow(Integer(w), static_cast<unsigned long>(w));
                    Integer rhs = Integer::pow2(static_cast<unsigned long>(t)) * Integer::pow(Integer(m * r), static_cast<unsigned long>(w));
                    if (lhs <= rhs) {
                        ++checked;
                        if (!(Rational(m) <= bound.lo)) o.fail("growth inversion violated");
                    }
                }
            }
        }
    }
    o.detail << "inversion: " << checked << " feasible m checked; ";

    std::mt19937_64 rng(77);
    for (int t = 0; t < 100; ++t) {
        ArchSummary a = random_summary(rng);
        GrowthBound g = growth_bound_thm3(a, a.Wi_sum());
        if (!(g.product.hi <= g.simplified.hi)) o.fail("product form above simplified form");
    }
    int specializations = 0;
    for (int t = 0; t < 100; ++t) {
        ArchSummary a = random_summary(rng, 1);
        Integer sum_ik = 0;
        for (std::size_t i = 0; i < a.k.size(); ++i) sum_ik += Integer(static_cast<long>(i + 1)) * a.k[i];
        if (a.R != sum_ik) o.fail("R at d=1 differs from sum i k_i");
        if (a.U <= Integer(2)) continue;
        DepthVcBound b = vc_bound_thm3(a);
        ++specializations;
        if (!b.piecewise_linear || !(*b.piecewise_linear == b.general)) o.fail("d=1 form differs from general form");
    }
    o.detail << "100 product/simplified pairs; " << specializations << " d=1 identities; ";

    std::size_t worst_distinct = 0;
    for (int t = 0; t < 20; ++t) {
        Network net = tiny_net(rng);
        ArchSummary a = summarize(net);
        const Integer m = a.Wi_sum();  // = ceil(Lbar W), already an integer
        std::vector<std::vector<Rational>> points;
        for (long i = 0; Integer(i) < m; ++i) points.push_back({Rational(2 * i - m.to_long(), 3)});
        std::size_t distinct = estimate_sign_patterns(net, points, 100000, static_cast<std::uint64_t>(t), kThreads);
        worst_distinct = std::max(worst_distinct, distinct);
        GrowthBound g = growth_bound_thm3(a, m);
        if (!(Rational(static_cast<long>(distinct)) <= g.product.lo)) o.fail("sampled patterns exceed growth bound");
    }
    o.detail << "20 nets sampled 1e5 times, max distinct " << worst_distinct;
}

void upper_vs_lower(Outcome& o) {
    for (auto [m, n, r] : kShatterCases) {
        ShatterPlan plan = ShatterPlan::make(r, m, n);
        ArchSummary a = summarize(build_shatter_network(plan, LabelMatrix(n, m)));
        Rational mn(m * n);
        Enclosure depth = vc_bound_thm3(a).general;
        Enclosure unit = vc_bound_thm6(a.W, a.U, a.p, a.d);
        if (!(mn <= depth.lo)) o.fail("depth-weighted bound below mn");
        if (!(mn <= unit.lo)) o.fail("unit-count bound below mn");
        o.detail << "(m=" << m << ",n=" << n << ",r=" << r << ") mn=" << m * n << " <= " << depth.floor() << ", "
                 << unit.floor() << "  ";
    }
}

} // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "exhaustive shattering", 60, exhaustive_shattering},
        {2, "structural count exactness", 60, structural_counts},
        {3, "indicator gadget exactness", 5, gadget_exactness},
        {4, "extraction block soundness", 30, extraction_soundness},
        {5, "breakpoint bounds on random ReLU networks", 60, breakpoint_property},
        {6, "mod-2 barrier consistency", 30, mod2_barrier},
        {7, "bound calculators", 120, bound_calculators},
        {8, "upper bounds dominate certified lower bounds", 60, upper_vs_lower},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.time_limit_s) {
            std::ostringstream why;
            why << "took " << secs << " s, limit " << c.time_limit_s << " s";
            o.fail(why.str());
        }
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " [" << timing << "]  "
                  << o.detail.str() << std::endl;
        if (!o.pass) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
