#include "vclab/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "vclab/bounds.hpp"
#include "vclab/error.hpp"
#include "vclab/network_io.hpp"
#include "vclab/parallel.hpp"
#include "vclab/shatter.hpp"

namespace vclab {

namespace {

using nlohmann::json;

struct Context {
    std::ostream& out;
    bool json_output = false;
    std::optional<std::size_t> threads;

    std::size_t worker_count() const { return resolve_threads(threads); }
    void emit(const json& doc) const { out << doc.dump(2) << "\n"; }
};

json rational_json(const Rational& v) { return json{{"value", v.str()}, {"approx", v.to_double()}}; }

json enclosure_json(const Enclosure& e) {
    return json{{"value", e.hi.str()}, {"lower", e.lo.str()}, {"approx", e.hi.to_double()}, {"floor", e.floor().str()}};
}

json integers_json(const std::vector<Integer>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(x.str());
    return a;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

// ---- bounds ---------------------------------------------------------------

struct BoundRow {
    std::string name;
    std::string label;
    std::optional<Enclosure> value;
    std::string status = "ok";
    std::string message;
};

BoundRow evaluate_row(std::string name, std::string label, const std::function<Enclosure()>& fn) {
    BoundRow row{std::move(name), std::move(label), std::nullopt, "ok", ""};
    try {
        row.value = fn();
    } catch (const ConditionError& e) {
        row.status = "condition not met";
        row.message = e.what();
    } catch (const DomainError& e) {
        row.status = "condition not met";
        row.message = e.what();
    }
    return row;
}

int cmd_bounds(const Context& ctx, const std::string& arch_path, bool thm3, bool thm6, bool thm9) {
    if (!thm3 && !thm6 && !thm9) thm3 = thm6 = thm9 = true;

    auto loaded = load_architecture(arch_path);
    std::optional<std::size_t> inputs;
    ArchSummary arch;
    if (auto* net = std::get_if<Network>(&loaded)) {
        arch = summarize(*net);
        inputs = net->input_count();
    } else {
        arch = std::get<ArchSummary>(loaded);
    }
    const Integer L(static_cast<unsigned long>(arch.L));

    std::vector<BoundRow> rows;
    if (thm3) {
        std::optional<DepthVcBound> depth;
        BoundRow general = evaluate_row("thm3", "depth-weighted VC", [&] {
            depth = vc_bound_thm3(arch);
            return depth->general;
        });
        rows.push_back(general);
        if (depth && depth->piecewise_constant) {
            rows.push_back(BoundRow{"thm3_d0", "depth-weighted VC, d=0 form", depth->piecewise_constant, "ok", ""});
        }
        if (depth && depth->piecewise_linear) {
            rows.push_back(BoundRow{"thm3_d1", "depth-weighted VC, d=1 form", depth->piecewise_linear, "ok", ""});
        }
    }
    if (thm6) {
        rows.push_back(evaluate_row("thm6", "unit-count VC", [&] { return vc_bound_thm6(arch.W, arch.U, arch.p, arch.d); }));
    }
    if (thm9) {
        rows.push_back(evaluate_row("thm9", "mod-2 barrier", [&] { return barrier_bound_thm9(arch.W, L, arch.p, arch.d); }));
    }
    const bool all_ok = std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.value.has_value(); });

    if (ctx.json_output) {
        json a{{"W", arch.W.str()}, {"U", arch.U.str()}, {"L", arch.L}, {"p", arch.p.str()}, {"d", arch.d.str()},
               {"k", integers_json(arch.k)}, {"Wi", integers_json(arch.Wi())}, {"sum_Wi", arch.Wi_sum().str()},
               {"Lbar", rational_json(arch.Lbar)}, {"R", arch.R.str()}};
        if (inputs) a["inputs"] = *inputs;
        json list = json::array();
        for (const auto& r : rows) {
            json row{{"name", r.name}, {"label", r.label}, {"status", r.status}};
            if (r.value) row.update(enclosure_json(*r.value));
            if (!r.message.empty()) row["message"] = r.message;
            list.push_back(row);
        }
        ctx.emit(json{{"architecture", a}, {"bounds", list}});
    } else {
        ctx.out << "architecture: W=" << arch.W << " U=" << arch.U << " L=" << arch.L << " p=" << arch.p << " d=" << arch.d;
        if (inputs) ctx.out << " inputs=" << *inputs;
        ctx.out << "\n  sum W_i=" << arch.Wi_sum() << "  Lbar=" << describe(arch.Lbar) << "  R=" << arch.R << "\n\n";
        ctx.out << pad("bound", 30) << pad("floor", 14) << "value\n";
        for (const auto& r : rows) {
            if (r.value) {
                ctx.out << pad(r.label, 30) << pad(r.value->floor().str(), 14) << describe(r.value->hi) << "\n";
            } else {
                ctx.out << pad(r.label, 30) << pad("-", 14) << r.status << ": " << r.message << "\n";
            }
        }
    }
    return all_ok ? kExitOk : kExitConditionNotMet;
}

// ---- shatter ----------------------------------------------------------------

LabelMatrix load_labels_for(const ShatterPlan& plan, const std::string& path) {
    LabelMatrix f = load_labels(path);
    if (f.n() != static_cast<std::size_t>(plan.n) || f.m() != static_cast<std::size_t>(plan.m)) {
        throw ValidationError(ValidationError::Kind::malformed,
                              "'" + path + "' holds a " + std::to_string(f.n()) + "x" + std::to_string(f.m()) +
                                  " labelling, expected n x m = " + std::to_string(plan.n) + "x" + std::to_string(plan.m));
    }
    return f;
}

json counts_json(const StructureCounts& c) {
    return json{{"layers", c.layers.str()}, {"params", c.params.str()}, {"inputs", c.inputs.str()}, {"units", c.units.str()}};
}

int cmd_shatter_build(const Context& ctx, const ShatterPlan& plan, const std::string& labels_path, const std::string& out_path) {
    const LabelMatrix f = load_labels_for(plan, labels_path);
    const Network net = build_shatter_network(plan, f);
    save_network(net, out_path);
    const StructureCounts got = measure(net);
    const StructureCounts want = closed_form_counts(plan);
    if (ctx.json_output) {
        ctx.emit(json{{"out", out_path}, {"counts", counts_json(got)}, {"matches_closed_form", got == want}});
    } else {
        ctx.out << "wrote " << out_path << ": layers=" << got.layers << " params=" << got.params << " inputs=" << got.inputs
                << " units=" << got.units << (got == want ? " (matches closed-form counts)" : " (DIFFERS from closed-form counts)")
                << "\n";
    }
    return got == want ? kExitOk : kExitVerificationFailed;
}

constexpr std::size_t kListedResults = 256;

int cmd_shatter_verify(const Context& ctx, const ShatterPlan& plan, bool exhaustive, const std::vector<std::string>& label_paths) {
    if (exhaustive == !label_paths.empty()) throw DomainError("shatter verify needs exactly one of --exhaustive or --labels");

    ShatterReport report;
    if (exhaustive) {
        report = verify_shattering_exhaustive(plan, ctx.worker_count());
    } else {
        std::vector<LabelMatrix> labelings;
        for (const auto& p : label_paths) labelings.push_back(load_labels_for(plan, p));
        report = verify_shattering(plan, labelings, ctx.worker_count());
    }
    const std::size_t total = report.results.size();
    const std::size_t realized = report.realized();
    const bool list_all = total <= kListedResults;
    const Integer mn = Integer(plan.m) * Integer(plan.n);

    if (ctx.json_output) {
        json results = json::array();
        for (const auto& r : report.results) {
            if (!list_all && r.pass) continue;
            json row{{"index", r.index}, {"pass", r.pass}};
            if (!exhaustive) row["labels"] = label_paths[r.index];
            if (r.counterexample) row["counterexample"] = {{"j", r.counterexample->first}, {"i", r.counterexample->second}};
            results.push_back(row);
        }
        ctx.emit(json{{"plan", {{"r", plan.r}, {"m", plan.m}, {"n", plan.n}, {"k", plan.k()}}},
                      {"mode", exhaustive ? "exhaustive" : "given"},
                      {"total", total},
                      {"realized", realized},
                      {"passes_listed", list_all},
                      {"results", results},
                      {"shattered", report.shattered()},
                      {"vc_lower_bound", report.shattered() ? json(mn.str()) : json(nullptr)}});
    } else {
        for (const auto& r : report.results) {
            if (!list_all && r.pass) continue;
            ctx.out << "labeling " << r.index;
            if (!exhaustive) ctx.out << " (" << label_paths[r.index] << ")";
            if (r.pass) {
                ctx.out << ": pass\n";
            } else {
                ctx.out << ": FAIL at (e_" << r.counterexample->first << ", e_" << r.counterexample->second << ")\n";
            }
        }
        if (!list_all) ctx.out << "(" << realized << " passing labelings not listed)\n";
        ctx.out << realized << "/" << total << " realized";
        if (report.shattered()) {
            ctx.out << "; VCdim ≥ " << mn << " certified";
        } else if (exhaustive) {
            ctx.out << "; not shattered";
        }
        ctx.out << "\n";
    }
    return report.all_pass() ? kExitOk : kExitVerificationFailed;
}

// ---- pwl regions ---------------------------------------------------------

int cmd_regions(const Context& ctx, const std::string& net_path) {
    const Network net = load_network(net_path);
    if (net.input_count() != 1) {
        throw UnsupportedError("pwl regions needs a univariate network, '" + net_path + "' has " +
                               std::to_string(net.input_count()) + " inputs");
    }
    const PwlFunction f = symbolic_forward(net);
    const std::vector<NodeBreakpoints> rows = analyze_breakpoints(net);
    const ArchSummary arch = summarize(net);
    const bool ok = std::all_of(rows.begin(), rows.end(), [](const NodeBreakpoints& r) { return r.within_bounds(); });
    const auto out_row = std::find_if(rows.begin(), rows.end(), [&](const NodeBreakpoints& r) { return r.node == net.output(); });

    if (ctx.json_output) {
        json bps = json::array();
        for (const auto& b : f.breakpoints()) bps.push_back(b.str());
        json nodes = json::array();
        for (const auto& r : rows) {
            nodes.push_back(json{{"id", net.node_id(r.node)},
                                 {"layer", r.layer},
                                 {"breakpoints", r.breakpoints},
                                 {"paths", r.paths.str()},
                                 {"path_bound", r.path_bound.str()},
                                 {"step_bound", r.lemma8_step.str()},
                                 {"iterated_bound", r.lemma8_iterated.str()},
                                 {"within_bounds", r.within_bounds()}});
        }
        ctx.emit(json{{"breakpoints", breakpoint_count(f)},
                      {"regions", f.piece_count()},
                      {"breakpoint_values", bps},
                      {"p", arch.p.str()},
                      {"d", arch.d.str()},
                      {"L", arch.L},
                      {"output_bound", out_row->path_bound.str()},
                      {"nodes", nodes},
                      {"within_bounds", ok}});
    } else {
        ctx.out << "output: " << breakpoint_count(f) << " breakpoints, " << f.piece_count() << " linear pieces\n";
        if (!f.breakpoints().empty()) {
            ctx.out << "breakpoints:";
            for (const auto& b : f.breakpoints()) ctx.out << " " << b;
            ctx.out << "\n";
        }
        ctx.out << "output bound (6p)^L d^(L(L-1)/2) gamma - 1 = (6*" << arch.p << ")^" << arch.L << " * " << out_row->paths
                << " - 1 = " << out_row->path_bound << (out_row->within_bounds() ? "  ✓" : "  ✗") << "\n\n";
        ctx.out << pad("node", 16) << pad("layer", 7) << pad("bps", 6) << pad("paths", 10) << pad("path bound", 16)
                << pad("step bound", 12) << "iterated bound\n";
        for (const auto& r : rows) {
            ctx.out << pad(net.node_id(r.node), 16) << pad(std::to_string(r.layer), 7) << pad(std::to_string(r.breakpoints), 6)
                    << pad(r.paths.str(), 10) << pad(r.path_bound.str(), 16) << pad(r.lemma8_step.str(), 12)
                    << r.lemma8_iterated << (r.within_bounds() ? "" : "  EXCEEDED") << "\n";
        }
        ctx.out << (ok ? "all units within bounds" : "bound exceeded") << "\n";
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

// ---- mod2 ----------------------------------------------------------------

int cmd_mod2(const Context& ctx, long m, bool check_barrier, const std::string& net_path) {
    if (m < 1 || m > kMod2CheckCap) throw DomainError("--m must be in [1, " + std::to_string(kMod2CheckCap) + "]");
    const Network net = net_path.empty() ? build_sawtooth_mod2(m) : load_network(net_path);
    if (net.input_count() != 1) throw ArityError("mod2 needs a univariate network");

    const unsigned long long total = 1ULL << m;
    unsigned long long exact = 0;
    std::vector<Rational> x(1);
    for (unsigned long long v = 0; v < total; ++v) {
        x[0] = Rational(Integer(static_cast<unsigned long>(v)));
        if (forward_eval(net, x) == Rational(static_cast<long>(v % 2))) ++exact;
    }
    const ArchSummary arch = summarize(net);
    std::optional<Mod2Report> report;
    if (check_barrier) report = verify_mod2_barrier(net, m, arch.p, std::max(arch.d, Integer(1)));

    bool ok = exact == total;
    if (report) ok = ok && report->property_holds && report->within_barrier.value_or(false);

    if (ctx.json_output) {
        json doc{{"m", m}, {"exact", exact}, {"total", total}, {"W", arch.W.str()}, {"L", arch.L}};
        if (report) {
            doc["property_holds"] = report->property_holds;
            if (report->failing_input) {
                doc["failing_input"] = *report->failing_input;
                doc["failing_output"] = report->failing_output->str();
            }
            if (report->barrier) {
                doc["barrier"] = enclosure_json(*report->barrier);
                doc["within_barrier"] = *report->within_barrier;
            }
        }
        ctx.emit(doc);
    } else {
        ctx.out << exact << "/" << total << " exact";
        if (report) {
            if (!report->property_holds) {
                ctx.out << "; approximation fails at x=" << *report->failing_input << " (f(x) = " << *report->failing_output
                        << "), barrier check skipped";
            } else {
                ctx.out << "; m=" << m << (*report->within_barrier ? " ≤ barrier ✓" : " > barrier ✗");
            }
        }
        ctx.out << "\n";
        if (report && report->barrier) {
            ctx.out << "barrier L log2(13 p d^((L+1)/2) W / L) with W=" << arch.W << " L=" << arch.L << " p=" << arch.p
                    << ": " << describe(report->barrier->hi) << "\n";
        }
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

// ---- growth sample ---------------------------------------------------------

int cmd_growth(const Context& ctx, const std::string& net_path, const std::string& points_path, std::size_t samples,
               std::uint64_t seed) {
    const Network net = load_network(net_path);
    const auto points = load_points(points_path);
    if (points.empty()) throw DomainError("points file holds no points");
    const std::size_t distinct = estimate_sign_patterns(net, points, samples, seed, ctx.worker_count());

    const ArchSummary arch = summarize(net);
    const Integer m(static_cast<unsigned long>(points.size()));
    const Integer trivial = Integer::pow2(points.size());
    std::optional<GrowthBound> growth;
    std::string regime_note;
    try {
        growth = growth_bound_thm3(arch, m);
    } catch (const RegimeError& e) {
        regime_note = e.what();
    }
    const Integer d(static_cast<unsigned long>(distinct));
    const bool ok = d <= trivial && (!growth || Rational(d) <= growth->product.lo);

    if (ctx.json_output) {
        json doc{{"distinct", distinct}, {"points", points.size()}, {"samples", samples}, {"seed", seed},
                 {"trivial_bound", trivial.str()}, {"sum_Wi", arch.Wi_sum().str()}, {"within_bound", ok}};
        if (growth) {
            doc["bound"] = enclosure_json(growth->product);
            doc["simplified_bound"] = enclosure_json(growth->simplified);
        } else {
            doc["bound"] = nullptr;
            doc["regime"] = regime_note;
        }
        ctx.emit(doc);
    } else {
        ctx.out << "points=" << points.size() << " samples=" << samples << " seed=" << seed << "\n";
        if (growth) {
            ctx.out << "distinct=" << distinct << (ok ? " ≤ " : " > ") << "bound=" << describe(growth->product.hi) << "\n";
            ctx.out << "simplified bound=" << describe(growth->simplified.hi) << "\n";
        } else {
            ctx.out << "distinct=" << distinct << (ok ? " ≤ " : " > ") << "2^m=" << trivial << "\n";
            ctx.out << regime_note << "\n";
        }
    }
    return ok ? kExitOk : kExitVerificationFailed;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact construction and certification of VC-dimension bounds for piecewise-linear networks", "vclab"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json_output = false;
    std::optional<std::size_t> threads;
    app.add_flag("--json", json_output, "Emit machine-readable JSON");
    app.add_option("--threads", threads, "Worker threads (default: $VCLAB_THREADS, else all cores)")->check(CLI::PositiveNumber);

    std::function<int(const Context&)> action;

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Evaluate VC-dimension bounds for an architecture");
    std::string arch_path;
    bool thm3 = false, thm6 = false, thm9 = false, all = false;
    bounds->add_option("--arch", arch_path, "Network file or summary file")->required();
    bounds->add_flag("--thm3", thm3, "Depth-weighted VC bound");
    bounds->add_flag("--thm6", thm6, "Unit-count VC bound");
    bounds->add_flag("--thm9", thm9, "Mod-2 approximation depth barrier");
    bounds->add_flag("--all", all, "All bounds (default)");
    bounds->callback([&] {
        action = [&](const Context& c) { return cmd_bounds(c, arch_path, thm3 || all, thm6 || all, thm9 || all); };
    });

    // shatter build / verify
    auto* shatter = app.add_subcommand("shatter", "Shattering networks on S_n x S_m");
    shatter->require_subcommand(1);
    long m = 0, n = 0, r = 1;
    auto add_plan = [&](CLI::App* sub) {
        sub->add_option("--m", m, "Label width (bits per row)")->required();
        sub->add_option("--n", n, "Number of rows")->required();
        sub->add_option("--r", r, "Bits per extraction block")->capture_default_str();
    };
    auto* build = shatter->add_subcommand("build", "Build the network realizing one labelling");
    add_plan(build);
    std::string labels_path, out_path;
    build->add_option("--labels", labels_path, "Label file: n lines of m '0'/'1' characters")->required();
    build->add_option("--out", out_path, "Network file to write")->required();
    build->callback([&] {
        action = [&](const Context& c) { return cmd_shatter_build(c, ShatterPlan::make(r, m, n), labels_path, out_path); };
    });
    auto* verify = shatter->add_subcommand("verify", "Check that the construction realizes labellings");
    add_plan(verify);
    bool exhaustive = false;
    std::vector<std::string> label_paths;
    verify->add_flag("--exhaustive", exhaustive, "All 2^(mn) labellings (mn <= 24)");
    verify->add_option("--labels", label_paths, "Label files to check (repeatable)");
    verify->callback([&] {
        action = [&](const Context& c) { return cmd_shatter_verify(c, ShatterPlan::make(r, m, n), exhaustive, label_paths); };
    });

    // pwl regions
    auto* pwl = app.add_subcommand("pwl", "Symbolic analysis of univariate networks");
    pwl->require_subcommand(1);
    auto* regions = pwl->add_subcommand("regions", "Breakpoints of the computed function against their bounds");
    std::string net_path;
    regions->add_option("--net", net_path, "Network file")->required();
    regions->callback([&] { action = [&](const Context& c) { return cmd_regions(c, net_path); }; });

    // mod2
    auto* mod2 = app.add_subcommand("mod2", "Check x mod 2 on {0, ..., 2^m - 1}");
    long mod_m = 0;
    bool check_barrier = false;
    std::string mod_net;
    mod2->add_option("--m", mod_m, "Number of bits")->required();
    mod2->add_flag("--check-barrier", check_barrier, "Also compare m with the depth barrier");
    mod2->add_option("--net", mod_net, "Univariate network to check (default: the tent-map construction)");
    mod2->callback([&] { action = [&](const Context& c) { return cmd_mod2(c, mod_m, check_barrier, mod_net); }; });

    // growth sample
    auto* growth = app.add_subcommand("growth", "Sign-pattern growth");
    growth->require_subcommand(1);
    auto* sample = growth->add_subcommand("sample", "Count sign patterns under random parameters");
    std::string growth_net, points_path;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    sample->add_option("--net", growth_net, "Network file")->required();
    sample->add_option("--points", points_path, "Points file")->required();
    sample->add_option("--samples", samples, "Parameter samples")->capture_default_str()->check(CLI::PositiveNumber);
    sample->add_option("--seed", seed, "Random seed")->capture_default_str();
    sample->callback([&] { action = [&](const Context& c) { return cmd_growth(c, growth_net, points_path, samples, seed); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    Context ctx{out, json_output, threads};
    try {
        return action(ctx);
    } catch (const ConditionError& e) {
        err << "condition not met: " << e.what() << "\n";
        return kExitConditionNotMet;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitInputError;
}

} // namespace vclab
