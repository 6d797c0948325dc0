// Copyright 2026 The upb-locc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "selftest.hpp"
#include "upb/protocols.hpp"
#include "upb/render.hpp"
#include "upb/sep.hpp"
#include "upb/serialize.hpp"
#include "upb/verify.hpp"

namespace upb::cli {

namespace {

// Unextendibility checks on sets at least this large need --long.
constexpr std::size_t kLongMembers = 20;

Json read_json(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error &e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw std::invalid_argument("cannot write '" + path + "'");
    }
    f << text;
}

std::string fixed(double x, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << x;
    return s.str();
}

bool needs_long(const StateSet &s) {
    const auto &name = s.family().name;
    return (name == "gentiles1" || name == "nlwe:gentiles1") && s.layout().factors().front().dim >= 8;
}

}  // namespace

Tolerance tolerance_from_env() {
    Tolerance t;
    if (const char *v = std::getenv("LOCC_TOL")) {
        char *end = nullptr;
        double x = std::strtod(v, &end);
        if (end == v || *end != '\0' || !(x > 0.0)) {
            throw std::invalid_argument("LOCC_TOL must be a positive number");
        }
        t.compare = x;
    }
    return t;
}

int cmd_build(const std::string &family, const Params &params, const std::string &output, Context &ctx) {
    StateSet s = build_family(family, params);
    write_text(output, dump(to_json(s)), ctx.out);
    if (!output.empty() && output != "-") {
        ctx.out << "wrote " << s.size() << " states (" << s.family().name << ") to " << output << "\n";
    }
    return kExitPass;
}

int cmd_verify(const std::string &path, bool unextendible, bool long_tier, Context &ctx) {
    StateSet s = state_set_from_json(read_json(path));
    Json report = {{"family", s.family().name}, {"members", s.size()}};
    auto orth = check_orthogonality(s, ctx.tol.compare);
    report["orthogonality"] = to_json(orth);
    bool pass = orth.pass;
    if (unextendible) {
        if (s.size() >= kLongMembers && !long_tier) {
            ctx.err << "unextendibility check on " << s.size() << " members needs --long\n";
            return kExitUsage;
        }
        UnextendibleOptions opt;
        opt.force = long_tier;
        auto u = check_unextendible(s, opt);
        report["unextendible"] = to_json(u);
        pass = pass && u.verdict == Extendibility::Unextendible;
    }
    report["pass"] = pass;
    ctx.out << dump(report);
    return pass ? kExitPass : kExitFail;
}

int cmd_run(const RunArgs &args, Context &ctx) {
    StateSet s = build_family(args.family, args.params);
    if (needs_long(s) && !args.long_tier) {
        ctx.err << "GenTiles1 with m >= 8 needs --long\n";
        return kExitUsage;
    }
    Protocol p = shipped_protocol(s);
    std::optional<double> overlap;
    if (args.resource) {
        std::vector<double> coeffs;
        for (double l2 : *args.resource) {
            if (!(l2 > 0.0)) {
                throw std::invalid_argument("--resource entries must be positive");
            }
            coeffs.push_back(std::sqrt(l2));
        }
        if (coeffs.size() == 2) {
            overlap = pes_overlap_experiment(coeffs[0], coeffs[1]);
        }
        ResourceSpec r = p.resource;
        auto &pair = r.pairs.front();
        pair = partially_entangled(coeffs, pair.party1, pair.party2, pair.dim);
        p = with_resource(std::move(p), std::move(r));
    }
    auto vp = validated(p, ctx.tol.compare);
    auto ent = resource_entanglement(p.resource);

    ctx.out << "family " << s.family().name << ", protocol " << p.name << ", " << s.size()
            << " members, resource Schmidt rank " << ent.schmidt_rank << " (" << fixed(ent.ebits, 6)
            << " ebits)\n";
    RunOptions opts;
    opts.prune_tol = ctx.tol.prune;
    opts.keep_states = false;
    opts.max_depth = args.max_depth;
    Json traces = Json::array();
    DiscriminationReport rep;
    double min_sum = 1e300, max_sum = 0.0;
    for (std::size_t i = 0; i < s.size(); i++) {
        const auto &label = s.members()[i].label;
        auto branches = run_protocol(s.ket(i), vp, opts);
        if (!args.trace_path.empty()) {
            traces.push_back(trace_to_json(label, branches));
        }
        MemberOutcome mo;
        mo.label = label;
        for (const auto &b : branches) {
            if (b.pruned) {
                continue;
            }
            mo.branches++;
            mo.probability_sum += b.probability;
            mo.max_measurements = std::max(mo.max_measurements, b.measurements());
            if (b.leaf == label) {
                mo.correct_probability += b.probability;
            } else {
                rep.mislabeled.emplace_back(label, b.leaf, b.probability);
            }
        }
        min_sum = std::min(min_sum, mo.probability_sum);
        max_sum = std::max(max_sum, mo.probability_sum);
        rep.worst_defect = std::max(rep.worst_defect, std::abs(1.0 - mo.correct_probability));
        rep.max_measurements = std::max(rep.max_measurements, mo.max_measurements);
        ctx.out << "  " << std::left << std::setw(12) << label << std::right << " branches "
                << std::setw(4) << mo.branches << "  p_sum " << fixed(mo.probability_sum, 9)
                << "  correct " << fixed(mo.correct_probability, 9) << "\n";
    }
    rep.pass = rep.mislabeled.empty() && rep.worst_defect <= ctx.tol.compare;
    ctx.out << "probability sums: min " << fixed(min_sum, 9) << " max " << fixed(max_sum, 9) << "\n";
    ctx.out << "worst defect " << rep.worst_defect << ", mislabeled branches " << rep.mislabeled.size()
            << ", max measurements per branch " << rep.max_measurements << "\n";
    if (overlap) {
        ctx.out << "overlap |l0^2 - l1^2| = " << fixed(*overlap, 6) << "\n";
    }
    if (!args.trace_path.empty()) {
        Json params = Json::object();
        for (const auto &[k, v] : args.params) {
            params[k] = v;
        }
        Json doc = {{"schema", kTraceSchema},
                    {"family", {{"name", args.family}, {"params", params}}},
                    {"protocol", p.name},
                    {"runs", traces}};
        write_text(args.trace_path, dump(doc), ctx.out);
    }
    ctx.out << (rep.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? kExitPass : kExitFail;
}

int cmd_sep(const std::string &family, const Params &params, const std::string &removed, Context &ctx) {
    StateSet s = build_family(family, params);
    std::optional<std::size_t> idx;
    if (!removed.empty()) {
        idx = s.index_of(removed);
    }
    auto basis = complete_after_removal(s, idx);
    auto m = build_sep_measurement(basis);
    auto r = check_sep_discrimination(s, m, idx, ctx.tol.prune);
    Json doc = {{"family", s.family().name},
                {"basis_size", basis.size()},
                {"measurement", to_json(m)},
                {"report", to_json(r)}};
    ctx.out << dump(doc);
    return r.pass ? kExitPass : kExitFail;
}

int cmd_render(const std::string &path, std::size_t steps, Context &ctx) {
    Json j = read_json(path);
    std::string schema = j.value("schema", std::string());
    if (schema == kStateSetSchema) {
        ctx.out << render_state_set(state_set_from_json(j));
        return kExitPass;
    }
    if (schema != kTraceSchema) {
        throw std::invalid_argument("'" + path + "' is neither a state set nor a trace");
    }
    Params params;
    for (const auto &[k, v] : j.at("family").at("params").items()) {
        params[k] = v.get<std::vector<std::int64_t>>();
    }
    StateSet s = build_family(j.at("family").at("name").get<std::string>(), params);
    Protocol p = shipped_protocol(s);
    const auto &runs = j.at("runs");
    if (runs.empty() || runs[0].at("branches").empty()) {
        throw std::invalid_argument("trace has no branches");
    }
    // The first branch that is long enough fixes the outcomes to follow.
    std::vector<std::pair<std::string, std::string>> path_prefix;
    for (const auto &run : runs) {
        for (const auto &b : run.at("branches")) {
            if (b.at("path").size() >= steps && !b.at("pruned").get<bool>()) {
                for (std::size_t k = 0; k < steps; k++) {
                    path_prefix.emplace_back(b.at("path")[k][0].get<std::string>(),
                                             b.at("path")[k][1].get<std::string>());
                }
                ctx.out << render_images(s, p, path_prefix);
                return kExitPass;
            }
        }
    }
    throw std::invalid_argument("no branch with " + std::to_string(steps) + " measurements");
}

int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entanglement-assisted LOCC discrimination of unextendible product bases"};
    app.require_subcommand(1);
    double prune_tol = 1e-12;
    app.add_option("--prune-tol", prune_tol, "Drop branches with probability at or below this")
        ->check(CLI::PositiveNumber);

    std::string family, output, path, removed, trace;
    std::int64_t m = 0, n = 0, seed = 0;
    std::vector<std::int64_t> dims;
    std::vector<double> resource;
    bool unext = false, long_tier = false;
    std::size_t max_depth = 0, steps = 1;

    auto add_family = [&](CLI::App *sub) {
        sub->add_option("family", family, "tiles | gentiles1 | gentiles2 | niset_cerf | random3x3 | "
                                          "tiles_squared, optionally prefixed nlwe: or tensor:")
            ->required();
        sub->add_option("--m", m, "GenTiles dimension m");
        sub->add_option("--n", n, "GenTiles2 dimension n");
        sub->add_option("--dims", dims, "Niset-Cerf local dimensions")->delimiter(',');
        sub->add_option("--seed", seed, "random3x3 seed");
    };
    auto params = [&](CLI::App *sub) {
        Params p;
        if (sub->count("--m")) p["m"] = {m};
        if (sub->count("--n")) p["n"] = {n};
        if (sub->count("--dims")) p["dims"] = dims;
        if (sub->count("--seed")) p["seed"] = {seed};
        return p;
    };

    auto *build = app.add_subcommand("build", "Build a state family and write it as JSON");
    add_family(build);
    build->add_option("-o,--output", output, "Output file (default: stdout)");

    auto *verify = app.add_subcommand("verify", "Check orthogonality (and unextendibility) of a set file");
    verify->add_option("file", path)->required();
    verify->add_flag("--unextendible", unext, "Also run the unextendibility oracle");
    verify->add_flag("--long", long_tier, "Allow long-running checks");

    auto *run = app.add_subcommand("run", "Run the shipped protocol on every member");
    add_family(run);
    run->add_option("--resource", resource, "Squared Schmidt coefficients, e.g. 0.6,0.4")->delimiter(',');
    run->add_option("--trace", trace, "Write branch traces as JSON");
    run->add_option("--max-depth", max_depth, "Stop each branch after this many measurements");
    run->add_flag("--long", long_tier, "Allow long-running families");

    auto *sep = app.add_subcommand("sep", "Build and check the separable measurement");
    add_family(sep);
    sep->add_option("--removed", removed, "Label of the removed member (default: stopper)");

    auto *render = app.add_subcommand("render", "ASCII tile diagram of a set or trace file");
    render->add_option("file", path)->required();
    render->add_option("--steps", steps, "Measurements to follow in a trace")->check(CLI::PositiveNumber);

    auto *selftest = app.add_subcommand("selftest", "Run the acceptance suite");
    selftest->add_flag("--long", long_tier, "Include the long tier");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        Context ctx{out, err, tolerance_from_env()};
        ctx.tol.prune = prune_tol;
        if (*build) return cmd_build(family, params(build), output, ctx);
        if (*verify) return cmd_verify(path, unext, long_tier, ctx);
        if (*run) {
            RunArgs a{family, params(run), std::nullopt, trace, std::nullopt, long_tier};
            if (run->count("--resource")) a.resource = resource;
            if (run->count("--max-depth")) a.max_depth = max_depth;
            return cmd_run(a, ctx);
        }
        if (*sep) return cmd_sep(family, params(sep), removed, ctx);
        if (*render) return cmd_render(path, steps, ctx);
        if (*selftest) return run_selftest(long_tier, out);
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}

}  // namespace upb::cli
