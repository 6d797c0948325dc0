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

#include "selftest.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "upb/protocols.hpp"
#include "upb/sep.hpp"
#include "upb/verify.hpp"

namespace upb::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
    std::ostringstream s;
    s << std::setprecision(3) << x;
    return s.str();
}

// Shipped protocols seen while checking; criterion 11 re-validates them.
struct Seen {
    std::vector<Protocol> protocols;
};

struct Check {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string &what) { detail += (detail.empty() ? "" : "; ") + what; }
};

DiscriminationReport discriminate(const StateSet &s, const Protocol &p, Seen &seen) {
    seen.protocols.push_back(p);
    return check_perfect_discrimination(s, validated(p));
}

Check tiles_check(Seen &seen) {
    Check c;
    auto t0 = Clock::now();
    auto s = tiles();
    auto p = tiles_protocol();
    auto r = discriminate(s, p, seen);
    double dt = seconds_since(t0);
    double worst_sum = 0.0;
    for (const auto &m : r.members) {
        worst_sum = std::max(worst_sum, std::abs(m.probability_sum - 1.0));
    }
    auto ent = resource_entanglement(p.resource);
    c.require(ent.schmidt_rank == 2 && std::abs(ent.ebits - 1.0) < 1e-12, "resource is not a 2x2 MES");
    c.require(r.pass, "discrimination failed");
    c.require(worst_sum <= 1e-9, "probability sum off by " + num(worst_sum));
    c.require(dt < 1.0, "took " + num(dt) + " s");
    c.note("defect " + num(r.worst_defect) + ", " + num(dt) + " s");
    return c;
}

Check pes_failure() {
    Check c;
    double ov = pes_overlap_experiment(std::sqrt(0.6), std::sqrt(0.4));
    c.require(std::abs(ov - 0.2) <= 1e-9, "overlap " + num(ov) + " != 0.2");
    double ov_mes = pes_overlap_experiment(std::sqrt(0.5), std::sqrt(0.5));
    c.require(ov_mes <= 1e-12, "MES overlap " + num(ov_mes));

    auto run_with = [&](std::vector<double> l2, std::string &text) {
        std::ostringstream out, err;
        Context ctx{out, err, Tolerance{}};
        RunArgs a;
        a.family = "tiles";
        a.resource = std::move(l2);
        int code = cmd_run(a, ctx);
        text = out.str();
        return code;
    };
    std::string text;
    int code = run_with({0.6, 0.4}, text);
    c.require(code == kExitFail && text.find("FAIL") != std::string::npos, "run with 0.6,0.4 did not FAIL");
    c.require(text.find("overlap |l0^2 - l1^2| = 0.200000") != std::string::npos,
              "run did not report overlap 0.200000");
    code = run_with({0.5, 0.5}, text);
    c.require(code == kExitPass && text.find("PASS") != std::string::npos, "run with 0.5,0.5 did not PASS");
    c.note("overlap " + num(ov) + " / " + num(ov_mes));
    return c;
}

Check upb3x3(Seen &seen) {
    Check c;
    auto t0 = Clock::now();
    double worst = 0.0;
    int failed = 0;
    for (std::uint64_t seed = 1; seed <= 100; seed++) {
        auto s = random_3x3_upb(seed);
        auto canon = canonicalize_3x3(s);
        auto p = upb3x3_protocol(canon);
        auto r = seed == 1 ? discriminate(canon, p, seen) : check_perfect_discrimination(canon, validated(p));
        worst = std::max(worst, r.worst_defect);
        if (!r.pass || r.worst_defect > 1e-8) {
            failed++;
        }
    }
    double dt = seconds_since(t0);
    c.require(failed == 0, std::to_string(failed) + " of 100 seeds failed");
    c.require(dt < 30.0, "took " + num(dt) + " s");
    c.note("100 seeds, worst defect " + num(worst) + ", " + num(dt) + " s");
    return c;
}

Check gentiles1_check(bool long_tier, Seen &seen) {
    Check c;
    std::vector<std::pair<int, double>> cases = {{4, 10.0}, {6, 10.0}};
    if (long_tier) {
        cases.emplace_back(8, 120.0);
    }
    for (auto [m, limit] : cases) {
        auto t0 = Clock::now();
        auto s = gentiles1(m);
        auto p = gentiles1_protocol(s);
        auto r = discriminate(s, p, seen);
        double dt = seconds_since(t0);
        std::string tag = "m=" + std::to_string(m);
        c.require(resource_entanglement(p.resource).schmidt_rank == static_cast<std::size_t>(m / 2),
                  tag + " resource rank");
        c.require(r.pass && r.worst_defect <= 1e-9, tag + " failed");
        c.require(dt < limit, tag + " took " + num(dt) + " s");
        c.note(tag + " " + num(dt) + " s");
    }
    if (!long_tier) {
        c.note("m=8 in the long tier");
    }
    return c;
}

Check gentiles2_check(Seen &seen) {
    Check c;
    for (auto [m, n] : std::vector<std::pair<int, int>>{{4, 4}, {4, 6}, {5, 5}, {6, 7}}) {
        auto s = gentiles2(m, n);
        auto p = gentiles2_protocol(s);
        auto r = discriminate(s, p, seen);
        std::string tag = "(" + std::to_string(m) + "," + std::to_string(n) + ")";
        c.require(resource_entanglement(p.resource).schmidt_rank == static_cast<std::size_t>((m + 1) / 2),
                  tag + " resource rank");
        c.require(r.pass, tag + " failed");
    }
    bool refused = false;
    try {
        gentiles2_protocol(gentiles2(3, 4));
    } catch (const std::invalid_argument &e) {
        refused = std::string(e.what()).find("m = 3 is excluded") != std::string::npos;
    }
    c.require(refused, "m=3 was not refused");
    c.note("4 cases, m=3 refused");
    return c;
}

Check niset_cerf_check(Seen &seen) {
    Check c;
    for (const auto &dims : std::vector<std::vector<std::size_t>>{{2, 2, 2}, {3, 3, 3, 3}}) {
        auto s = niset_cerf(dims);
        for (std::size_t second : {1u, 2u}) {
            auto p = niset_cerf_protocol(s, 0, second);
            auto r = discriminate(s, p, seen);
            std::string tag = std::to_string(dims.size()) + " parties, MES 1-" + std::to_string(second + 1);
            const auto &pair = p.resource.pairs.at(0);
            c.require(p.resource.pairs.size() == 1 && pair.party1 == "A" &&
                          pair.party2 == party_name(second) && pair.coefficients.size() == 2,
                      tag + " resource");
            c.require(r.pass, tag + " failed");
        }
    }
    c.note("(2,2,2) and (3,3,3,3), MES on parties 1-2 and 1-3");
    return c;
}

Check unextendibility() {
    Check c;
    auto unext = [&](const StateSet &s, const std::string &tag) {
        c.require(check_unextendible(s).verdict == Extendibility::Unextendible, tag + " not certified");
    };
    unext(tiles(), "tiles");
    for (std::uint64_t seed = 1001; seed <= 1025; seed++) {
        unext(random_3x3_upb(seed), "random3x3 seed " + std::to_string(seed));
    }
    unext(gentiles2(4, 4), "gentiles2(4,4)");
    unext(niset_cerf({2, 2, 2}), "niset_cerf(2,2,2)");
    unext(niset_cerf({3, 3, 3, 3}), "niset_cerf(3,3,3,3)");
    auto t = tiles();
    auto r = check_unextendible(t.without(*t.stopper()));
    c.require(r.verdict == Extendibility::Extendible, "tiles minus stopper not extendible");
    if (r.verdict == Extendibility::Extendible) {
        // Independent recheck of the witness.
        Ket w = product_ket(t.layout(), r.witness);
        double worst = 0.0;
        for (std::size_t i = 0; i < t.size(); i++) {
            if (i != *t.stopper()) {
                worst = std::max(worst, std::abs(inner_product(w, t.ket(i))));
            }
        }
        c.require(std::abs(w.norm() - 1.0) < 1e-9 && worst <= 1e-9, "witness overlap " + num(worst));
        c.note("witness overlap " + num(worst));
    }
    return c;
}

Check sep_check() {
    Check c;
    for (auto s : {tiles(), gentiles2(4, 4)}) {
        auto basis = complete_after_removal(s);
        auto m = build_sep_measurement(basis);
        const auto &layout = m.layout;
        auto d = static_cast<Eigen::Index>(layout.total_dim());
        Matrix sum = Matrix::Zero(d, d);
        bool rank_one_product = true;
        for (std::size_t k = 0; k < m.size(); k++) {
            Matrix P = m.projector(k);
            sum += P;
            Eigen::SelfAdjointEigenSolver<Matrix> es(P);
            int big = 0;
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); i++) {
                big += es.eigenvalues()[i] > 1e-9;
            }
            Ket v(layout, m.vector(k));
            rank_one_product = rank_one_product && big == 1 &&
                               schmidt_decomposition(v, layout.labels_of("A")).rank() == 1;
        }
        double defect = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
        auto r = check_sep_discrimination(s, m);
        std::string tag = s.family().name;
        c.require(defect <= 1e-10, tag + " projector sum defect " + num(defect));
        c.require(rank_one_product, tag + " has a projector that is not rank-1 product");
        c.require(r.pass, tag + " members not identified");
        c.note(tag + " " + std::to_string(m.size()) + " projectors");
    }
    return c;
}

Check nlwe_variants(Seen &seen) {
    Check c;
    auto run = [&](const StateSet &s, const Protocol &p, std::size_t expect, const std::string &tag) {
        c.require(s.size() == expect, tag + " has " + std::to_string(s.size()) + " states");
        c.require(discriminate(s, p, seen).pass, tag + " failed");
    };
    auto nt = nlwe_of(tiles());
    run(nt, tiles_protocol(nt), 9, "nlwe tiles");
    auto sq = tiles_squared();
    auto psq = tiles_squared_protocol(sq);
    c.require(resource_entanglement(psq.resource).schmidt_rank == 2, "tiles_squared resource");
    run(sq, psq, 36, "tiles_squared");
    auto upb = niset_cerf({3, 3, 3, 3});
    auto nlwe = nlwe_of(upb);
    auto pn = nlwe_protocol("niset_cerf", {{"dims", {3, 3, 3, 3}}});
    run(nlwe, pn, 81, "nlwe niset_cerf");
    // Same inputs (the UPB members) through both trees.
    auto pu = validated(niset_cerf_protocol(upb));
    auto vn = validated(pn);
    std::size_t steps_upb = 0, steps_nlwe = 0;
    RunOptions opts;
    opts.keep_states = false;
    for (std::size_t i = 0; i < upb.size(); i++) {
        for (const auto &b : run_protocol(upb.ket(i), pu, opts)) {
            steps_upb += b.pruned ? 0 : b.measurements();
        }
        for (const auto &b : run_protocol(upb.ket(i), vn, opts)) {
            steps_nlwe += b.pruned ? 0 : b.measurements();
        }
    }
    c.require(steps_nlwe > steps_upb, "NLWE trace is not longer");
    c.note("measurement steps over the UPB inputs: " + std::to_string(steps_upb) + " vs " +
           std::to_string(steps_nlwe));
    return c;
}

Check tensor_powers(Seen &seen) {
    Check c;
    auto t0 = Clock::now();
    auto s = tensor_power(tiles(), tiles());
    auto p = tensor_protocol(tiles_protocol(), tiles_protocol());
    auto r = discriminate(s, p, seen);
    double dt = seconds_since(t0);
    auto parties = s.layout().parties();
    c.require(s.size() == 25 && parties.size() == 2 &&
                  s.layout().dim_of(s.layout().labels_of("A")) == 9 &&
                  s.layout().dim_of(s.layout().labels_of("B")) == 9,
              "not 25 states on 9x9");
    c.require(resource_entanglement(p.resource).schmidt_rank == 4, "combined Schmidt rank is not 4");
    c.require(r.pass, "discrimination failed");
    c.require(dt < 60.0, "took " + num(dt) + " s");
    c.note(num(dt) + " s");
    return c;
}

Check engine_invariants(const Seen &seen) {
    Check c;
    std::mt19937_64 rng(20261015);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int k = 0; k < 20; k++) {
        std::size_t d = 2 + static_cast<std::size_t>(k % 3);
        Vector psi(static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < psi.size(); i++) {
            psi[i] = Complex(g(rng), g(rng));
        }
        auto r = teleportation_demo(psi.normalized());
        worst = std::max(worst, std::abs(r.fidelity - 1.0));
    }
    c.require(worst <= 1e-10, "teleportation fidelity off by " + num(worst));
    std::size_t steps = 0;
    for (const auto &p : seen.protocols) {
        auto rep = validate_protocol(*p.root, attach_resource(p.principal, p.resource), 1e-9);
        c.require(rep.ok && rep.projective, p.name + " fails validation");
        steps += rep.measurement_count;
    }
    c.note("fidelity defect " + num(worst) + ", " + std::to_string(seen.protocols.size()) + " protocols, " +
           std::to_string(steps) + " measurements validated");
    return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(bool long_tier) {
    Seen seen;
    std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"Tiles protocol, 2x2 MES", [&] { return tiles_check(seen); }},
        {"PES failure", [&] { return pes_failure(); }},
        {"3x3 UPBs, 100 seeds", [&] { return upb3x3(seen); }},
        {"GenTiles1", [&] { return gentiles1_check(long_tier, seen); }},
        {"GenTiles2", [&] { return gentiles2_check(seen); }},
        {"Niset-Cerf", [&] { return niset_cerf_check(seen); }},
        {"Unextendibility oracle", [&] { return unextendibility(); }},
        {"Separable measurement", [&] { return sep_check(); }},
        {"NLWE variants", [&] { return nlwe_variants(seen); }},
        {"Tensor powers", [&] { return tensor_powers(seen); }},
        {"Engine invariants", [&] { return engine_invariants(seen); }},
    };
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < criteria.size(); i++) {
        CriterionResult r;
        r.id = static_cast<int>(i + 1);
        r.name = criteria[i].first;
        auto t0 = Clock::now();
        try {
            Check c = criteria[i].second();
            r.pass = c.pass;
            r.detail = c.detail;
        } catch (const std::exception &e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = seconds_since(t0);
        out.push_back(std::move(r));
    }
    return out;
}

int run_selftest(bool long_tier, std::ostream &out) {
    bool all = true;
    for (const auto &r : run_acceptance(long_tier)) {
        all = all && r.pass;
        out << (r.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << r.name << "  ("
            << r.detail << ")\n";
    }
    out << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all ? kExitPass : kExitFail;
}

}  // namespace upb::cli
