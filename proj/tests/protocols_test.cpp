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


#include "upb/protocols.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "upb/verify.hpp"

using namespace upb;

namespace {

DiscriminationReport check(const StateSet &s, const Protocol &p) {
    return check_perfect_discrimination(s, validated(p));
}

// Total probability of the branches of `input` whose path starts with `prefix`.
double prefix_probability(const Ket &input, const ValidatedProtocol &vp,
                          const std::vector<std::pair<std::string, std::string>> &prefix,
                          std::set<std::string> *leaves = nullptr) {
    double p = 0.0;
    for (const auto &b : run_protocol(input, vp)) {
        if (b.pruned || b.path.size() < prefix.size()) continue;
        if (!std::equal(prefix.begin(), prefix.end(), b.path.begin())) continue;
        p += b.probability;
        if (leaves) leaves->insert(b.leaf);
    }
    return p;
}

}  // namespace

TEST(TilesProtocol, Perfect) {
    auto r = check(tiles(), tiles_protocol());
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.worst_defect, 1e-10);
    auto e = resource_entanglement(tiles_protocol().resource);
    EXPECT_NEAR(e.ebits, 1.0, 1e-12);
}

TEST(TilesProtocol, BobMinusBranchLeadsToPsi2) {
    auto s = tiles();
    auto vp = validated(tiles_protocol());
    std::vector<std::pair<std::string, std::string>> path = {{"B", "B1"}, {"A", "A1"}, {"B", "|0-1>_B"}};
    std::set<std::string> leaves;
    EXPECT_GT(prefix_probability(s.ket(s.index_of("Psi2")), vp, path, &leaves), 0.1);
    EXPECT_EQ(leaves, std::set<std::string>{"Psi2"});
    for (const auto &m : s.members()) {
        if (m.label != "Psi2") {
            EXPECT_LE(prefix_probability(s.ket(s.index_of(m.label)), vp, path), 1e-12) << m.label;
        }
    }
}

TEST(Canonicalize, IdentityOnCanonicalInput) {
    auto s = random_3x3_upb(3);
    auto perm = canonical_permutation_3x3(s);
    EXPECT_EQ(perm, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Canonicalize, RecoversShuffledSet) {
    std::mt19937_64 rng(17);
    auto s = random_3x3_upb(8);
    std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
    auto shuffled = s.permuted(perm);
    EXPECT_THROW(upb3x3_protocol(shuffled), std::invalid_argument);
    auto c = canonicalize_3x3(shuffled);
    for (std::size_t i = 0; i < 5; i++) {
        for (std::size_t j = i + 1; j < 5; j++) {
            double a = std::abs(c.members()[i].parts.at("A").dot(c.members()[j].parts.at("A")));
            double b = std::abs(c.members()[i].parts.at("B").dot(c.members()[j].parts.at("B")));
            bool a_edge = j - i == 1 || j - i == 4;
            EXPECT_EQ(a <= 1e-9, a_edge);
            EXPECT_EQ(b <= 1e-9, !a_edge);
        }
    }
    EXPECT_TRUE(check(c, upb3x3_protocol(c)).pass);
}

TEST(Canonicalize, TilesConforms) {
    auto c = canonicalize_3x3(tiles());
    EXPECT_EQ(c.size(), 5u);
    EXPECT_TRUE(check(c, upb3x3_protocol(c)).pass);
}

TEST(Canonicalize, RejectsOtherSets) {
    EXPECT_THROW(canonicalize_3x3(gentiles1(4)), std::invalid_argument);
}

TEST(Upb3x3Protocol, HundredSeeds) {
    for (std::uint64_t seed = 0; seed < 100; seed++) {
        auto s = random_3x3_upb(seed);
        auto r = check(s, upb3x3_protocol(s));
        EXPECT_TRUE(r.pass) << "seed " << seed;
        EXPECT_LE(r.worst_defect, 1e-9);
    }
}

TEST(Upb3x3Protocol, SlidRowOutcome) {
    auto s = random_3x3_upb(1);
    auto vp = validated(upb3x3_protocol(s));
    std::set<std::string> leaves;
    double p = prefix_probability(s.ket(0), vp, {{"B", "B1"}, {"A", "|1a0>"}}, &leaves);
    EXPECT_NEAR(p, 0.5, 1e-10);
    EXPECT_EQ(leaves, std::set<std::string>{"Psi0"});
}

TEST(GenTiles1Protocol, PerfectAndResource) {
    auto r6 = check(gentiles1(6), gentiles1_protocol(6));
    EXPECT_TRUE(r6.pass);
    EXPECT_EQ(r6.members.size(), 25u);
    EXPECT_EQ(gentiles1_protocol(6).resource.pairs[0].coefficients.size(), 3u);
    EXPECT_TRUE(check(gentiles1(4), gentiles1_protocol(4)).pass);
}

TEST(GenTiles1Protocol, FirstTileGroupAtM6) {
    auto s = gentiles1(6);
    auto vp = validated(gentiles1_protocol(s));
    std::set<int> tiles_seen;
    bool stopper_seen = false;
    for (std::size_t i = 0; i < s.size(); i++) {
        if (prefix_probability(s.ket(i), vp, {{"B", "B0"}, {"A", "A0"}}) > 1e-12) {
            if (s.members()[i].tile) {
                tiles_seen.insert(*s.members()[i].tile);
            } else {
                stopper_seen = true;
            }
        }
    }
    EXPECT_EQ(tiles_seen, (std::set<int>{1, 2, 7, 10}));
    EXPECT_TRUE(stopper_seen);
}

TEST(GenTiles2Protocol, Perfect) {
    for (auto [m, n] : std::vector<std::pair<int, int>>{{4, 4}, {4, 6}, {6, 7}, {5, 5}}) {
        auto r = check(gentiles2(m, n), gentiles2_protocol(m, n));
        EXPECT_TRUE(r.pass) << m << "x" << n;
    }
}

TEST(GenTiles2Protocol, RefusesMThree) {
    try {
        gentiles2_protocol(3, 4);
        FAIL() << "expected refusal";
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("m = 3"), std::string::npos);
    }
}

TEST(NisetCerfProtocol, Perfect) {
    auto s4 = niset_cerf({3, 3, 3, 3});
    auto p = niset_cerf_protocol(s4);
    EXPECT_EQ(p.resource.pairs.size(), 1u);
    EXPECT_EQ(p.resource.pairs[0].coefficients.size(), 2u);
    EXPECT_TRUE(check(s4, p).pass);
    EXPECT_TRUE(check(s4, niset_cerf_protocol(s4, 0, 2)).pass);
    auto s3 = niset_cerf({2, 2, 2});
    EXPECT_TRUE(check(s3, niset_cerf_protocol(s3)).pass);
}

TEST(NisetCerfProtocol, StopperComplementBranch) {
    auto s = niset_cerf({3, 3, 3, 3});
    auto vp = validated(niset_cerf_protocol(s));
    double p_rest = 0.0;
    for (const auto &b : run_protocol(s.ket(*s.stopper()), vp)) {
        if (b.pruned) continue;
        EXPECT_EQ(b.leaf, "F");
        bool rest = std::any_of(b.path.begin(), b.path.end(), [](const auto &x) { return x.second == "rest"; });
        if (rest) p_rest += b.probability;
    }
    EXPECT_GT(p_rest, 0.0);
}

TEST(NlweProtocol, Perfect) {
    EXPECT_TRUE(check(nlwe_of(tiles()), nlwe_protocol("tiles")).pass);
    EXPECT_TRUE(check(tiles_squared(), tiles_squared_protocol(tiles_squared())).pass);
    auto n = nlwe_of(niset_cerf({3, 3, 3, 3}));
    auto r = check(n, nlwe_protocol("niset_cerf", {{"dims", {3, 3, 3, 3}}}));
    EXPECT_TRUE(r.pass);
}

TEST(NlweProtocol, MoreStepsThanUpbProtocol) {
    auto s = niset_cerf({3, 3, 3, 3});
    auto upb_rep = check(s, niset_cerf_protocol(s));
    auto n = nlwe_of(s);
    auto vp = validated(nlwe_protocol("niset_cerf", {{"dims", {3, 3, 3, 3}}}));
    RunOptions opt;
    opt.keep_states = false;
    std::size_t nlwe_steps = 0;
    for (std::size_t i = 0; i < s.size(); i++) {
        for (const auto &b : run_protocol(s.ket(i), vp, opt)) {
            if (!b.pruned) nlwe_steps += b.measurements();
        }
    }
    EXPECT_GT(nlwe_steps, upb_rep.total_measurements);
}

TEST(TensorProtocol, TilesSquaredSystem) {
    auto p1 = tiles_protocol();
    auto p = tensor_protocol(p1, p1);
    auto s = tensor_power(tiles(), tiles());
    auto vp = validated(p);
    EXPECT_EQ(vp.report().depth, 2 * validated(p1).report().depth);
    auto r = check_perfect_discrimination(s, vp);
    EXPECT_TRUE(r.pass);
    for (const auto &m : r.members) EXPECT_NEAR(m.probability_sum, 1.0, 1e-10);
    EXPECT_EQ(resource_entanglement(p.resource).schmidt_rank, 4u);
}

TEST(Builders, Deterministic) {
    auto a = validated(gentiles2_protocol(4, 6));
    auto b = validated(gentiles2_protocol(4, 6));
    auto s = gentiles2(4, 6);
    for (std::size_t i = 0; i < s.size(); i++) {
        auto x = run_protocol(s.ket(i), a), y = run_protocol(s.ket(i), b);
        ASSERT_EQ(x.size(), y.size());
        for (std::size_t k = 0; k < x.size(); k++) {
            EXPECT_EQ(x[k].path, y[k].path);
            EXPECT_EQ(x[k].probability, y[k].probability);
        }
    }
}

TEST(ShippedProtocol, Dispatch) {
    EXPECT_EQ(shipped_protocol(tiles()).name, "tiles");
    EXPECT_THROW(shipped_protocol(gentiles2(3, 4)), std::invalid_argument);
}
