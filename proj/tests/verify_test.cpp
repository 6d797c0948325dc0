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


#include "upb/verify.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "upb/protocols.hpp"

using namespace upb;

namespace {

std::size_t rank_of(const std::vector<Vector> &vs, std::size_t dim) {
    if (vs.empty()) return 0;
    Matrix m(dim, vs.size());
    for (std::size_t i = 0; i < vs.size(); i++) m.col(i) = vs[i];
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-9);
    return static_cast<std::size_t>(lu.rank());
}

// Brute force over all 2^n splits of a bipartite set.
bool brute_force_extendible(const StateSet &s) {
    const std::size_t n = s.size();
    std::size_t da = s.layout().factor("A").dim, db = s.layout().factor("B").dim;
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); mask++) {
        std::vector<Vector> a, b;
        for (std::size_t i = 0; i < n; i++) {
            if (mask >> i & 1) a.push_back(s.members()[i].parts.at("A"));
            else b.push_back(s.members()[i].parts.at("B"));
        }
        if (rank_of(a, da) < da && rank_of(b, db) < db) return true;
    }
    return false;
}

StateSet corrupted_tiles() {
    auto s = tiles();
    auto members = s.members();
    members[s.index_of("Psi1")].parts = {{"A", basis_vector(3, 0)}, {"B", basis_vector(3, 0)}};
    return StateSet::unchecked(s.layout(), members, s.tiles(), s.family(), s.stopper());
}

}  // namespace

TEST(Orthogonality, TilesPass) {
    auto r = check_orthogonality(tiles());
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_overlap, 1e-12);
    EXPECT_TRUE(check_orthogonality(gentiles2(6, 7)).pass);
}

TEST(Orthogonality, CorruptedMemberFails) {
    auto r = check_orthogonality(corrupted_tiles());
    EXPECT_FALSE(r.pass);
    ASSERT_TRUE(r.worst_pair);
    EXPECT_EQ(*r.worst_pair, std::make_pair(std::string("Psi1"), std::string("F")));
    EXPECT_NEAR(r.max_overlap, 1.0 / 3.0, 1e-12);
}

TEST(Unextendible, TilesIsUpb) {
    auto s = tiles();
    EXPECT_FALSE(brute_force_extendible(s));
    auto r = check_unextendible(s);
    EXPECT_EQ(r.verdict, Extendibility::Unextendible);
    EXPECT_GT(r.nodes, 0u);
}

TEST(Unextendible, TilesWithoutStopperHasWitness) {
    auto s = tiles().without(4);
    EXPECT_TRUE(brute_force_extendible(s));
    auto r = check_unextendible(s);
    ASSERT_EQ(r.verdict, Extendibility::Extendible);
    Ket w = product_ket(s.layout(), r.witness);
    EXPECT_NEAR(w.norm(), 1.0, 1e-10);
    for (std::size_t i = 0; i < s.size(); i++) {
        EXPECT_LE(std::abs(w.amplitudes().dot(s.ket(i).amplitudes())), 1e-9);
    }
    // The suggested witness |0+1>_A|0>_B is orthogonal too.
    Vector a = Vector::Zero(3), b = basis_vector(3, 0);
    a[0] = a[1] = 1.0 / std::sqrt(2.0);
    Ket alt = product_ket(s.layout(), {{"A", a}, {"B", b}});
    for (std::size_t i = 0; i < s.size(); i++) {
        EXPECT_LE(std::abs(inner_product(alt, s.ket(i))), 1e-12);
    }
}

TEST(Unextendible, Random3x3AndGenTiles) {
    for (std::uint64_t seed = 0; seed < 10; seed++) {
        auto s = random_3x3_upb(seed);
        EXPECT_FALSE(brute_force_extendible(s));
        EXPECT_EQ(check_unextendible(s).verdict, Extendibility::Unextendible);
    }
    auto g4 = gentiles1(4);
    EXPECT_FALSE(brute_force_extendible(g4));
    EXPECT_EQ(check_unextendible(g4).verdict, Extendibility::Unextendible);
    EXPECT_EQ(check_unextendible(gentiles1(6)).verdict, Extendibility::Unextendible);
    EXPECT_EQ(check_unextendible(gentiles2(4, 4)).verdict, Extendibility::Unextendible);
}

TEST(Unextendible, NisetCerfThreeParties) {
    EXPECT_EQ(check_unextendible(niset_cerf({2, 2, 2})).verdict, Extendibility::Unextendible);
}

TEST(Unextendible, NisetCerfFourQutrits) {
    auto s = niset_cerf({3, 3, 3, 3});
    auto r = check_unextendible(s);
    if (r.verdict == Extendibility::Extendible) {
        // Report the product vector the search found.
        Ket w = product_ket(s.layout(), r.witness);
        double worst = 0.0;
        for (std::size_t i = 0; i < s.size(); i++) worst = std::max(worst, std::abs(inner_product(w, s.ket(i))));
        ADD_FAILURE() << "orthogonal product vector found, max overlap " << worst;
    }
    EXPECT_EQ(r.verdict, Extendibility::Unextendible);
}

TEST(Unextendible, MemberLimit) {
    auto s = nlwe_of(gentiles1(6));
    EXPECT_THROW(check_unextendible(s), std::invalid_argument);
}

TEST(Discrimination, TilesPass) {
    auto r = check_perfect_discrimination(tiles(), validated(tiles_protocol()));
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.worst_defect, 1e-10);
    EXPECT_TRUE(r.mislabeled.empty());
}

TEST(Discrimination, ProductResourceFails) {
    ResourceSpec product{{partially_entangled({1.0}, "A", "B", 2)}};
    auto r = check_perfect_discrimination(tiles(), tiles_protocol(), product);
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.mislabeled.empty());
}

TEST(Discrimination, LeafOnlyFails) {
    auto s = tiles();
    Protocol p{"leaf", make_leaf("Psi1"), {}, s.layout()};
    auto r = check_perfect_discrimination(s, validated(p));
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.mislabeled.size(), 4u);
}

TEST(Entanglement, Reports) {
    auto r2 = resource_entanglement({{maximally_entangled(2)}});
    EXPECT_EQ(r2.schmidt_rank, 2u);
    EXPECT_NEAR(r2.ebits, 1.0, 1e-12);
    auto r3 = resource_entanglement({{maximally_entangled(3)}});
    EXPECT_EQ(r3.schmidt_rank, 3u);
    EXPECT_NEAR(r3.ebits, std::log2(3.0), 1e-12);
    auto p = resource_entanglement({{partially_entangled({std::sqrt(0.6), std::sqrt(0.4)})}});
    EXPECT_EQ(p.schmidt_rank, 2u);
    EXPECT_NEAR(p.ebits, -0.6 * std::log2(0.6) - 0.4 * std::log2(0.4), 1e-12);
    EXPECT_NEAR(p.ebits, 0.970951, 1e-6);
}

TEST(PesOverlap, Values) {
    EXPECT_NEAR(pes_overlap_experiment(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)), 0.0, 1e-12);
    EXPECT_NEAR(pes_overlap_experiment(std::sqrt(0.6), std::sqrt(0.4)), 0.2, 1e-12);
    EXPECT_THROW(pes_overlap_experiment(1.0, 0.0), std::invalid_argument);
}

TEST(PesOverlap, ExplicitVectorOracle) {
    // Psi4 = |0>(|1>-|2>), F = sum of all 9 cells; after B1 with l0|00>+l1|11>,
    // Psi4 -> l0|01>|00> - l1|02>|11>, F's matching cells -> l0|01>|00> + l1|02>|11>.
    double l0 = std::sqrt(0.7), l1 = std::sqrt(0.3);
    double want = std::abs(l0 * l0 - l1 * l1);
    EXPECT_NEAR(pes_overlap_experiment(l0, l1), want, 1e-12);
}
