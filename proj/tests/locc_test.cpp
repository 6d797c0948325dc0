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


#include "upb/locc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "upb/catalog.hpp"
#include "upb/protocols.hpp"
#include "upb/verify.hpp"

using namespace upb;

namespace {

double entropy(const EntangledPair &p) {
    double h = 0.0;
    for (double l : p.coefficients) {
        if (l > 0) h -= l * l * std::log2(l * l);
    }
    return h;
}

std::size_t idx(std::size_t A, std::size_t B, std::size_t a, std::size_t b) { return ((A * 3 + B) * 2 + a) * 2 + b; }

}  // namespace

TEST(Resource, MesEntropies) {
    EXPECT_NEAR(entropy(maximally_entangled(2)), 1.0, 1e-12);
    EXPECT_NEAR(maximally_entangled(2).coefficients[0], 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(entropy(maximally_entangled(1)), 0.0, 1e-12);
    EXPECT_NEAR(entropy(maximally_entangled(3)), std::log2(3.0), 1e-12);
}

TEST(Resource, PartialValidation) {
    EXPECT_THROW(ResourceSpec{{partially_entangled({0.5, 0.5})}}.validate(), std::invalid_argument);
    EXPECT_NO_THROW(ResourceSpec{{partially_entangled({std::sqrt(0.6), std::sqrt(0.4)})}}.validate());
}

TEST(Resource, AncillaLabels) {
    ResourceSpec one{{maximally_entangled(2)}};
    auto f = one.ancilla_factors();
    ASSERT_EQ(f.size(), 2u);
    EXPECT_EQ(f[0].label, "a");
    EXPECT_EQ(f[1].label, "b");
    ResourceSpec two{{maximally_entangled(2), maximally_entangled(2)}};
    auto g = two.ancilla_factors();
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g[0].label, "a1");
    EXPECT_EQ(g[3].label, "b2");
}

TEST(Prepare, AppendsPairAmplitudes) {
    auto s = tiles();
    ResourceSpec res{{maximally_entangled(2)}};
    Ket k = prepare(s.ket(0), res);
    EXPECT_EQ(k.dim(), 36u);
    EXPECT_NEAR(k.norm(), 1.0, 1e-12);
    Vector pair = Vector::Zero(4);
    pair[0] = pair[3] = 1.0 / std::sqrt(2.0);
    Vector want(36);
    for (Eigen::Index i = 0; i < 9; i++) want.segment(i * 4, 4) = s.ket(0).amplitudes()[i] * pair;
    EXPECT_LE((k.amplitudes() - want).norm(), 1e-15);
}

TEST(ControlledProjection, MatchesTilesSlide) {
    ResourceSpec res{{maximally_entangled(2)}};
    SystemLayout l = attach_resource(principal_layout({3, 3}), res);
    Matrix p01 = Matrix::Zero(3, 3), p2 = Matrix::Zero(3, 3);
    p01(0, 0) = p01(1, 1) = p2(2, 2) = 1.0;
    Operator op = controlled_projection({p01, p2}, "B", "b", l);
    Matrix b1 = Matrix::Zero(6, 6);  // on (b, B)
    b1(0, 0) = b1(1, 1) = b1(5, 5) = 1.0;
    EXPECT_LE((op.dense(l) - embed_local_operator(b1, {"b", "B"}, l).dense(l)).norm(), 1e-12);
}

TEST(ControlledProjection, NormSquaredIsAverage) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    SystemLayout principal({{"B", 3, "B"}});
    ResourceSpec res{{maximally_entangled(3, "A", "B")}};
    SystemLayout l = attach_resource(principal, res);
    Matrix p0 = Matrix::Zero(3, 3), p1 = Matrix::Zero(3, 3), p2 = Matrix::Zero(3, 3);
    p0(0, 0) = p1(1, 1) = p2(2, 2) = 1.0;
    Operator op = controlled_projection({p0, p1, p2}, "B", "b", l);
    for (int t = 0; t < 10; t++) {
        Vector psi(3);
        for (auto &x : psi) x = Complex(g(rng), g(rng));
        psi.normalize();
        Ket out = apply(op, prepare(Ket(principal, psi), res));
        double want = (std::norm(psi[0]) + std::norm(psi[1]) + std::norm(psi[2])) / 3.0;
        EXPECT_NEAR(out.amplitudes().squaredNorm(), want, 1e-12);
    }
}

TEST(ControlledProjection, RankOneIdentity) {
    SystemLayout principal({{"B", 3, "B"}});
    ResourceSpec res{{maximally_entangled(1, "A", "B")}};
    SystemLayout l = attach_resource(principal, res);
    Operator op = controlled_projection({Matrix::Identity(3, 3)}, "B", "b", l);
    EXPECT_LE((op.dense(l) - Matrix::Identity(3, 3)).norm(), 1e-12);
}

TEST(ControlledProjection, IncompleteThrows) {
    ResourceSpec res{{maximally_entangled(2)}};
    SystemLayout l = attach_resource(principal_layout({3, 3}), res);
    Matrix p01 = Matrix::Zero(3, 3), p1 = Matrix::Zero(3, 3);
    p01(0, 0) = p01(1, 1) = p1(1, 1) = 1.0;
    EXPECT_THROW(controlled_projection({p01, p1}, "B", "b", l), std::invalid_argument);
}

TEST(ApplyOutcome, Psi4SlideOutcome) {
    auto s = tiles();
    ResourceSpec res{{maximally_entangled(2)}};
    SystemLayout l = attach_resource(s.layout(), res);
    Matrix b1 = Matrix::Zero(6, 6);
    b1(0, 0) = b1(1, 1) = b1(5, 5) = 1.0;
    auto r = apply_outcome(prepare(s.ket(s.index_of("Psi4")), res), embed_local_operator(b1, {"b", "B"}, l));
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
    ASSERT_TRUE(r.post);
    Vector want = Vector::Zero(36);
    want[idx(0, 1, 0, 0)] = 1.0 / std::sqrt(2.0);
    want[idx(0, 2, 1, 1)] = -1.0 / std::sqrt(2.0);
    EXPECT_LE((r.post->amplitudes() - want).norm(), 1e-12);
}

TEST(ApplyOutcome, IdentityAndImpossible) {
    SystemLayout l({{"A", 2, "A"}});
    Ket k = Ket::basis(l, 0);
    auto id = apply_outcome(k, embed_local_operator(Matrix::Identity(2, 2), {"A"}, l));
    EXPECT_NEAR(id.probability, 1.0, 1e-15);
    EXPECT_EQ(id.post->amplitudes(), k.amplitudes());
    Matrix p1 = Matrix::Zero(2, 2);
    p1(1, 1) = 1.0;
    auto none = apply_outcome(k, embed_local_operator(p1, {"A"}, l));
    EXPECT_EQ(none.probability, 0.0);
    EXPECT_FALSE(none.post.has_value());
}

TEST(RunProtocol, TilesInputPsi2) {
    auto s = tiles();
    auto vp = validated(tiles_protocol());
    double total = 0.0;
    for (const auto &b : run_protocol(s.ket(s.index_of("Psi2")), vp)) {
        if (b.pruned) continue;
        EXPECT_EQ(b.leaf, "Psi2");
        total += b.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(RunProtocol, SingleLeaf) {
    Protocol p{"leaf", make_leaf("x"), {}, principal_layout({2, 2})};
    auto branches = run_protocol(Ket::basis(p.principal, 0), validated(p));
    ASSERT_EQ(branches.size(), 1u);
    EXPECT_NEAR(branches[0].probability, 1.0, 1e-15);
    EXPECT_EQ(branches[0].leaf, "x");
}

TEST(RunProtocol, MaxDepthStops) {
    auto s = tiles();
    RunOptions opt;
    opt.max_depth = 1;
    for (const auto &b : run_protocol(s.ket(0), validated(tiles_protocol()), opt)) {
        EXPECT_LE(b.measurements(), 1u);
    }
}

TEST(Teleportation, FidelityOne) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (std::size_t d : {2, 3}) {
        Vector psi(d);
        for (auto &x : psi) x = Complex(g(rng), g(rng));
        auto r = teleportation_demo(psi);
        EXPECT_NEAR(r.fidelity, 1.0, 1e-10);
        EXPECT_NEAR(r.probability, 1.0 / double(d * d), 1e-10);
    }
}

TEST(Validate, TilesProtocolDepth) {
    auto p = tiles_protocol();
    auto r = validate_protocol(*p.root, attach_resource(p.principal, p.resource));
    EXPECT_TRUE(r.ok);
    EXPECT_TRUE(r.projective);
    EXPECT_EQ(r.depth, 4u);
}

TEST(Validate, NonlocalOperatorFlagged) {
    SystemLayout l = principal_layout({2, 2});
    Matrix p = Matrix::Zero(4, 4);
    p(0, 0) = 1.0;
    Measurement m{"A",
                  {embed_local_operator(p, {"A", "B"}, l),
                   embed_local_operator(Matrix::Identity(4, 4) - p, {"A", "B"}, l)},
                  {"x", "y"}};
    auto r = validate_measurement(m, l);
    EXPECT_FALSE(r.ok);
    EXPECT_THROW(validated(Protocol{"bad", make_step(m, {make_leaf("x"), make_leaf("y")}), {}, l}),
                 std::invalid_argument);
}

TEST(Validate, IncompleteFlagged) {
    SystemLayout l({{"A", 3, "A"}});
    Matrix p = Matrix::Zero(3, 3);
    p(0, 0) = p(1, 1) = 1.0;
    Measurement m{"A", {embed_local_operator(p, {"A"}, l)}, {"x"}};
    auto r = validate_measurement(m, l);
    EXPECT_FALSE(r.ok);
    ASSERT_FALSE(r.violations.empty());
}

TEST(Validate, ChildCountMismatch) {
    SystemLayout l({{"A", 2, "A"}});
    Measurement m{"A", {embed_local_operator(Matrix::Identity(2, 2), {"A"}, l)}, {"x"}};
    EXPECT_THROW(make_step(m, {}), std::invalid_argument);
}
