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

#include "upb/tensor.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "upb/catalog.hpp"
#include "upb/locc.hpp"

using namespace upb;

namespace {

SystemLayout layout_of(std::initializer_list<Factor> fs) { return SystemLayout(std::vector<Factor>(fs)); }

Vector random_vector(std::mt19937_64 &rng, std::size_t d) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(d));
    for (auto &x : v) {
        x = Complex(g(rng), g(rng));
    }
    return v.normalized();
}

Vector ket2(Complex x, Complex y) {
    Vector v(2);
    v << x, y;
    return v;
}

}  // namespace

TEST(Layout, RejectsDuplicateLabels) {
    EXPECT_THROW(layout_of({{"A", 3, "A"}, {"A", 2, "B"}}), std::invalid_argument);
}

TEST(Layout, PartiesAndDims) {
    auto l = layout_of({{"A", 3, "A"}, {"B", 3, "B"}, {"a", 2, "A"}, {"b", 2, "B"}});
    EXPECT_EQ(l.total_dim(), 36u);
    EXPECT_EQ(l.parties(), (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(l.labels_of("A"), (std::vector<std::string>{"A", "a"}));
    EXPECT_THROW(l.index_of("c"), std::invalid_argument);
}

TEST(Layout, ConcatCollision) {
    auto l = layout_of({{"A", 2, "A"}});
    EXPECT_THROW(l.concat(l), std::invalid_argument);
}

TEST(TensorProduct, IsAssociative) {
    std::mt19937_64 rng(7);
    Ket x(layout_of({{"x", 2, "A"}}), random_vector(rng, 2));
    Ket y(layout_of({{"y", 3, "B"}}), random_vector(rng, 3));
    Ket z(layout_of({{"z", 2, "C"}}), random_vector(rng, 2));
    Ket left = tensor_product(tensor_product(x, y), z);
    Ket right = tensor_product(x, tensor_product(y, z));
    EXPECT_LE((left.amplitudes() - right.amplitudes()).norm(), 1e-15);
}

TEST(Embed, IdentityOnAncillaIsIdentity) {
    auto l = layout_of({{"A", 3, "A"}, {"B", 3, "B"}, {"a", 2, "A"}, {"b", 2, "B"}});
    Operator op = embed_local_operator(Matrix::Identity(2, 2), {"b"}, l);
    EXPECT_LE((op.dense(l) - Matrix::Identity(36, 36)).norm(), 1e-12);
}

TEST(Embed, ProjectorAnnihilates) {
    auto l = layout_of({{"a", 2, "A"}, {"A", 3, "A"}});
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    Operator op = embed_local_operator(p0, {"a"}, l);
    Vector v = Vector::Zero(6);
    v[1 * 3 + 0] = 1.0;  // |1>_a |0>_A
    Ket out = apply(op, Ket(l, v));
    EXPECT_LE(out.amplitudes().norm(), 1e-15);
}

TEST(Embed, TilesBobSlideHasTraceThree) {
    auto l = layout_of({{"A", 3, "A"}, {"B", 3, "B"}, {"a", 2, "A"}, {"b", 2, "B"}});
    // B1 = |00><00| + |01><01| + |12><12| on (b, B).
    Matrix b1 = Matrix::Zero(6, 6);
    b1(0, 0) = b1(1, 1) = b1(5, 5) = 1.0;
    Operator op = embed_local_operator(b1, {"b", "B"}, l);
    EXPECT_NEAR(op.local().trace().real(), 3.0, 1e-12);
    // Full operator carries the identity on A and a: trace 3 * 3 * 2.
    EXPECT_NEAR(op.dense(l).trace().real(), 18.0, 1e-12);
}

TEST(Embed, NonAdjacentSupportMatchesExplicitKron) {
    auto l = layout_of({{"A", 2, "A"}, {"B", 3, "B"}, {"C", 2, "C"}});
    std::mt19937_64 rng(3);
    Matrix m = Matrix::Random(4, 4);
    Operator op = embed_local_operator(m, {"A", "C"}, l);
    Matrix dense = op.dense(l);
    // Oracle: element-wise definition on (A, B, C) indices.
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 3; b++)
            for (int c = 0; c < 2; c++)
                for (int a2 = 0; a2 < 2; a2++)
                    for (int b2 = 0; b2 < 3; b2++)
                        for (int c2 = 0; c2 < 2; c2++) {
                            Complex want = b == b2 ? m(a * 2 + c, a2 * 2 + c2) : Complex(0.0);
                            EXPECT_LE(std::abs(dense(a * 6 + b * 2 + c, a2 * 6 + b2 * 2 + c2) - want), 1e-15);
                        }
}

TEST(Embed, DisjointSupportsCommute) {
    auto l = layout_of({{"A", 3, "A"}, {"B", 3, "B"}, {"a", 2, "A"}, {"b", 2, "B"}});
    Matrix x = Matrix::Random(6, 6), y = Matrix::Random(6, 6);
    Matrix X = embed_local_operator(x, {"a", "A"}, l).dense(l);
    Matrix Y = embed_local_operator(y, {"B", "b"}, l).dense(l);
    EXPECT_LE((X * Y - Y * X).norm(), 1e-9);
}

TEST(Embed, DimensionMismatchThrows) {
    auto l = layout_of({{"A", 3, "A"}});
    EXPECT_THROW(embed_local_operator(Matrix::Identity(2, 2), {"A"}, l), std::invalid_argument);
    EXPECT_THROW(embed_local_operator(Matrix::Identity(3, 3), {"Z"}, l), std::invalid_argument);
}

TEST(Schmidt, BellState) {
    auto l = layout_of({{"a", 2, "A"}, {"b", 2, "B"}});
    Vector v = Vector::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    auto sd = schmidt_decomposition(Ket(l, v), std::vector<std::string>{"a"});
    ASSERT_EQ(sd.rank(), 2u);
    EXPECT_NEAR(sd.coefficients[0], 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(sd.coefficients[1], 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Schmidt, ProductState) {
    auto l = layout_of({{"a", 2, "A"}, {"b", 2, "B"}});
    Ket k = product_ket(l, {{"A", ket2(1, 0)}, {"B", ket2(1, 1) / std::sqrt(2.0)}});
    EXPECT_EQ(schmidt_decomposition(k, std::vector<std::string>{"a"}).rank(), 1u);
}

TEST(Schmidt, TransformedPsi4HasRankTwo) {
    // Psi4 ⊗ MES after Bob's slide: (|01>_AB|00>_ab - |02>_AB|11>_ab)/sqrt(2).
    auto l = layout_of({{"A", 3, "A"}, {"B", 3, "B"}, {"a", 2, "A"}, {"b", 2, "B"}});
    Vector v = Vector::Zero(36);
    auto idx = [](int A, int B, int a, int b) { return ((A * 3 + B) * 2 + a) * 2 + b; };
    v[idx(0, 1, 0, 0)] = 1.0 / std::sqrt(2.0);
    v[idx(0, 2, 1, 1)] = -1.0 / std::sqrt(2.0);
    Ket k(l, v);
    auto sd = schmidt_decomposition(k, std::vector<std::string>{"a", "A"});
    ASSERT_EQ(sd.rank(), 2u);
    EXPECT_NEAR(sd.coefficients[0], 1.0 / std::sqrt(2.0), 1e-12);
    // Dense SVD oracle on the (aA) x (bB) reshaping.
    Matrix M = Matrix::Zero(6, 6);
    for (int A = 0; A < 3; A++)
        for (int B = 0; B < 3; B++)
            for (int a = 0; a < 2; a++)
                for (int b = 0; b < 2; b++) M(a * 3 + A, b * 3 + B) = v[idx(A, B, a, b)];
    Eigen::BDCSVD<Matrix> svd(M);
    EXPECT_NEAR(svd.singularValues()[0], sd.coefficients[0], 1e-12);
    EXPECT_NEAR(svd.singularValues()[1], sd.coefficients[1], 1e-12);
    EXPECT_LE(svd.singularValues()[2], 1e-12);
}

TEST(Schmidt, ReconstructsRandomKets) {
    std::mt19937_64 rng(11);
    auto l = layout_of({{"A", 3, "A"}, {"B", 2, "B"}, {"a", 2, "A"}});
    for (int t = 0; t < 100; t++) {
        Ket k(l, random_vector(rng, l.total_dim()));
        auto sd = schmidt_decomposition(k, std::vector<std::string>{"A", "a"});
        double s2 = 0.0;
        for (double c : sd.coefficients) s2 += c * c;
        EXPECT_NEAR(s2, 1.0, 1e-10);
        EXPECT_LE((sd.reconstruct(l).amplitudes() - k.amplitudes()).norm(), 1e-9);
    }
}

TEST(Schmidt, EmptySideThrows) {
    auto l = layout_of({{"a", 2, "A"}, {"b", 2, "B"}});
    Ket k = Ket::basis(l, 0);
    EXPECT_THROW(schmidt_decomposition(k, std::vector<std::string>{}), std::invalid_argument);
    EXPECT_THROW(schmidt_decomposition(k, std::vector<std::string>{"a", "b"}), std::invalid_argument);
}

TEST(Orthocomplement, OfTwoBasisVectors) {
    std::vector<Vector> in = {basis_vector(3, 0), basis_vector(3, 1)};
    auto out = orthocomplement_basis(in, 3);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(std::abs(out[0][2]), 1.0, 1e-12);
}

TEST(Orthocomplement, EmptyInputGivesFullBasis) {
    auto out = orthocomplement_basis(std::vector<Vector>{}, 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_NEAR(std::abs(out[0].dot(out[1])), 0.0, 1e-12);
}

TEST(Orthocomplement, RandomUpbPair) {
    auto s = random_3x3_upb(5);
    std::vector<Vector> in = {s.members()[1].parts.at("B"), s.members()[3].parts.at("B")};
    auto out = orthocomplement_basis(in, 3);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_NEAR(out[0].norm(), 1.0, 1e-12);
    EXPECT_LE(std::abs(out[0].dot(in[0])), 1e-10);
    EXPECT_LE(std::abs(out[0].dot(in[1])), 1e-10);
}

TEST(Dft, HadamardColumn) {
    Matrix h = dft_matrix(2);
    EXPECT_LE((h.col(0) - ket2(1, 1) / std::sqrt(2.0)).norm(), 1e-15);
}

TEST(Dft, UnitaryAndStopperColumn) {
    Matrix h = dft_matrix(3);
    EXPECT_LE((h.adjoint() * h - Matrix::Identity(3, 3)).norm(), 1e-10);
    Vector f = Vector::Ones(3) / std::sqrt(3.0);
    EXPECT_LE((h.col(0) - f).norm(), 1e-15);
    const double pi = std::acos(-1.0);
    EXPECT_LE(std::abs(h(1, 2) - std::polar(1.0 / std::sqrt(3.0), 2 * pi * 2 / 3)), 1e-12);
    EXPECT_THROW(dft_matrix(0), std::invalid_argument);
}
