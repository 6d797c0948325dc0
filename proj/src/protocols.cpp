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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "planner.hpp"

namespace upb {

using detail::Builder;
using detail::Candidates;

namespace {

Matrix diag_projector(std::size_t d, std::initializer_list<std::size_t> idx) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (auto i : idx) {
        p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return p;
}

Matrix diag_projector(std::size_t d, const std::vector<std::size_t> &idx) {
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (auto i : idx) {
        p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return p;
}

Matrix unit(std::size_t d, std::size_t i) { return projector(basis_vector(d, i)); }

Matrix kron(const Matrix &x, const Matrix &y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); i++) {
        for (Eigen::Index j = 0; j < x.cols(); j++) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

// Projector onto (|i> + sign |j>)/sqrt(2).
Matrix pair_projector(std::size_t d, std::size_t i, std::size_t j, double sign) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
    v[static_cast<Eigen::Index>(i)] = 1.0;
    v[static_cast<Eigen::Index>(j)] = sign;
    return projector(v / std::sqrt(2.0));
}

std::string ket_label(std::size_t x, std::size_t y) {
    return "|" + std::to_string(x) + std::to_string(y) + ">";
}

void require_bipartite(const StateSet &s, std::size_t da, std::size_t db, const std::string &what) {
    if (!(s.layout() == principal_layout({da, db}))) {
        throw std::invalid_argument(what + ": set is not on a " + std::to_string(da) + "x" +
                                    std::to_string(db) + " A|B layout");
    }
}

Protocol finish_build(const std::string &name, const std::function<Protocol()> &f) {
    try {
        return f();
    } catch (const detail::PlannerStuck &e) {
        throw std::logic_error(name + ": could not complete the protocol tree (" + e.what() + ")");
    }
}

// Alice's step after Bob's Tiles slide; u is the image holding rows 0 and 1.
NodePtr tiles_after_slide(const Builder &b, std::size_t u, const Candidates &c) {
    const std::size_t v = 1 - u;
    const Matrix Eu = unit(2, u), Ev = unit(2, v), Ia = Matrix::Identity(2, 2);
    std::vector<Matrix> outs = {
        kron(Eu, unit(3, 2)),
        kron(Ev, pair_projector(3, 1, 2, -1.0)),
        kron(Ev, pair_projector(3, 1, 2, +1.0)),
        kron(Eu, diag_projector(3, {0, 1})) + kron(Ev, unit(3, 0)),
    };
    auto alice = b.measurement("A", {"a", "A"}, outs, {"A1", "A2", "A3", "A4"}, false);
    return b.measure(c, std::move(alice), [&](std::size_t i, const Candidates &cc) -> NodePtr {
        if (i == 0) {
            auto bob = b.measurement("B", {"B"},
                                     {pair_projector(3, 0, 1, +1.0), pair_projector(3, 0, 1, -1.0),
                                      unit(3, 2)},
                                     {"|0+1>_B", "|0-1>_B", "|2>_B"}, false);
            return b.measure(cc, std::move(bob));
        }
        if (i != 3) {
            return b.finish(cc);
        }
        // Bob joins the two pieces of the last vertical tile across images.
        Vector plus = Vector::Zero(6), minus = Vector::Zero(6);
        plus[static_cast<Eigen::Index>(u * 3 + 1)] = minus[static_cast<Eigen::Index>(u * 3 + 1)] = 1.0 / std::sqrt(2.0);
        plus[static_cast<Eigen::Index>(v * 3 + 2)] = 1.0 / std::sqrt(2.0);
        minus[static_cast<Eigen::Index>(v * 3 + 2)] = -1.0 / std::sqrt(2.0);
        std::string p1 = ket_label(u, 1), p2 = ket_label(v, 2);
        auto bob = b.measurement("B", {"b", "B"},
                                 {kron(Eu, unit(3, 0)), projector(plus), projector(minus)},
                                 {ket_label(u, 0) + "_bB", p1 + "+" + p2, p1 + "-" + p2});
        Vector apv = Vector::Zero(2), amv = Vector::Zero(2);
        apv[static_cast<Eigen::Index>(u)] = amv[static_cast<Eigen::Index>(u)] = 1.0 / std::sqrt(2.0);
        apv[static_cast<Eigen::Index>(v)] = 1.0 / std::sqrt(2.0);
        amv[static_cast<Eigen::Index>(v)] = -1.0 / std::sqrt(2.0);
        return b.measure(cc, std::move(bob), [&](std::size_t j, const Candidates &c2) -> NodePtr {
            if (j == 0) {
                auto al = b.measurement("A", {"a", "A"},
                                        {kron(Ia, pair_projector(3, 0, 1, +1.0)),
                                         kron(Ia, pair_projector(3, 0, 1, -1.0)), kron(Ia, unit(3, 2))},
                                        {"|0+1>_A", "|0-1>_A", "|2>_A"}, false);
                return b.measure(c2, std::move(al));
            }
            if (j == 1 || j == 2) {
                auto al = b.measurement(
                    "A", {"a", "A"},
                    {kron(Ia, unit(3, 1)), kron(projector(apv), unit(3, 0)),
                     kron(projector(amv), unit(3, 0)), kron(Ia, unit(3, 2))},
                    {"|1>_A", "|0>_A" + ket_label(u, v).replace(2, 0, "+"),
                     "|0>_A" + ket_label(u, v).replace(2, 0, "-"), "|2>_A"},
                    false);
                return b.measure(c2, std::move(al));
            }
            return b.finish(c2);
        });
    });
}

}  // namespace

Protocol tiles_protocol(const StateSet &target) {
    require_bipartite(target, 3, 3, "tiles_protocol");
    return finish_build("tiles_protocol", [&] {
        Builder b(target, ResourceSpec{{maximally_entangled(2)}});
        const Matrix P01 = diag_projector(3, {0, 1}), P2 = unit(3, 2);
        std::vector<Matrix> slides = {
            controlled_projection({P01, P2}, "B", "b", b.layout()).local(),
            controlled_projection({P2, P01}, "B", "b", b.layout()).local(),
        };
        auto bob = b.measurement("B", {"b", "B"}, slides, {"B1", "B2"}, false);
        auto root = b.measure(b.initial(), std::move(bob), [&](std::size_t x, const Candidates &c) {
            return tiles_after_slide(b, x, c);
        });
        return b.protocol("tiles", root);
    });
}

Protocol tiles_protocol() { return tiles_protocol(tiles()); }

std::vector<std::size_t> canonical_permutation_3x3(const StateSet &s, double tol) {
    if (s.size() != 5 || !(s.layout() == principal_layout({3, 3}))) {
        throw std::invalid_argument("not a 3⊗3 UPB presentation: need 5 states on 3x3");
    }
    auto edge = [&](std::size_t i, std::size_t j, const std::string &p) {
        return std::abs(s.members()[i].parts.at(p).dot(s.members()[j].parts.at(p))) <= tol;
    };
    std::vector<std::size_t> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < 5 && ok; i++) {
            for (std::size_t j = i + 1; j < 5 && ok; j++) {
                bool a_edge = (j - i) == 1 || (j - i) == 4;
                bool b_edge = (j - i) == 2 || (j - i) == 3;
                ok = edge(perm[i], perm[j], "A") == a_edge && edge(perm[i], perm[j], "B") == b_edge;
            }
        }
        if (ok) {
            return perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    throw std::invalid_argument("not a 3⊗3 UPB presentation: orthogonality graphs do not match");
}

StateSet canonicalize_3x3(const StateSet &s, double tol) {
    return s.permuted(canonical_permutation_3x3(s, tol));
}

Protocol upb3x3_protocol(const StateSet &s) {
    auto perm = canonical_permutation_3x3(s);
    for (std::size_t j = 0; j < 5; j++) {
        if (perm[j] != j) {
            throw std::invalid_argument("upb3x3_protocol: non-canonical input (run canonicalize_3x3)");
        }
    }
    return finish_build("upb3x3_protocol", [&] {
        auto a = [&](std::size_t j) { return s.members()[j].parts.at("A"); };
        auto bv = [&](std::size_t j) { return s.members()[j].parts.at("B"); };
        Builder b(s, ResourceSpec{{maximally_entangled(2)}});
        const Matrix I3 = Matrix::Identity(3, 3);
        const Matrix P0 = projector(bv(0));
        std::vector<Matrix> slides = {
            controlled_projection({I3 - P0, P0}, "B", "b", b.layout()).local(),
            controlled_projection({P0, I3 - P0}, "B", "b", b.layout()).local(),
        };
        Vector plus(2), minus(2);
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
        // After the ancillas are reassembled every remaining member is a_j ⊗ b_j.
        auto endgame = [&](const Candidates &c) {
            auto al = b.measurement("A", {"A"}, {projector(a(2))}, {"|a2>"});
            return b.measure(c, std::move(al), [&](std::size_t i, const Candidates &cc) -> NodePtr {
                if (i == 0) {
                    return b.measure(cc, b.measurement("B", {"B"}, {projector(bv(2)), projector(bv(4))},
                                                       {"|b2>", "|b4>"}));
                }
                auto bob = b.measurement("B", {"B"}, {projector(bv(1)), projector(bv(3))},
                                         {"|b1>", "|b3>"});
                return b.measure(cc, std::move(bob), [&](std::size_t j, const Candidates &c2) -> NodePtr {
                    if (j != 1) {
                        return b.finish(c2);
                    }
                    Vector a4p = a(4) - a(2) * a(2).dot(a(4));
                    auto al2 = b.measurement("A", {"A"}, {projector(a(3)), projector(a4p.normalized())},
                                             {"|a3>", "|a4'>"});
                    return b.measure(c2, std::move(al2));
                });
            });
        };
        auto root = b.measure(b.initial(), b.measurement("B", {"b", "B"}, slides, {"B1", "B2"}, false),
                              [&](std::size_t x, const Candidates &c) {
            std::size_t v = 1 - x;
            auto al = b.measurement("A", {"a", "A"}, {kron(unit(2, v), projector(a(0)))},
                                    {ket_label(v, 0).replace(2, 1, "a0")});
            return b.measure(c, std::move(al), [&](std::size_t i, const Candidates &cc) -> NodePtr {
                if (i == 0) {
                    return b.finish(cc);
                }
                auto am = b.measurement("A", {"a"}, {projector(plus), projector(minus)},
                                        {"|0+1>_a", "|0-1>_a"}, false);
                return b.measure(cc, std::move(am), [&](std::size_t sa, const Candidates &c2) {
                    auto bm = b.measurement("B", {"b"}, {projector(plus), projector(minus)},
                                            {"|0+1>_b", "|0-1>_b"}, false);
                    return b.measure(c2, std::move(bm), [&](std::size_t sb, const Candidates &c3) {
                        if (sa == sb) {
                            return endgame(c3);
                        }
                        Operator u = b.op(I3 - 2.0 * P0, {"B"});
                        return make_correction({"B", u, "phase"}, endgame(b.transform(c3, u)));
                    });
                });
            });
        });
        return b.protocol("upb3x3", root);
    });
}

Protocol gentiles1_protocol(const StateSet &target) {
    const std::size_t m = target.layout().factors().front().dim;
    if (m < 4 || m % 2 != 0) {
        throw std::invalid_argument("gentiles1_protocol: m must be even and at least 4");
    }
    require_bipartite(target, m, m, "gentiles1_protocol");
    const std::size_t L = m / 2;
    return finish_build("gentiles1_protocol", [&] {
        Builder b(target, ResourceSpec{{maximally_entangled(L)}});
        std::vector<Matrix> slides;
        std::vector<std::string> names;
        for (std::size_t l = 0; l < L; l++) {
            // Image j keeps the row pair k with {k + l} = j.
            std::vector<Matrix> ps;
            for (std::size_t j = 0; j < L; j++) {
                std::size_t k = (j + L - l) % L;
                ps.push_back(diag_projector(m, {2 * k, 2 * k + 1}));
            }
            slides.push_back(controlled_projection(ps, "B", "b", b.layout()).local());
            names.push_back("B" + std::to_string(l));
        }
        auto root = b.measure(b.initial(), b.measurement("B", {"b", "B"}, slides, names, false),
                              [&](std::size_t l, const Candidates &c) {
            auto img = [&](std::size_t i) { return unit(L, (i + l) % L); };
            auto col = [&](std::size_t c0) { return unit(m, c0 % m); };
            auto cols = [&](std::size_t start, std::size_t count) {
                Matrix p = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
                for (std::size_t t = 0; t < count; t++) {
                    p += col(start + t);
                }
                return p;
            };
            std::vector<Matrix> outs;
            std::vector<std::string> labels;
            if (L % 2 == 1) {
                for (std::size_t k = 0; k < L; k++) {
                    Matrix M = kron(img(k), cols(2 * k, L + 1));
                    for (std::size_t t = 1; t <= (L - 1) / 2; t++) {
                        M += kron(img(k + t), col(2 * k));
                    }
                    for (std::size_t t = (L + 1) / 2; t < L; t++) {
                        M += kron(img(k + t), col(2 * k + L));
                    }
                    outs.push_back(M);
                    labels.push_back("A" + std::to_string(k));
                }
            } else {
                for (std::size_t k = 0; k < L / 2; k++) {
                    Matrix M = kron(img(k), cols(2 * k, L + 1)) + kron(img(L / 2 + k), cols(2 * k + L, L + 1));
                    for (std::size_t t = k + 1; t < L / 2 + k; t++) {
                        M += kron(img(t), col(2 * k));
                    }
                    for (std::size_t t = L / 2 + k + 1; t < L + k; t++) {
                        M += kron(img(t), col(2 * k + L));
                    }
                    outs.push_back(M);
                    labels.push_back("A" + std::to_string(2 * k));
                }
                // Column 2k+1 lives in images k+1 .. k+L/2 after the slide.
                for (std::size_t k = 0; k < L; k++) {
                    Matrix M = Matrix::Zero(static_cast<Eigen::Index>(L * m), static_cast<Eigen::Index>(L * m));
                    for (std::size_t j = k + 1; j <= k + L / 2; j++) {
                        M += kron(img(j), col(2 * k + 1));
                    }
                    outs.push_back(M);
                    labels.push_back("A" + std::to_string(2 * k + 1));
                }
            }
            std::size_t n = outs.size();
            auto al = b.measurement("A", {"a", "A"}, std::move(outs), std::move(labels));
            if (al.outcomes.size() != n) {
                throw std::logic_error("gentiles1_protocol: Alice's measurement is incomplete");
            }
            return b.measure(c, std::move(al));
        });
        return b.protocol("gentiles1", root);
    });
}

Protocol gentiles1_protocol(int m) { return gentiles1_protocol(gentiles1(m)); }

Protocol gentiles2_protocol(const StateSet &target) {
    const std::size_t m = target.layout().factors().front().dim;
    const std::size_t n = target.layout().factors().back().dim;
    if (m == 3) {
        throw std::invalid_argument(
            "gentiles2_protocol: m = 3 is excluded; after the slide the two remaining horizontal "
            "tiles still link every column, so no shipped protocol exists");
    }
    if (m < 3 || n <= 3 || n < m) {
        throw std::invalid_argument("gentiles2_protocol: needs m >= 4, n > 3 and n >= m");
    }
    require_bipartite(target, m, n, "gentiles2_protocol");
    const std::size_t r = (m + 1) / 2;
    return finish_build("gentiles2_protocol", [&] {
        Builder b(target, ResourceSpec{{maximally_entangled(r)}});
        std::vector<Matrix> slides;
        std::vector<std::string> names;
        for (std::size_t l = 0; l < r; l++) {
            std::vector<Matrix> ps;
            for (std::size_t j = 0; j < r; j++) {
                std::size_t p = (j + r - l) % r;
                std::vector<std::size_t> idx{2 * p};
                if (2 * p + 1 < m) {
                    idx.push_back(2 * p + 1);
                }
                ps.push_back(diag_projector(m, idx));
            }
            slides.push_back(controlled_projection(ps, "A", "a", b.layout()).local());
            names.push_back("A" + std::to_string(l));
        }
        auto root = b.measure(b.initial(), b.measurement("A", {"a", "A"}, slides, names, false),
                              [&](std::size_t l, const Candidates &c) {
            auto img = [&](std::size_t col) { return unit(r, (col / 2 + l) % r); };
            std::vector<Matrix> outs;
            std::vector<std::string> labels;
            for (std::size_t k = 0; 2 * k + 1 < m; k++) {
                outs.push_back(kron(img(2 * k), unit(n, 2 * k)));
                labels.push_back("S" + std::to_string(2 * k));
            }
            std::size_t isolating = outs.size();
            auto bob = b.measurement("B", {"b", "B"}, std::move(outs), std::move(labels));
            return b.measure(c, std::move(bob), [&](std::size_t i, const Candidates &cc) -> NodePtr {
                if (i < isolating) {
                    return b.finish(cc);
                }
                auto at = [&](std::size_t col) { return kron(img(col), unit(m, col)); };
                std::vector<Matrix> o2;
                std::vector<std::string> l2;
                std::size_t pairs = m % 2 == 0 ? m / 2 : (m - 3) / 2;
                for (std::size_t k = 0; k < pairs; k++) {
                    std::size_t c1 = 2 * k + 1, c2 = (2 * k + 2) % m;
                    o2.push_back(at(c1) + at(c2));
                    l2.push_back("cols " + std::to_string(c1) + "," + std::to_string(c2));
                }
                if (m % 2 == 1) {
                    o2.push_back(at(0) + at(m - 2) + at(m - 1));
                    l2.push_back("cols 0," + std::to_string(m - 2) + "," + std::to_string(m - 1));
                }
                return b.measure(cc, b.measurement("A", {"a", "A"}, std::move(o2), std::move(l2)));
            });
        });
        return b.protocol("gentiles2", root);
    });
}

Protocol gentiles2_protocol(int m, int n) {
    if (m == 3) {
        return gentiles2_protocol(gentiles2(m, std::max(n, 4)));
    }
    return gentiles2_protocol(gentiles2(m, n));
}

Protocol niset_cerf_protocol(const StateSet &target, std::size_t p1, std::size_t p2, bool full_basis) {
    const auto &layout = target.layout();
    const std::size_t N = layout.size();
    if (N < 3 || layout.parties().size() != N) {
        throw std::invalid_argument("niset_cerf_protocol: needs at least 3 single-factor parties");
    }
    if (p1 == p2 || p1 >= N || p2 >= N) {
        throw std::invalid_argument("niset_cerf_protocol: invalid pair of parties");
    }
    std::vector<std::size_t> dims;
    for (const auto &f : layout.factors()) {
        dims.push_back(f.dim);
    }
    // Recover the table from the party tiles (ids 1..N).
    TileTable t(N, std::vector<std::size_t>(N, 0));
    for (std::size_t q = 0; q < N; q++) {
        const Tile *tile = target.find_tile(static_cast<int>(q + 1));
        if (!tile || tile->owner != party_name(q)) {
            throw std::invalid_argument("niset_cerf_protocol: missing tile for party " + party_name(q));
        }
        for (std::size_t p = 0; p < N; p++) {
            if (p != q) {
                const auto &idx = tile->rect.at(party_name(p));
                if (idx.size() != 1) {
                    throw std::invalid_argument("niset_cerf_protocol: inference table ambiguous");
                }
                t[q][p] = idx.front();
            }
        }
    }
    const std::string P1 = party_name(p1), P2 = party_name(p2);
    const std::string a1 = ancilla_label(P1, 0, 1), a2 = ancilla_label(P2, 0, 1);
    const std::size_t y = t[p1][p2];   // second party's value inside the first party's tile
    const std::size_t kx = t[p2][p1];  // first party's value inside the second party's tile
    return finish_build("niset_cerf_protocol", [&] {
        Builder b(target, ResourceSpec{{maximally_entangled(2, P1, P2)}});
        const std::size_t d1 = dims[p1], d2 = dims[p2];
        const Matrix Y = unit(d2, y), I2 = Matrix::Identity(static_cast<Eigen::Index>(d2), static_cast<Eigen::Index>(d2));
        std::vector<Matrix> slides = {
            controlled_projection({I2 - Y, Y}, P2, a2, b.layout()).local(),
            controlled_projection({Y, I2 - Y}, P2, a2, b.layout()).local(),
        };
        auto sb_measure = [&](std::size_t q) {
            std::vector<Matrix> o;
            std::vector<std::string> l;
            for (std::size_t v = 0; v < dims[q]; v++) {
                o.push_back(unit(dims[q], v));
                l.push_back("SB " + party_name(q) + "=" + std::to_string(v));
            }
            return b.measurement(party_name(q), {party_name(q)}, std::move(o), std::move(l), false);
        };
        std::function<NodePtr(const Candidates &, const std::vector<std::size_t> &, std::size_t)> cascade =
            [&](const Candidates &c, const std::vector<std::size_t> &order, std::size_t at) -> NodePtr {
            if (at == order.size() || c.size() <= 1) {
                return b.finish(c);
            }
            return b.measure(c, sb_measure(order[at]), [&, at](std::size_t, const Candidates &cc) {
                return cascade(cc, order, at + 1);
            });
        };
        auto others = [&](std::initializer_list<std::size_t> skip) {
            std::vector<std::size_t> o;
            for (std::size_t q = 0; q < N; q++) {
                if (std::find(skip.begin(), skip.end(), q) == skip.end()) {
                    o.push_back(q);
                }
            }
            return o;
        };
        auto root = b.measure(b.initial(), b.measurement(P2, {a2, P2}, slides, {"slide0", "slide1"}, false),
                              [&](std::size_t x, const Candidates &c) {
            std::vector<Matrix> o;
            std::vector<std::string> l;
            std::vector<std::size_t> ks;
            for (std::size_t k = 0; k < d1; k++) {
                if (k == kx) {
                    continue;
                }
                o.push_back(kron(unit(2, x), unit(d1, k)));
                l.push_back("P" + std::to_string(k));
                ks.push_back(k);
            }
            auto al = b.measurement(P1, {a1, P1}, std::move(o), std::move(l));
            return b.measure(c, std::move(al), [&](std::size_t i, const Candidates &cc) -> NodePtr {
                if (i < ks.size()) {
                    std::optional<std::size_t> owner;
                    for (std::size_t q = 0; q < N; q++) {
                        if (q != p1 && q != p2 && t[q][p1] == ks[i]) {
                            owner = q;
                            break;
                        }
                    }
                    if (full_basis) {
                        return owner ? cascade(cc, others({p1, *owner}), 0) : cascade(cc, others({p1}), 0);
                    }
                    if (!owner) {
                        return b.finish(cc);
                    }
                    Matrix h = dft_matrix(dims[*owner]);
                    std::vector<Matrix> fo;
                    std::vector<std::string> fl;
                    for (Eigen::Index s = 0; s < h.cols(); s++) {
                        fo.push_back(projector(h.col(s)));
                        fl.push_back("FB " + party_name(*owner) + "=" + std::to_string(s));
                    }
                    return b.measure(cc, b.measurement(party_name(*owner), {party_name(*owner)}, fo, fl, false));
                }
                if (full_basis) {
                    return cascade(cc, others({p1, p2}), 0);
                }
                return cascade(cc, {others({p1, p2}).front()}, 0);
            });
        });
        return b.protocol(full_basis ? "niset_cerf_full" : "niset_cerf", root);
    });
}

Protocol tiles_squared_protocol(const StateSet &target) {
    require_bipartite(target, 6, 6, "tiles_squared_protocol");
    return finish_build("tiles_squared_protocol", [&] {
        Builder b(target, ResourceSpec{{maximally_entangled(2)}});
        const Matrix top = diag_projector(6, {0, 1, 2, 3}), bottom = diag_projector(6, {4, 5});
        std::vector<Matrix> slides = {
            controlled_projection({top, bottom}, "B", "b", b.layout()).local(),
            controlled_projection({bottom, top}, "B", "b", b.layout()).local(),
        };
        auto root = b.measure(b.initial(), b.measurement("B", {"b", "B"}, slides, {"B1", "B2"}, false),
                              [&](std::size_t u, const Candidates &c) {
            std::size_t v = 1 - u;
            std::vector<Matrix> o = {
                kron(unit(2, u), diag_projector(6, {4, 5})),
                kron(unit(2, v), diag_projector(6, {2, 3, 4, 5})),
                kron(unit(2, u), diag_projector(6, {0, 1, 2, 3})) + kron(unit(2, v), diag_projector(6, {0, 1})),
            };
            return b.measure(c, b.measurement("A", {"a", "A"}, o, {"A1", "A2", "A3"}, false));
        });
        return b.protocol("tiles_squared", root);
    });
}

Protocol nlwe_protocol(const std::string &family,
                       const std::map<std::string, std::vector<std::int64_t>> &params) {
    if (family == "tiles_squared") {
        return tiles_squared_protocol(tiles_squared());
    }
    if (family == "tiles") {
        return tiles_protocol(nlwe_of(tiles()));
    }
    if (family == "gentiles1") {
        return gentiles1_protocol(nlwe_of(build_family(family, params)));
    }
    if (family == "gentiles2") {
        return gentiles2_protocol(nlwe_of(build_family(family, params)));
    }
    if (family == "niset_cerf") {
        return niset_cerf_protocol(nlwe_of(build_family(family, params)), 0, 1, true);
    }
    throw std::invalid_argument("nlwe_protocol: unknown family '" + family + "'");
}

Protocol tensor_protocol(const Protocol &p1, const Protocol &p2) {
    if (p1.principal.size() != 2 || p2.principal.size() != 2) {
        throw std::invalid_argument("tensor_protocol: both protocols must be bipartite");
    }
    ResourceSpec res;
    res.pairs = p1.resource.pairs;
    res.pairs.insert(res.pairs.end(), p2.resource.pairs.begin(), p2.resource.pairs.end());
    auto anc = res.ancilla_factors();
    auto anc1 = p1.resource.ancilla_factors();
    auto anc2 = p2.resource.ancilla_factors();
    std::map<std::string, std::string> map1, map2;
    std::vector<Factor> principal;
    for (const auto &f : p1.principal.factors()) {
        map1[f.label] = f.label + "1";
        principal.push_back({f.label + "1", f.dim, f.owner});
    }
    for (const auto &f : p2.principal.factors()) {
        map2[f.label] = f.label + "2";
        principal.push_back({f.label + "2", f.dim, f.owner});
    }
    for (std::size_t i = 0; i < anc1.size(); i++) {
        map1[anc1[i].label] = anc[i].label;
    }
    for (std::size_t i = 0; i < anc2.size(); i++) {
        map2[anc2[i].label] = anc[anc1.size() + i].label;
    }
    auto root = detail::rename_tree(p1.root, map1, [&](const std::string &l1) -> NodePtr {
        if (l1 == kImpossible) {
            return make_leaf(kImpossible);
        }
        return detail::rename_tree(p2.root, map2, [&](const std::string &l2) {
            return make_leaf(l2 == kImpossible ? kImpossible : l1 + "*" + l2);
        });
    });
    return {p1.name + "*" + p2.name, root, res, SystemLayout(principal)};
}

Protocol shipped_protocol(const StateSet &s) {
    const auto &name = s.family().name;
    if (s.family().has_tag("no shipped protocol")) {
        throw std::invalid_argument("family '" + name + "' has no shipped protocol");
    }
    if (name == "tiles" || name == "nlwe:tiles") {
        return tiles_protocol(s);
    }
    if (name == "random3x3") {
        return upb3x3_protocol(canonicalize_3x3(s));
    }
    if (name == "gentiles1" || name == "nlwe:gentiles1") {
        return gentiles1_protocol(s);
    }
    if (name == "gentiles2" || name == "nlwe:gentiles2") {
        return gentiles2_protocol(s);
    }
    if (name == "niset_cerf") {
        return niset_cerf_protocol(s, 0, 1, false);
    }
    if (name == "nlwe:niset_cerf") {
        return niset_cerf_protocol(s, 0, 1, true);
    }
    if (name == "tiles_squared") {
        return tiles_squared_protocol(s);
    }
    if (name == "tensor") {
        std::vector<std::string> subs;
        for (const auto &t : s.family().tags) {
            if (t.starts_with("of:")) {
                subs.push_back(t.substr(3));
            }
        }
        if (subs.size() == 2) {
            auto params = subs[0] == subs[1] ? s.family().params : decltype(s.family().params){};
            auto p1 = shipped_protocol(build_family(subs[0], params));
            auto p2 = shipped_protocol(build_family(subs[1], params));
            return tensor_protocol(p1, p2);
        }
    }
    throw std::invalid_argument("family '" + name + "' has no shipped protocol");
}

}  // namespace upb
