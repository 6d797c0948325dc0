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

#include "upb/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "upb/verify.hpp"

namespace upb {

namespace {

Vector sb(std::size_t dim, std::size_t i) { return basis_vector(dim, i); }

// (|i> - |j>)/sqrt(2)
Vector diff(std::size_t dim, std::size_t i, std::size_t j) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(i)] = 1.0;
    v[static_cast<Eigen::Index>(j)] = -1.0;
    return v / std::sqrt(2.0);
}

Vector uniform(std::size_t dim) {
    return Vector::Constant(static_cast<Eigen::Index>(dim), 1.0 / std::sqrt(static_cast<double>(dim)));
}

// sum_t w^{tk} |idx[t]> / sqrt(L), w = exp(2 pi i / L).
Vector fourier_line(std::size_t dim, const std::vector<std::size_t> &idx, std::size_t k) {
    Matrix h = dft_matrix(idx.size());
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t t = 0; t < idx.size(); t++) {
        v[static_cast<Eigen::Index>(idx[t])] = h(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
    }
    return v;
}

std::vector<std::size_t> all_indices(std::size_t d) {
    std::vector<std::size_t> v(d);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

double overlap(const ProductState &x, const ProductState &y) {
    Complex c = 1.0;
    for (const auto &[party, v] : x.parts) {
        c *= v.dot(y.parts.at(party));
    }
    return std::abs(c);
}

}  // namespace

bool Tile::contains(const std::map<std::string, std::size_t> &cell) const {
    for (const auto &[party, idx] : rect) {
        auto it = cell.find(party);
        if (it == cell.end() || std::find(idx.begin(), idx.end(), it->second) == idx.end()) {
            return false;
        }
    }
    return true;
}

bool FamilyInfo::has_tag(const std::string &tag) const {
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

StateSet StateSet::unchecked(SystemLayout layout, std::vector<ProductState> members,
                             std::vector<Tile> tiles, FamilyInfo family,
                             std::optional<std::size_t> stopper) {
    StateSet s;
    s.layout_ = std::move(layout);
    s.members_ = std::move(members);
    s.tiles_ = std::move(tiles);
    s.family_ = std::move(family);
    s.stopper_ = stopper;
    return s;
}

StateSet::StateSet(SystemLayout layout, std::vector<ProductState> members, std::vector<Tile> tiles,
                   FamilyInfo family, std::optional<std::size_t> stopper, double tol)
    : layout_(std::move(layout)),
      members_(std::move(members)),
      tiles_(std::move(tiles)),
      family_(std::move(family)),
      stopper_(stopper) {
    auto parties = layout_.parties();
    if (stopper_ && *stopper_ >= members_.size()) {
        throw std::invalid_argument("stopper index out of range");
    }
    std::set<int> ids;
    for (const auto &t : tiles_) {
        if (!ids.insert(t.id).second) {
            throw std::invalid_argument("duplicate tile id " + std::to_string(t.id));
        }
    }
    for (const auto &m : members_) {
        for (const auto &p : parties) {
            auto it = m.parts.find(p);
            if (it == m.parts.end()) {
                throw std::invalid_argument("member '" + m.label + "' lacks a part for party " + p);
            }
            auto labels = layout_.labels_of(p);
            if (static_cast<std::size_t>(it->second.size()) != layout_.dim_of(labels)) {
                throw std::invalid_argument("member '" + m.label + "' has a wrong-sized part");
            }
            if (std::abs(it->second.norm() - 1.0) > 1e-10) {
                throw std::invalid_argument("member '" + m.label + "' is not normalized");
            }
        }
        if (m.parts.size() != parties.size()) {
            throw std::invalid_argument("member '" + m.label + "' has parts for unknown parties");
        }
        if (m.tile) {
            const Tile *t = find_tile(*m.tile);
            if (!t) {
                throw std::invalid_argument("member '" + m.label + "' names unknown tile");
            }
            for (const auto &[party, v] : m.parts) {
                const auto &idx = t->rect.at(party);
                for (Eigen::Index i = 0; i < v.size(); i++) {
                    if (std::abs(v[i]) > 1e-12 &&
                        std::find(idx.begin(), idx.end(), static_cast<std::size_t>(i)) == idx.end()) {
                        throw std::invalid_argument("member '" + m.label +
                                                    "' leaves its tile rectangle");
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < members_.size(); i++) {
        for (std::size_t j = i + 1; j < members_.size(); j++) {
            if (overlap(members_[i], members_[j]) > tol) {
                throw std::invalid_argument("orthogonality failure between '" + members_[i].label +
                                            "' and '" + members_[j].label + "'");
            }
        }
    }
}

std::vector<Ket> StateSet::kets() const {
    std::vector<Ket> out;
    for (std::size_t i = 0; i < members_.size(); i++) {
        out.push_back(ket(i));
    }
    return out;
}

std::size_t StateSet::index_of(const std::string &label) const {
    for (std::size_t i = 0; i < members_.size(); i++) {
        if (members_[i].label == label) {
            return i;
        }
    }
    throw std::invalid_argument("no member labelled '" + label + "'");
}

const Tile *StateSet::find_tile(int id) const {
    for (const auto &t : tiles_) {
        if (t.id == id) {
            return &t;
        }
    }
    return nullptr;
}

std::vector<std::size_t> StateSet::members_of_tile(int id) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < members_.size(); i++) {
        if (members_[i].tile == id) {
            out.push_back(i);
        }
    }
    return out;
}

StateSet StateSet::without(std::size_t i) const {
    if (i >= members_.size()) {
        throw std::out_of_range("member index out of range");
    }
    auto members = members_;
    members.erase(members.begin() + static_cast<std::ptrdiff_t>(i));
    std::optional<std::size_t> stopper;
    if (stopper_ && *stopper_ != i) {
        stopper = *stopper_ > i ? *stopper_ - 1 : *stopper_;
    }
    return unchecked(layout_, std::move(members), tiles_, family_, stopper);
}

StateSet StateSet::permuted(const std::vector<std::size_t> &perm) const {
    if (perm.size() != members_.size()) {
        throw std::invalid_argument("permutation size mismatch");
    }
    std::vector<ProductState> members;
    std::optional<std::size_t> stopper;
    for (std::size_t j = 0; j < perm.size(); j++) {
        members.push_back(members_.at(perm[j]));
        if (stopper_ && perm[j] == *stopper_) {
            stopper = j;
        }
    }
    return unchecked(layout_, std::move(members), tiles_, family_, stopper);
}

std::string party_name(std::size_t n) {
    if (n >= 26) {
        throw std::invalid_argument("too many parties");
    }
    return std::string(1, static_cast<char>('A' + n));
}

SystemLayout principal_layout(const std::vector<std::size_t> &dims) {
    std::vector<Factor> fs;
    for (std::size_t n = 0; n < dims.size(); n++) {
        fs.push_back({party_name(n), dims[n], party_name(n)});
    }
    return SystemLayout(std::move(fs));
}

StateSet tiles() {
    const std::size_t d = 3;
    std::vector<ProductState> m;
    m.push_back({"Psi1", 1, {{"A", diff(d, 0, 1)}, {"B", sb(d, 0)}}});
    m.push_back({"Psi2", 2, {{"A", sb(d, 2)}, {"B", diff(d, 0, 1)}}});
    m.push_back({"Psi3", 3, {{"A", diff(d, 1, 2)}, {"B", sb(d, 2)}}});
    m.push_back({"Psi4", 4, {{"A", sb(d, 0)}, {"B", diff(d, 1, 2)}}});
    m.push_back({"F", std::nullopt, {{"A", uniform(d)}, {"B", uniform(d)}}});
    std::vector<Tile> t = {
        {1, "A", {{"A", {0, 1}}, {"B", {0}}}},
        {2, "B", {{"A", {2}}, {"B", {0, 1}}}},
        {3, "A", {{"A", {1, 2}}, {"B", {2}}}},
        {4, "B", {{"A", {0}}, {"B", {1, 2}}}},
    };
    return StateSet(principal_layout({d, d}), std::move(m), std::move(t), {"tiles", {}, {"upb"}}, 4);
}

StateSet gentiles1(int m_in) {
    if (m_in < 4 || m_in % 2 != 0) {
        throw std::invalid_argument("gentiles1 exists only for even m >= 4");
    }
    auto m = static_cast<std::size_t>(m_in);
    std::size_t L = m / 2;
    std::vector<ProductState> members;
    std::vector<Tile> tiles;
    // Horizontal tile H_{r+1}: row r, columns r .. r+L-1 (mod m).
    for (std::size_t r = 0; r < m; r++) {
        std::vector<std::size_t> cols;
        for (std::size_t t = 0; t < L; t++) {
            cols.push_back((r + t) % m);
        }
        int id = static_cast<int>(r + 1);
        tiles.push_back({id, "A", {{"A", sorted(cols)}, {"B", {r}}}});
        for (std::size_t k = 1; k < L; k++) {
            members.push_back({"H" + std::to_string(id) + "_" + std::to_string(k), id,
                               {{"A", fourier_line(m, cols, k)}, {"B", sb(m, r)}}});
        }
    }
    // Vertical tile V_{c+1} (id m+c+1): column c, rows c+1 .. c+L (mod m).
    for (std::size_t c = 0; c < m; c++) {
        std::vector<std::size_t> rows;
        for (std::size_t t = 0; t < L; t++) {
            rows.push_back((c + 1 + t) % m);
        }
        int id = static_cast<int>(m + c + 1);
        tiles.push_back({id, "B", {{"A", {c}}, {"B", sorted(rows)}}});
        for (std::size_t k = 1; k < L; k++) {
            members.push_back({"V" + std::to_string(c + 1) + "_" + std::to_string(k), id,
                               {{"A", sb(m, c)}, {"B", fourier_line(m, rows, k)}}});
        }
    }
    members.push_back({"F", std::nullopt, {{"A", uniform(m)}, {"B", uniform(m)}}});
    std::size_t stop = members.size() - 1;
    return StateSet(principal_layout({m, m}), std::move(members), std::move(tiles),
                    {"gentiles1", {{"m", {m_in}}}, {"upb"}}, stop);
}

StateSet gentiles2(int m_in, int n_in) {
    if (m_in < 3 || n_in <= 3 || n_in < m_in) {
        throw std::invalid_argument("gentiles2 requires m >= 3, n > 3 and n >= m");
    }
    auto m = static_cast<std::size_t>(m_in);
    auto n = static_cast<std::size_t>(n_in);
    std::vector<ProductState> members;
    std::vector<Tile> tiles;
    for (std::size_t j = 0; j < m; j++) {
        int id = static_cast<int>(j);
        tiles.push_back({id, "A", {{"A", sorted({j, (j + 1) % m})}, {"B", {j}}}});
        members.push_back(
            {"S" + std::to_string(j), id, {{"A", diff(m, j, (j + 1) % m)}, {"B", sb(n, j)}}});
    }
    for (std::size_t j = 0; j < m; j++) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i + 2 < m; i++) {
            rows.push_back((i + j + 1) % m);
        }
        for (std::size_t i = m - 2; i + 2 < n; i++) {
            rows.push_back(i + 2);
        }
        int id = static_cast<int>(m + j);
        tiles.push_back({id, "B", {{"A", {j}}, {"B", sorted(rows)}}});
        for (std::size_t k = 1; k + 2 < n; k++) {
            members.push_back({"L" + std::to_string(j) + "_" + std::to_string(k), id,
                               {{"A", sb(m, j)}, {"B", fourier_line(n, rows, k)}}});
        }
    }
    members.push_back({"F", std::nullopt, {{"A", uniform(m)}, {"B", uniform(n)}}});
    std::size_t stop = members.size() - 1;
    FamilyInfo info{"gentiles2", {{"m", {m_in}}, {"n", {n_in}}}, {"upb"}};
    if (m == 3) {
        info.tags.push_back("no shipped protocol");
    }
    return StateSet(principal_layout({m, n}), std::move(members), std::move(tiles), std::move(info),
                    stop);
}

namespace {

void check_niset_cerf_dims(const std::vector<std::size_t> &dims) {
    std::size_t N = dims.size();
    if (N < 3) {
        throw std::invalid_argument("niset_cerf needs at least 3 parties");
    }
    for (auto d : dims) {
        if (d < N - 1) {
            throw std::invalid_argument("niset_cerf requires every local dimension d_n >= N-1");
        }
    }
}

TileTable cyclic_table(std::size_t N, const std::vector<std::size_t> &f) {
    TileTable t(N, std::vector<std::size_t>(N, 0));
    for (std::size_t n = 0; n < N; n++) {
        for (std::size_t s = 1; s < N; s++) {
            t[n][(n + s) % N] = f[s - 1];
        }
    }
    return t;
}

}  // namespace

TileTable niset_cerf_default_table(const std::vector<std::size_t> &dims) {
    check_niset_cerf_dims(dims);
    std::size_t N = dims.size();
    std::vector<std::size_t> f(N - 1);
    std::iota(f.begin(), f.end(), 0);
    return cyclic_table(N, f);
}

StateSet niset_cerf(const std::vector<std::size_t> &dims, const TileTable &table) {
    check_niset_cerf_dims(dims);
    std::size_t N = dims.size();
    if (table.size() != N) {
        throw std::invalid_argument("tile table needs one row per party");
    }
    for (std::size_t n = 0; n < N; n++) {
        if (table[n].size() != N) {
            throw std::invalid_argument("tile table needs one entry per party");
        }
        for (std::size_t p = 0; p < N; p++) {
            if (p != n && table[n][p] >= dims[p]) {
                throw std::invalid_argument("tile table value out of range");
            }
        }
    }
    for (std::size_t n = 0; n < N; n++) {
        for (std::size_t q = n + 1; q < N; q++) {
            bool overlap = true;
            for (std::size_t p = 0; p < N; p++) {
                if (p != n && p != q && table[n][p] != table[q][p]) {
                    overlap = false;
                }
            }
            if (overlap) {
                throw std::invalid_argument("overlapping tiles " + party_name(n) + " and " +
                                            party_name(q));
            }
        }
    }
    std::vector<ProductState> members;
    std::vector<Tile> tiles;
    for (std::size_t n = 0; n < N; n++) {
        int id = static_cast<int>(n + 1);
        Tile t{id, party_name(n), {}};
        for (std::size_t p = 0; p < N; p++) {
            t.rect[party_name(p)] = p == n ? all_indices(dims[p]) : std::vector<std::size_t>{table[n][p]};
        }
        tiles.push_back(t);
        Matrix h = dft_matrix(dims[n]);
        for (std::size_t k = 1; k < dims[n]; k++) {
            ProductState s{party_name(n) + std::to_string(k), id, {}};
            for (std::size_t p = 0; p < N; p++) {
                s.parts[party_name(p)] =
                    p == n ? Vector(h.col(static_cast<Eigen::Index>(k))) : sb(dims[p], table[n][p]);
            }
            members.push_back(std::move(s));
        }
    }
    ProductState stop{"F", std::nullopt, {}};
    for (std::size_t p = 0; p < N; p++) {
        stop.parts[party_name(p)] = uniform(dims[p]);
    }
    members.push_back(std::move(stop));
    std::vector<std::int64_t> d64(dims.begin(), dims.end());
    std::size_t s = members.size() - 1;
    return StateSet(principal_layout(dims), std::move(members), std::move(tiles),
                    {"niset_cerf", {{"dims", d64}}, {"upb"}}, s);
}

StateSet niset_cerf(const std::vector<std::size_t> &dims) {
    return niset_cerf(dims, niset_cerf_default_table(dims));
}

TileTable find_niset_cerf_table(const std::vector<std::size_t> &dims) {
    check_niset_cerf_dims(dims);
    std::size_t N = dims.size();
    std::size_t dmin = *std::min_element(dims.begin(), dims.end());
    // Injective f: {1..N-1} -> {0..dmin-1}, lexicographic order.
    std::vector<std::size_t> f(N - 1, 0);
    std::function<std::optional<TileTable>(std::size_t, std::vector<bool> &)> rec =
        [&](std::size_t pos, std::vector<bool> &used) -> std::optional<TileTable> {
        if (pos == N - 1) {
            auto t = cyclic_table(N, f);
            try {
                auto s = niset_cerf(dims, t);
                if (check_unextendible(s).verdict == Extendibility::Unextendible) {
                    return t;
                }
            } catch (const std::invalid_argument &) {
            }
            return std::nullopt;
        }
        for (std::size_t v = 0; v < dmin; v++) {
            if (used[v]) {
                continue;
            }
            used[v] = true;
            f[pos] = v;
            auto r = rec(pos + 1, used);
            used[v] = false;
            if (r) {
                return r;
            }
        }
        return std::nullopt;
    };
    std::vector<bool> used(dmin, false);
    auto r = rec(0, used);
    if (!r) {
        throw std::invalid_argument("no cyclic tile table validates for these dimensions");
    }
    return *r;
}

StateSet random_3x3_upb(std::uint64_t seed, Random3x3Options options) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const std::size_t d = 3;
    auto draw = [&]() {
        Vector v(3);
        for (Eigen::Index i = 0; i < 3; i++) {
            v[i] = options.complex_entries ? Complex(normal(rng), normal(rng)) : Complex(normal(rng), 0.0);
        }
        return v;
    };
    // Random vector orthogonal to every vector in `against`.
    auto draw_perp = [&](std::initializer_list<const Vector *> against) {
        Vector v = draw();
        std::vector<Vector> cols;
        for (auto *a : against) {
            cols.push_back(*a);
        }
        Matrix q = span_basis(std::span<const Vector>(cols), d);
        v -= q * (q.adjoint() * v);
        return Vector(v.normalized());
    };
    auto edge = [](std::size_t i, std::size_t j, std::size_t step) {
        return (i + step) % 5 == j || (j + step) % 5 == i;
    };
    for (int attempt = 0; attempt < options.max_attempts; attempt++) {
        std::vector<Vector> a(5), b(5);
        a[0] = draw().normalized();
        a[1] = draw_perp({&a[0]});
        a[2] = draw_perp({&a[1]});
        a[3] = draw_perp({&a[2]});
        a[4] = draw_perp({&a[3], &a[0]});
        b[0] = draw().normalized();
        b[2] = draw_perp({&b[0]});
        b[4] = draw_perp({&b[2]});
        b[1] = draw_perp({&b[4]});
        b[3] = draw_perp({&b[1], &b[0]});
        bool generic = true;
        for (std::size_t i = 0; i < 5 && generic; i++) {
            for (std::size_t j = i + 1; j < 5; j++) {
                if ((!edge(i, j, 1) && std::abs(a[i].dot(a[j])) <= 1e-6) ||
                    (!edge(i, j, 2) && std::abs(b[i].dot(b[j])) <= 1e-6)) {
                    generic = false;
                    break;
                }
            }
        }
        if (!generic) {
            continue;
        }
        std::vector<ProductState> members;
        for (std::size_t j = 0; j < 5; j++) {
            members.push_back({"Psi" + std::to_string(j), std::nullopt, {{"A", a[j]}, {"B", b[j]}}});
        }
        FamilyInfo info{"random3x3", {{"seed", {static_cast<std::int64_t>(seed)}}}, {"upb"}};
        if (options.complex_entries) {
            info.tags.push_back("complex");
        }
        StateSet s(principal_layout({d, d}), std::move(members), {}, std::move(info));
        if (check_unextendible(s).verdict == Extendibility::Unextendible) {
            return s;
        }
    }
    throw std::runtime_error("degenerate seed stream");
}

TileCompletion tile_completion(const StateSet &family, std::optional<std::size_t> removed) {
    if (family.tiles().empty()) {
        throw std::invalid_argument("family without tile metadata");
    }
    const auto &layout = family.layout();
    auto parties = layout.parties();
    TileCompletion out;
    int next_id = 0;
    for (const auto &t : family.tiles()) {
        next_id = std::max(next_id, t.id + 1);
    }
    std::optional<std::size_t> stopper = family.stopper();
    for (const auto &t : family.tiles()) {
        std::vector<std::string> long_sides;
        for (const auto &[p, idx] : t.rect) {
            if (idx.size() > 1) {
                long_sides.push_back(p);
            }
        }
        if (long_sides.size() > 1) {
            throw std::invalid_argument("tile " + std::to_string(t.id) + " is not a line");
        }
        auto base_parts = [&](const std::string &skip) {
            std::map<std::string, Vector> parts;
            for (const auto &p : parties) {
                if (p != skip) {
                    parts[p] = sb(layout.dim_of(layout.labels_of(p)), t.rect.at(p).front());
                }
            }
            return parts;
        };
        auto in_tile = family.members_of_tile(t.id);
        std::erase_if(in_tile, [&](std::size_t i) { return removed && i == *removed; });
        if (long_sides.empty()) {
            if (in_tile.empty()) {
                ProductState s{"T" + std::to_string(t.id) + "+0", t.id, base_parts("")};
                out.added.push_back(std::move(s));
            }
            continue;
        }
        const std::string &x = long_sides.front();
        std::size_t dx = layout.dim_of(layout.labels_of(x));
        const auto &idx = t.rect.at(x);
        std::vector<Vector> line;
        for (auto i : in_tile) {
            line.push_back(family.members()[i].parts.at(x));
        }
        int k = 0;
        auto add = [&](Vector v, const std::string &label) {
            auto parts = base_parts(x);
            parts[x] = std::move(v);
            out.added.push_back({label, t.id, std::move(parts)});
            line.push_back(out.added.back().parts.at(x));
        };
        if (stopper && removed && *stopper == *removed) {
            // The stopper was removed: its projection onto the tile comes first.
            Vector v = Vector::Zero(static_cast<Eigen::Index>(dx));
            const auto &sv = family.members()[*stopper].parts.at(x);
            for (auto i : idx) {
                v[static_cast<Eigen::Index>(i)] = sv[static_cast<Eigen::Index>(i)];
            }
            if (!line.empty()) {
                Matrix q = span_basis(std::span<const Vector>(line), dx);
                v -= q * (q.adjoint() * v);
            }
            if (v.norm() > 1e-9) {
                add(v.normalized(), "F@T" + std::to_string(t.id));
            }
        }
        // Orthocomplement of the line members inside the tile's cells.
        Matrix restrict = Matrix::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(dx));
        for (std::size_t r = 0; r < idx.size(); r++) {
            restrict(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(idx[r])) = 1.0;
        }
        std::vector<Vector> restricted;
        for (const auto &v : line) {
            restricted.push_back(restrict * v);
        }
        for (const auto &w : orthocomplement_basis(std::span<const Vector>(restricted), idx.size())) {
            add(restrict.adjoint() * w, "T" + std::to_string(t.id) + "+" + std::to_string(++k));
        }
    }
    // Cells outside every tile get standard-basis fills.
    std::vector<std::size_t> dims;
    for (const auto &p : parties) {
        dims.push_back(layout.dim_of(layout.labels_of(p)));
    }
    std::size_t cells = 1;
    for (auto d : dims) {
        cells *= d;
    }
    if (cells > 1000000) {
        throw std::invalid_argument("grid too large for completion");
    }
    for (std::size_t c = 0; c < cells; c++) {
        std::map<std::string, std::size_t> cell;
        std::size_t rem = c;
        for (std::size_t p = parties.size(); p-- > 0;) {
            cell[parties[p]] = rem % dims[p];
            rem /= dims[p];
        }
        bool covered = std::any_of(family.tiles().begin(), family.tiles().end(),
                                   [&](const Tile &t) { return t.contains(cell); });
        if (covered) {
            continue;
        }
        std::string label = "SB(";
        Tile tile{next_id++, parties.front(), {}};
        ProductState s{"", tile.id, {}};
        for (std::size_t p = 0; p < parties.size(); p++) {
            label += (p ? "," : "") + std::to_string(cell[parties[p]]);
            s.parts[parties[p]] = sb(dims[p], cell[parties[p]]);
            tile.rect[parties[p]] = {cell[parties[p]]};
        }
        s.label = label + ")";
        out.added.push_back(std::move(s));
        out.extra_tiles.push_back(std::move(tile));
    }
    return out;
}

StateSet nlwe_of(const StateSet &family) {
    if (!family.stopper() || family.tiles().empty()) {
        throw std::invalid_argument("nlwe_of needs a tiled family with a stopper");
    }
    auto completion = tile_completion(family, family.stopper());
    std::vector<ProductState> members;
    for (std::size_t i = 0; i < family.size(); i++) {
        if (i != *family.stopper()) {
            members.push_back(family.members()[i]);
        }
    }
    members.insert(members.end(), completion.added.begin(), completion.added.end());
    auto tiles = family.tiles();
    tiles.insert(tiles.end(), completion.extra_tiles.begin(), completion.extra_tiles.end());
    FamilyInfo info = family.family();
    info.name = "nlwe:" + info.name;
    std::erase(info.tags, std::string("upb"));
    info.tags.push_back("nlwe");
    if (members.size() != family.layout().total_dim()) {
        throw std::invalid_argument("completion does not span the full space");
    }
    return StateSet(family.layout(), std::move(members), std::move(tiles), std::move(info));
}

StateSet tiles_squared(const std::optional<std::vector<std::vector<Vector>>> &coefficients) {
    const std::size_t d = 6;
    struct Long {
        int id;
        bool horizontal;
        std::size_t fixed;
        std::vector<std::size_t> span;
    };
    const std::vector<Long> longs = {
        {1, true, 0, {0, 1, 2, 3}}, {2, true, 1, {0, 1, 2, 3}},  {3, false, 4, {0, 1, 2, 3}},
        {4, false, 5, {0, 1, 2, 3}}, {5, true, 4, {2, 3, 4, 5}}, {6, true, 5, {2, 3, 4, 5}},
        {7, false, 0, {2, 3, 4, 5}}, {8, false, 1, {2, 3, 4, 5}},
    };
    std::vector<std::vector<Vector>> coef(8);
    Matrix h = dft_matrix(4);
    if (coefficients) {
        if (coefficients->size() != 8) {
            throw std::invalid_argument("tiles_squared needs coefficients for 8 long tiles");
        }
        coef = *coefficients;
        for (const auto &set : coef) {
            if (set.size() != 4) {
                throw std::invalid_argument("each long tile needs 4 coefficient vectors");
            }
            Matrix g(4, 4);
            for (std::size_t i = 0; i < 4; i++) {
                if (set[i].size() != 4) {
                    throw std::invalid_argument("coefficient vectors must have length 4");
                }
                for (Eigen::Index e = 0; e < 4; e++) {
                    if (std::abs(set[i][e]) <= 1e-12) {
                        throw std::invalid_argument(
                            "coefficients must be non-zero on every cell of the tile");
                    }
                }
                g.col(static_cast<Eigen::Index>(i)) = set[i];
            }
            if (!(g.adjoint() * g).isIdentity(1e-9)) {
                throw std::invalid_argument("coefficient vectors must be orthonormal");
            }
        }
    } else {
        for (auto &set : coef) {
            for (Eigen::Index k = 0; k < 4; k++) {
                set.push_back(h.col(k));
            }
        }
    }
    std::vector<ProductState> members;
    std::vector<Tile> tiles;
    for (std::size_t t = 0; t < longs.size(); t++) {
        const auto &L = longs[t];
        std::string side = L.horizontal ? "A" : "B";
        std::string other = L.horizontal ? "B" : "A";
        tiles.push_back({L.id, side, {{side, L.span}, {other, {L.fixed}}}});
        for (std::size_t k = 0; k < 4; k++) {
            Vector v = Vector::Zero(6);
            for (std::size_t c = 0; c < 4; c++) {
                v[static_cast<Eigen::Index>(L.span[c])] = coef[t][k][static_cast<Eigen::Index>(c)];
            }
            members.push_back({"T" + std::to_string(L.id) + "_" + std::to_string(k), L.id,
                               {{side, v}, {other, sb(d, L.fixed)}}});
        }
    }
    int id = 9;
    for (std::size_t row : {2, 3}) {
        for (std::size_t col : {2, 3}) {
            tiles.push_back({id, "A", {{"A", {col}}, {"B", {row}}}});
            members.push_back({"T" + std::to_string(id), id, {{"A", sb(d, col)}, {"B", sb(d, row)}}});
            id++;
        }
    }
    return StateSet(principal_layout({d, d}), std::move(members), std::move(tiles),
                    {"tiles_squared", {}, {"nlwe"}});
}

StateSet tensor_power(const StateSet &s1, const StateSet &s2) {
    if (s1.layout().parties().size() != 2 || s2.layout().parties().size() != 2 ||
        s1.layout().size() != 2 || s2.layout().size() != 2) {
        throw std::invalid_argument("tensor_power needs two bipartite sets");
    }
    const auto &f1 = s1.layout().factors();
    const auto &f2 = s2.layout().factors();
    if (f1[0].owner != f2[0].owner || f1[1].owner != f2[1].owner) {
        throw std::invalid_argument("tensor_power needs matching party names");
    }
    SystemLayout layout({{f1[0].label + "1", f1[0].dim, f1[0].owner},
                         {f1[1].label + "1", f1[1].dim, f1[1].owner},
                         {f2[0].label + "2", f2[0].dim, f2[0].owner},
                         {f2[1].label + "2", f2[1].dim, f2[1].owner}});
    auto kron = [](const Vector &x, const Vector &y) {
        Vector out(x.size() * y.size());
        for (Eigen::Index i = 0; i < x.size(); i++) {
            out.segment(i * y.size(), y.size()) = x[i] * y;
        }
        return out;
    };
    auto tile_id = [](int a, int b) { return a * 1000 + b; };
    std::vector<Tile> tiles;
    for (const auto &t1 : s1.tiles()) {
        for (const auto &t2 : s2.tiles()) {
            Tile t{tile_id(t1.id, t2.id), t1.owner, {}};
            for (const auto &[p, idx1] : t1.rect) {
                std::size_t d2 = s2.layout().dim_of(s2.layout().labels_of(p));
                std::vector<std::size_t> idx;
                for (auto i : idx1) {
                    for (auto j : t2.rect.at(p)) {
                        idx.push_back(i * d2 + j);
                    }
                }
                t.rect[p] = sorted(idx);
            }
            tiles.push_back(std::move(t));
        }
    }
    std::vector<ProductState> members;
    for (const auto &x : s1.members()) {
        for (const auto &y : s2.members()) {
            ProductState s{x.label + "*" + y.label, std::nullopt, {}};
            if (x.tile && y.tile) {
                s.tile = tile_id(*x.tile, *y.tile);
            }
            for (const auto &[p, v] : x.parts) {
                s.parts[p] = kron(v, y.parts.at(p));
            }
            members.push_back(std::move(s));
        }
    }
    FamilyInfo info{"tensor", {}, {"of:" + s1.family().name, "of:" + s2.family().name}};
    if (s1.family().has_tag("upb") && s2.family().has_tag("upb")) {
        info.tags.push_back("upb");
    }
    if (s1.family().name == s2.family().name && s1.family().params == s2.family().params) {
        info.params = s1.family().params;
    }
    return StateSet(std::move(layout), std::move(members), std::move(tiles), std::move(info));
}

StateSet build_family(const std::string &name,
                      const std::map<std::string, std::vector<std::int64_t>> &params) {
    auto get = [&](const std::string &key) -> std::int64_t {
        auto it = params.find(key);
        if (it == params.end() || it->second.size() != 1) {
            throw std::invalid_argument("family '" + name + "' needs parameter --" + key);
        }
        return it->second.front();
    };
    if (name.starts_with("nlwe:")) {
        return nlwe_of(build_family(name.substr(5), params));
    }
    if (name == "tiles") {
        return tiles();
    }
    if (name == "gentiles1") {
        return gentiles1(static_cast<int>(get("m")));
    }
    if (name == "gentiles2") {
        return gentiles2(static_cast<int>(get("m")), static_cast<int>(get("n")));
    }
    if (name == "niset_cerf") {
        auto it = params.find("dims");
        if (it == params.end()) {
            throw std::invalid_argument("family 'niset_cerf' needs parameter --dims");
        }
        std::vector<std::size_t> dims;
        for (auto d : it->second) {
            if (d < 1) {
                throw std::invalid_argument("dimensions must be positive");
            }
            dims.push_back(static_cast<std::size_t>(d));
        }
        return niset_cerf(dims);
    }
    if (name == "random3x3") {
        return random_3x3_upb(static_cast<std::uint64_t>(get("seed")));
    }
    if (name == "tiles_squared") {
        return tiles_squared();
    }
    if (name.starts_with("tensor:")) {
        auto sub = build_family(name.substr(7), params);
        return tensor_power(sub, sub);
    }
    throw std::invalid_argument("unknown family '" + name + "'");
}

}  // namespace upb
