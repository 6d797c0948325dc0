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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace upb {

SystemLayout::SystemLayout(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::set<std::string> seen;
    for (const auto &f : factors_) {
        if (f.label.empty()) {
            throw std::invalid_argument("factor label must be non-empty");
        }
        if (f.dim < 1) {
            throw std::invalid_argument("factor '" + f.label + "' has dimension 0");
        }
        if (f.owner.empty()) {
            throw std::invalid_argument("factor '" + f.label + "' has no owner");
        }
        if (!seen.insert(f.label).second) {
            throw std::invalid_argument("label collision: '" + f.label + "'");
        }
        total_dim_ *= f.dim;
    }
}

std::optional<std::size_t> SystemLayout::find(std::string_view label) const {
    for (std::size_t i = 0; i < factors_.size(); i++) {
        if (factors_[i].label == label) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t SystemLayout::index_of(std::string_view label) const {
    auto i = find(label);
    if (!i) {
        throw std::invalid_argument("unknown label '" + std::string(label) + "'");
    }
    return *i;
}

const Factor &SystemLayout::factor(std::string_view label) const {
    return factors_[index_of(label)];
}

std::vector<Factor> SystemLayout::select(std::span<const std::string> labels) const {
    std::vector<Factor> out;
    for (const auto &l : labels) {
        out.push_back(factor(l));
    }
    return out;
}

std::vector<std::string> SystemLayout::parties() const {
    std::vector<std::string> out;
    for (const auto &f : factors_) {
        if (std::find(out.begin(), out.end(), f.owner) == out.end()) {
            out.push_back(f.owner);
        }
    }
    return out;
}

std::vector<std::string> SystemLayout::labels_of(std::string_view party) const {
    std::vector<std::string> out;
    for (const auto &f : factors_) {
        if (f.owner == party) {
            out.push_back(f.label);
        }
    }
    return out;
}

std::size_t SystemLayout::dim_of(std::span<const std::string> labels) const {
    std::size_t d = 1;
    for (const auto &l : labels) {
        d *= factor(l).dim;
    }
    return d;
}

SystemLayout SystemLayout::concat(const SystemLayout &other) const {
    std::vector<Factor> all = factors_;
    all.insert(all.end(), other.factors_.begin(), other.factors_.end());
    return SystemLayout(std::move(all));
}

Ket::Ket(SystemLayout layout, Vector amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
        throw std::invalid_argument("amplitude count " + std::to_string(amplitudes_.size()) +
                                    " does not match layout dimension " +
                                    std::to_string(layout_.total_dim()));
    }
}

Ket Ket::basis(const SystemLayout &layout, std::size_t index) {
    return Ket(layout, basis_vector(layout.total_dim(), index));
}

bool Ket::is_normalized(double tol) const {
    return std::abs(amplitudes_.squaredNorm() - 1.0) <= tol;
}

Ket Ket::normalized() const {
    double n = norm();
    if (n == 0.0) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    return Ket(layout_, amplitudes_ / n);
}

Ket tensor_product(const Ket &x, const Ket &y) {
    SystemLayout layout = x.layout().concat(y.layout());
    Vector out(static_cast<Eigen::Index>(layout.total_dim()));
    const auto &a = x.amplitudes();
    const auto &b = y.amplitudes();
    for (Eigen::Index i = 0; i < a.size(); i++) {
        out.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return Ket(std::move(layout), std::move(out));
}

Ket tensor_product(std::span<const Ket> parts) {
    if (parts.empty()) {
        throw std::invalid_argument("tensor_product needs at least one part");
    }
    Ket acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); i++) {
        acc = tensor_product(acc, parts[i]);
    }
    return acc;
}

Complex inner_product(const Ket &x, const Ket &y) {
    if (!(x.layout() == y.layout())) {
        throw std::invalid_argument("layout mismatch in inner_product");
    }
    return x.amplitudes().dot(y.amplitudes());
}

Ket product_ket(const SystemLayout &layout, const std::map<std::string, Vector> &parts) {
    // Build the party-ordered product, then permute into layout order.
    std::vector<std::string> order;
    Vector acc = Vector::Ones(1);
    for (const auto &party : layout.parties()) {
        auto it = parts.find(party);
        auto labels = layout.labels_of(party);
        std::size_t d = layout.dim_of(labels);
        if (it == parts.end()) {
            throw std::invalid_argument("missing local part for party '" + party + "'");
        }
        if (static_cast<std::size_t>(it->second.size()) != d) {
            throw std::invalid_argument("local part for party '" + party + "' has wrong length");
        }
        Vector next(acc.size() * it->second.size());
        for (Eigen::Index i = 0; i < acc.size(); i++) {
            next.segment(i * it->second.size(), it->second.size()) = acc[i] * it->second;
        }
        acc = std::move(next);
        order.insert(order.end(), labels.begin(), labels.end());
    }
    auto map = support_index_map(layout, layout.select(order));
    Vector out = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    for (std::size_t i = 0; i < map.offsets.size(); i++) {
        out[static_cast<Eigen::Index>(map.offsets[i])] = acc[static_cast<Eigen::Index>(i)];
    }
    return Ket(layout, std::move(out));
}

Operator::Operator(std::vector<Factor> support, Matrix local)
    : support_(std::move(support)), local_(std::move(local)) {
    std::size_t d = 1;
    std::set<std::string> seen;
    for (const auto &f : support_) {
        if (!seen.insert(f.label).second) {
            throw std::invalid_argument("label collision: '" + f.label + "'");
        }
        d *= f.dim;
    }
    if (local_.rows() != local_.cols() || static_cast<std::size_t>(local_.rows()) != d) {
        throw std::invalid_argument("dimension mismatch: operator side " +
                                    std::to_string(local_.rows()) + " vs support dimension " +
                                    std::to_string(d));
    }
}

std::vector<std::string> Operator::support_labels() const {
    std::vector<std::string> out;
    for (const auto &f : support_) {
        out.push_back(f.label);
    }
    return out;
}

Matrix Operator::dense(const SystemLayout &layout) const {
    auto map = support_index_map(layout, support_);
    std::size_t D = layout.total_dim();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
    for (auto base : map.bases) {
        for (std::size_t i = 0; i < map.offsets.size(); i++) {
            for (std::size_t j = 0; j < map.offsets.size(); j++) {
                out(static_cast<Eigen::Index>(base + map.offsets[i]),
                    static_cast<Eigen::Index>(base + map.offsets[j])) =
                    local_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return out;
}

Operator Operator::renamed(const std::map<std::string, std::string> &labels) const {
    std::vector<Factor> support = support_;
    for (auto &f : support) {
        auto it = labels.find(f.label);
        if (it != labels.end()) {
            f.label = it->second;
        }
    }
    return Operator(std::move(support), local_);
}

Operator embed_local_operator(const Matrix &op, std::span<const std::string> target,
                              const SystemLayout &layout) {
    return Operator(layout.select(target), op);
}

Operator embed_local_operator(const Matrix &op, std::initializer_list<std::string> target,
                              const SystemLayout &layout) {
    std::vector<std::string> t(target);
    return embed_local_operator(op, std::span<const std::string>(t), layout);
}

SupportIndexMap support_index_map(const SystemLayout &layout, std::span<const Factor> support) {
    const auto &fs = layout.factors();
    std::vector<std::size_t> stride(fs.size(), 1);
    for (std::size_t p = fs.size(); p-- > 1;) {
        stride[p - 1] = stride[p] * fs[p].dim;
    }
    std::vector<bool> in_support(fs.size(), false);
    std::vector<std::size_t> pos;
    for (const auto &f : support) {
        std::size_t p = layout.index_of(f.label);
        if (fs[p].dim != f.dim) {
            throw std::invalid_argument("dimension mismatch on factor '" + f.label + "'");
        }
        if (in_support[p]) {
            throw std::invalid_argument("label collision: '" + f.label + "'");
        }
        in_support[p] = true;
        pos.push_back(p);
    }

    SupportIndexMap map;
    std::size_t local = 1;
    for (auto p : pos) {
        local *= fs[p].dim;
    }
    map.offsets.resize(local);
    for (std::size_t i = 0; i < local; i++) {
        std::size_t rem = i;
        std::size_t off = 0;
        for (std::size_t t = pos.size(); t-- > 0;) {
            std::size_t d = fs[pos[t]].dim;
            off += (rem % d) * stride[pos[t]];
            rem /= d;
        }
        map.offsets[i] = off;
    }

    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < fs.size(); p++) {
        if (!in_support[p]) {
            rest.push_back(p);
        }
    }
    std::size_t nrest = layout.total_dim() / local;
    map.bases.resize(nrest);
    for (std::size_t r = 0; r < nrest; r++) {
        std::size_t rem = r;
        std::size_t base = 0;
        for (std::size_t t = rest.size(); t-- > 0;) {
            std::size_t d = fs[rest[t]].dim;
            base += (rem % d) * stride[rest[t]];
            rem /= d;
        }
        map.bases[r] = base;
    }
    return map;
}

Ket apply(const Operator &op, const Ket &ket) {
    auto map = support_index_map(ket.layout(), op.support());
    const auto &in = ket.amplitudes();
    Vector out(in.size());
    std::size_t n = map.offsets.size();
    Vector buf(static_cast<Eigen::Index>(n));
    for (auto base : map.bases) {
        for (std::size_t j = 0; j < n; j++) {
            buf[static_cast<Eigen::Index>(j)] = in[static_cast<Eigen::Index>(base + map.offsets[j])];
        }
        Vector res = op.local() * buf;
        for (std::size_t i = 0; i < n; i++) {
            out[static_cast<Eigen::Index>(base + map.offsets[i])] = res[static_cast<Eigen::Index>(i)];
        }
    }
    return Ket(ket.layout(), std::move(out));
}

Matrix bipartite_matrix(const Ket &psi, std::span<const std::string> left) {
    const auto &layout = psi.layout();
    // Keep layout order on both sides.
    std::vector<std::string> ordered;
    for (const auto &f : layout.factors()) {
        if (std::find(left.begin(), left.end(), f.label) != left.end()) {
            ordered.push_back(f.label);
        }
    }
    if (ordered.size() != left.size()) {
        for (const auto &l : left) {
            layout.index_of(l);
        }
        throw std::invalid_argument("duplicate label in cut");
    }
    auto map = support_index_map(layout, layout.select(ordered));
    Matrix m(static_cast<Eigen::Index>(map.offsets.size()),
             static_cast<Eigen::Index>(map.bases.size()));
    const auto &a = psi.amplitudes();
    for (std::size_t r = 0; r < map.bases.size(); r++) {
        for (std::size_t i = 0; i < map.offsets.size(); i++) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) =
                a[static_cast<Eigen::Index>(map.bases[r] + map.offsets[i])];
        }
    }
    return m;
}

SchmidtDecomposition schmidt_decomposition(const Ket &psi, std::span<const std::string> left,
                                           double rank_tol) {
    const auto &layout = psi.layout();
    if (left.empty() || left.size() >= layout.size()) {
        throw std::invalid_argument("empty side of cut");
    }
    Matrix m = bipartite_matrix(psi, left);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    for (const auto &f : layout.factors()) {
        if (std::find(left.begin(), left.end(), f.label) != left.end()) {
            out.left_labels.push_back(f.label);
        } else {
            out.right_labels.push_back(f.label);
        }
    }
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > rank_tol) {
        out.coefficients.push_back(s[r]);
        r++;
    }
    out.left = svd.matrixU().leftCols(r);
    out.right = svd.matrixV().leftCols(r).conjugate();
    return out;
}

Ket SchmidtDecomposition::reconstruct(const SystemLayout &layout) const {
    Matrix m = Matrix::Zero(left.rows(), right.rows());
    for (std::size_t k = 0; k < coefficients.size(); k++) {
        auto kk = static_cast<Eigen::Index>(k);
        m += coefficients[k] * left.col(kk) * right.col(kk).transpose();
    }
    auto map = support_index_map(layout, layout.select(left_labels));
    Vector a = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
    for (std::size_t r = 0; r < map.bases.size(); r++) {
        for (std::size_t i = 0; i < map.offsets.size(); i++) {
            a[static_cast<Eigen::Index>(map.bases[r] + map.offsets[i])] =
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
        }
    }
    return Ket(layout, std::move(a));
}

Matrix span_basis(const Matrix &columns, double rank_tol) {
    if (columns.cols() == 0) {
        return Matrix(columns.rows(), 0);
    }
    Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeFullU);
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > rank_tol) {
        r++;
    }
    return svd.matrixU().leftCols(r);
}

Matrix span_basis(std::span<const Vector> vectors, std::size_t dim, double rank_tol) {
    Matrix cols(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); i++) {
        if (static_cast<std::size_t>(vectors[i].size()) != dim) {
            throw std::invalid_argument("vector length does not match dimension");
        }
        cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    return span_basis(cols, rank_tol);
}

std::vector<Vector> orthocomplement_basis(std::span<const Vector> vectors, std::size_t dim,
                                          double rank_tol) {
    std::vector<Vector> out;
    if (vectors.empty()) {
        for (std::size_t i = 0; i < dim; i++) {
            out.push_back(basis_vector(dim, i));
        }
        return out;
    }
    Matrix cols(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t i = 0; i < vectors.size(); i++) {
        if (static_cast<std::size_t>(vectors[i].size()) != dim) {
            throw std::invalid_argument("vector length does not match dimension");
        }
        cols.col(static_cast<Eigen::Index>(i)) = vectors[i];
    }
    Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullU);
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > rank_tol) {
        r++;
    }
    for (Eigen::Index c = r; c < static_cast<Eigen::Index>(dim); c++) {
        out.push_back(svd.matrixU().col(c));
    }
    return out;
}

Matrix dft_matrix(std::size_t d) {
    if (d == 0) {
        throw std::invalid_argument("dft_matrix: d must be positive");
    }
    Matrix h(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t j = 0; j < d; j++) {
        for (std::size_t k = 0; k < d; k++) {
            // Reduce the exponent first so large products stay exact.
            double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) /
                           static_cast<double>(d);
            h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
                std::polar(scale, phase);
        }
    }
    return h;
}

Vector basis_vector(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw std::out_of_range("basis index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v[static_cast<Eigen::Index>(index)] = 1.0;
    return v;
}

Matrix projector(const Vector &v) { return v * v.adjoint(); }

}  // namespace upb
