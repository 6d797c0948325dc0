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

#include "planner.hpp"

#include <algorithm>
#include <numeric>

namespace upb::detail {

namespace {

constexpr int kMaxDepth = 12;
constexpr double kWeight = 1e-12;  // candidates lighter than this are gone
constexpr double kRel = 1e-8;      // relative threshold for supports and overlaps

// Orthonormal basis of the reduced support of `psi` on `labels`.
Matrix local_support(const Ket &psi, const std::vector<std::string> &labels) {
    Matrix m = bipartite_matrix(psi, labels);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > kRel * s[0]) {
        r++;
    }
    return svd.matrixU().leftCols(r);
}

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

Builder::Builder(const StateSet &target, ResourceSpec resource)
    : target_(target), resource_(std::move(resource)) {
    layout_ = attach_resource(target_.layout(), resource_);
    for (const auto &f : resource_.ancilla_factors()) {
        ancillas_.push_back(f.label);
    }
}

Candidates Builder::initial() const {
    Candidates out;
    for (std::size_t i = 0; i < target_.size(); i++) {
        out.push_back({target_.members()[i].label, prepare(target_.ket(i), resource_)});
    }
    return out;
}

Candidates Builder::project(const Candidates &c, const Operator &op) const {
    Candidates out;
    for (const auto &x : c) {
        Ket k = apply(op, x.state);
        if (k.amplitudes().squaredNorm() > kWeight) {
            out.push_back({x.label, std::move(k)});
        }
    }
    return out;
}

Candidates Builder::transform(const Candidates &c, const Operator &u) const {
    Candidates out;
    for (const auto &x : c) {
        out.push_back({x.label, apply(u, x.state)});
    }
    return out;
}

Operator Builder::op(const Matrix &m, const std::vector<std::string> &support) const {
    return embed_local_operator(m, std::span<const std::string>(support), layout_);
}

Measurement Builder::measurement(const std::string &party, const std::vector<std::string> &support,
                                 std::vector<Matrix> outcomes, std::vector<std::string> labels,
                                 bool add_complement) const {
    auto d = static_cast<Eigen::Index>(layout_.dim_of(support));
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < outcomes.size(); i++) {
        for (std::size_t j = i + 1; j < outcomes.size(); j++) {
            if ((outcomes[i] * outcomes[j]).norm() > 1e-9) {
                throw std::logic_error("measurement outcomes '" + labels[i] + "' and '" + labels[j] +
                                       "' overlap");
            }
        }
        sum += outcomes[i];
    }
    Matrix rest = Matrix::Identity(d, d) - sum;
    if (add_complement && rest.norm() > 1e-9) {
        outcomes.push_back(rest);
        labels.push_back("rest");
    }
    Measurement m{party, {}, std::move(labels)};
    for (const auto &o : outcomes) {
        m.outcomes.push_back(op(o, support));
    }
    return m;
}

NodePtr Builder::measure(const Candidates &c, Measurement m, const Next &next) const {
    std::vector<NodePtr> children;
    for (std::size_t i = 0; i < m.outcomes.size(); i++) {
        Candidates cc = project(c, m.outcomes[i]);
        children.push_back(cc.empty() ? make_leaf(kImpossible) : next(i, cc));
    }
    return make_step(std::move(m), std::move(children));
}

NodePtr Builder::measure(const Candidates &c, Measurement m) const {
    return measure(c, std::move(m), [this](std::size_t, const Candidates &cc) { return finish(cc); });
}

NodePtr Builder::finish(const Candidates &c, int depth) const {
    if (c.empty()) {
        return make_leaf(kImpossible);
    }
    if (c.size() == 1) {
        return make_leaf(c.front().label);
    }
    if (depth > kMaxDepth) {
        throw PlannerStuck("refinement depth exceeded");
    }
    for (std::size_t i = 0; i < c.size(); i++) {
        for (std::size_t j = i + 1; j < c.size(); j++) {
            double ov = std::abs(inner_product(c[i].state, c[j].state));
            if (ov > kRel * c[i].state.norm() * c[j].state.norm()) {
                throw PlannerStuck("branch states of '" + c[i].label + "' and '" + c[j].label +
                                   "' are no longer orthogonal");
            }
        }
    }
    auto parties = layout_.parties();
    for (const auto &p : parties) {
        if (auto n = try_direct(c, p, depth)) {
            return n;
        }
    }
    for (const auto &p : parties) {
        if (auto n = try_split(c, p, std::nullopt, depth)) {
            return n;
        }
    }
    for (const auto &p : parties) {
        for (std::size_t h = c.size(); h-- > 0;) {
            if (auto n = try_split(c, p, h, depth)) {
                return n;
            }
        }
    }
    for (const auto &a : ancillas_) {
        if (auto n = try_fourier(c, a, depth)) {
            return n;
        }
    }
    std::string names;
    for (const auto &x : c) {
        names += " " + x.label;
    }
    throw PlannerStuck("no local measurement separates" + names);
}

NodePtr Builder::try_direct(const Candidates &c, const std::string &party, int depth) const {
    auto labels = layout_.labels_of(party);
    std::vector<Vector> phis;
    for (const auto &x : c) {
        Matrix m = bipartite_matrix(x.state, labels);
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
        const auto &s = svd.singularValues();
        if (s.size() > 1 && s[1] > kRel * s[0]) {
            return nullptr;
        }
        phis.push_back(svd.matrixU().col(0));
    }
    for (std::size_t i = 0; i < phis.size(); i++) {
        for (std::size_t j = i + 1; j < phis.size(); j++) {
            if (std::abs(phis[i].dot(phis[j])) > kRel) {
                return nullptr;
            }
        }
    }
    std::vector<Matrix> outs;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < phis.size(); i++) {
        outs.push_back(projector(phis[i]));
        names.push_back("is " + c[i].label);
    }
    try {
        return measure(c, measurement(party, labels, std::move(outs), std::move(names)),
                       [&](std::size_t, const Candidates &cc) { return finish(cc, depth + 1); });
    } catch (const PlannerStuck &) {
        return nullptr;
    }
}

NodePtr Builder::try_split(const Candidates &c, const std::string &party,
                           std::optional<std::size_t> hub, int depth) const {
    auto labels = layout_.labels_of(party);
    std::vector<std::size_t> idx;
    std::vector<Matrix> supp;
    for (std::size_t i = 0; i < c.size(); i++) {
        if (hub && i == *hub) {
            continue;
        }
        idx.push_back(i);
        supp.push_back(local_support(c[i].state, labels));
    }
    std::vector<std::size_t> parent(idx.size());
    std::iota(parent.begin(), parent.end(), 0);
    for (std::size_t i = 0; i < idx.size(); i++) {
        for (std::size_t j = i + 1; j < idx.size(); j++) {
            if ((supp[i].adjoint() * supp[j]).cwiseAbs().maxCoeff() > kRel) {
                parent[find_root(parent, i)] = find_root(parent, j);
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < idx.size(); i++) {
        groups[find_root(parent, i)].push_back(i);
    }
    if (!hub && groups.size() < 2) {
        return nullptr;
    }
    auto d = static_cast<Eigen::Index>(layout_.dim_of(labels));
    std::vector<Matrix> outs;
    std::vector<std::string> names;
    Matrix sum = Matrix::Zero(d, d);
    for (const auto &[root, members] : groups) {
        Eigen::Index cols = 0;
        for (auto i : members) {
            cols += supp[i].cols();
        }
        Matrix all(d, cols);
        Eigen::Index at = 0;
        std::string name = "{";
        for (auto i : members) {
            all.middleCols(at, supp[i].cols()) = supp[i];
            at += supp[i].cols();
            name += (name.size() > 1 ? "," : "") + c[idx[i]].label;
        }
        Matrix q = span_basis(all, kRel);
        outs.push_back(q * q.adjoint());
        names.push_back(name + "}");
        sum += outs.back();
    }
    if (hub) {
        Matrix rest = Matrix::Identity(d, d) - sum;
        double w = apply(op(rest, labels), c[*hub].state).amplitudes().squaredNorm();
        if (groups.size() < 2 && w <= kWeight) {
            return nullptr;
        }
    }
    try {
        return measure(c, measurement(party, labels, std::move(outs), std::move(names)),
                       [&](std::size_t, const Candidates &cc) { return finish(cc, depth + 1); });
    } catch (const PlannerStuck &) {
        return nullptr;
    } catch (const std::logic_error &) {
        // Group projectors overlap numerically; not a usable split.
        return nullptr;
    }
}

NodePtr Builder::try_fourier(const Candidates &c, const std::string &ancilla, int depth) const {
    std::vector<std::string> labels{ancilla};
    bool entangled = false;
    for (const auto &x : c) {
        if (local_support(x.state, labels).cols() > 1) {
            entangled = true;
            break;
        }
    }
    if (!entangled) {
        return nullptr;
    }
    const Factor &f = layout_.factor(ancilla);
    Matrix h = dft_matrix(f.dim);
    std::vector<Matrix> outs;
    std::vector<std::string> names;
    for (Eigen::Index s = 0; s < h.cols(); s++) {
        outs.push_back(projector(h.col(s)));
        names.push_back("FB" + std::to_string(s));
    }
    try {
        return measure(c, measurement(f.owner, labels, std::move(outs), std::move(names), false),
                       [&](std::size_t, const Candidates &cc) { return finish(cc, depth + 1); });
    } catch (const PlannerStuck &) {
        return nullptr;
    }
}

Protocol Builder::protocol(std::string name, NodePtr root) const {
    return {std::move(name), std::move(root), resource_, target_.layout()};
}

NodePtr rename_tree(const NodePtr &node, const std::map<std::string, std::string> &factors,
                    const std::function<NodePtr(const std::string &leaf)> &leaf) {
    const auto &v = node->get();
    if (const auto *l = std::get_if<Leaf>(&v)) {
        return leaf(l->label);
    }
    if (const auto *c = std::get_if<Correction>(&v)) {
        LocalUnitary u = c->unitary;
        u.op = u.op.renamed(factors);
        return make_correction(std::move(u), rename_tree(c->child, factors, leaf));
    }
    const auto &s = std::get<Step>(v);
    Measurement m = s.measurement;
    for (auto &o : m.outcomes) {
        o = o.renamed(factors);
    }
    std::vector<NodePtr> children;
    for (const auto &ch : s.children) {
        children.push_back(rename_tree(ch, factors, leaf));
    }
    return make_step(std::move(m), std::move(children));
}

}  // namespace upb::detail
