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

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace upb {

OrthogonalityReport check_orthogonality(const StateSet &s, double tol) {
    OrthogonalityReport r;
    auto kets = s.kets();
    for (std::size_t i = 0; i < kets.size(); i++) {
        r.max_norm_defect = std::max(r.max_norm_defect, std::abs(kets[i].norm() - 1.0));
        for (std::size_t j = i + 1; j < kets.size(); j++) {
            double ov = std::abs(inner_product(kets[i], kets[j]));
            if (ov > r.max_overlap) {
                r.max_overlap = ov;
                r.worst_pair = std::make_pair(s.members()[i].label, s.members()[j].label);
            }
        }
    }
    r.pass = r.max_overlap <= tol && r.max_norm_defect <= tol;
    return r;
}

namespace {

// Incrementally grown orthonormal basis of one group's local vectors.
struct Span {
    std::vector<Vector> basis;

    // Residual of v against the span, or empty if v already lies in it.
    std::optional<Vector> residual(const Vector &v, double tol) const {
        Vector r = v;
        for (const auto &b : basis) {
            r -= b * b.dot(r);
        }
        double n = r.norm();
        if (n <= tol) {
            return std::nullopt;
        }
        return Vector(r / n);
    }
};

}  // namespace

UnextendibleReport check_unextendible(const StateSet &s, const UnextendibleOptions &options) {
    if (s.size() > options.max_members && !options.force) {
        throw std::invalid_argument("check_unextendible: " + std::to_string(s.size()) +
                                    " members exceeds the limit of " +
                                    std::to_string(options.max_members) + " (use force)");
    }
    const auto &layout = s.layout();
    auto parties = layout.parties();
    const std::size_t N = parties.size();
    std::vector<std::size_t> dims;
    for (const auto &p : parties) {
        auto labels = layout.labels_of(p);
        if (labels.size() != 1) {
            throw std::invalid_argument("check_unextendible: party " + p + " holds several factors");
        }
        dims.push_back(layout.factor(labels.front()).dim);
    }
    std::vector<std::vector<Vector>> local(s.size());
    for (std::size_t i = 0; i < s.size(); i++) {
        for (const auto &p : parties) {
            local[i].push_back(s.members()[i].parts.at(p).normalized());
        }
    }

    // Greedy novelty ordering: next is the member adding the most new
    // directions to the running per-party spans.
    std::vector<std::size_t> order;
    {
        std::vector<Span> seen(N);
        std::vector<bool> used(s.size(), false);
        for (std::size_t step = 0; step < s.size(); step++) {
            std::size_t best = 0;
            double best_score = -1.0;
            for (std::size_t i = 0; i < s.size(); i++) {
                if (used[i]) {
                    continue;
                }
                double score = 0.0;
                for (std::size_t n = 0; n < N; n++) {
                    if (seen[n].basis.size() < dims[n]) {
                        Vector r = local[i][n];
                        for (const auto &b : seen[n].basis) {
                            r -= b * b.dot(r);
                        }
                        score += r.norm();
                    }
                }
                if (score > best_score + 1e-12) {
                    best_score = score;
                    best = i;
                }
            }
            used[best] = true;
            order.push_back(best);
            for (std::size_t n = 0; n < N; n++) {
                if (auto r = seen[n].residual(local[best][n], options.rank_tol)) {
                    seen[n].basis.push_back(*r);
                }
            }
        }
    }

    UnextendibleReport report;
    std::vector<Span> groups(N);
    std::vector<std::size_t> assign(s.size(), 0);
    // Assign members one by one; a member may join group n only while that
    // group still leaves a non-zero orthocomplement on party n.
    std::function<bool(std::size_t)> dfs = [&](std::size_t at) -> bool {
        report.nodes++;
        if (at == order.size()) {
            return true;
        }
        std::size_t i = order[at];
        for (std::size_t n = 0; n < N; n++) {
            auto r = groups[n].residual(local[i][n], options.rank_tol);
            if (r && groups[n].basis.size() + 1 >= dims[n]) {
                continue;
            }
            if (r) {
                groups[n].basis.push_back(*r);
            }
            assign[i] = n;
            if (dfs(at + 1)) {
                return true;
            }
            if (r) {
                groups[n].basis.pop_back();
            }
        }
        return false;
    };
    if (!dfs(0)) {
        report.verdict = Extendibility::Unextendible;
        return report;
    }
    report.verdict = Extendibility::Extendible;
    report.assignment = assign;
    for (std::size_t n = 0; n < N; n++) {
        auto comp = orthocomplement_basis(groups[n].basis, dims[n], options.rank_tol);
        if (comp.empty()) {
            throw std::logic_error("check_unextendible: group spans its space");
        }
        report.witness[parties[n]] = comp.front();
    }
    Ket w = product_ket(layout, report.witness);
    for (std::size_t i = 0; i < s.size(); i++) {
        report.witness_max_overlap =
            std::max(report.witness_max_overlap, std::abs(inner_product(w, s.ket(i))));
    }
    if (report.witness_max_overlap > 1e-9) {
        throw std::logic_error("check_unextendible: witness is not orthogonal to the set");
    }
    return report;
}

DiscriminationReport check_perfect_discrimination(const StateSet &s, const ValidatedProtocol &protocol,
                                                  double tol, double prune_tol) {
    if (!(protocol.protocol().principal == s.layout())) {
        throw std::invalid_argument("check_perfect_discrimination: protocol acts on another layout");
    }
    DiscriminationReport rep;
    RunOptions opts;
    opts.prune_tol = prune_tol;
    opts.keep_states = false;
    for (std::size_t i = 0; i < s.size(); i++) {
        const auto &label = s.members()[i].label;
        MemberOutcome mo;
        mo.label = label;
        for (const auto &b : run_protocol(s.ket(i), protocol, opts)) {
            if (b.pruned) {
                continue;
            }
            mo.branches++;
            mo.probability_sum += b.probability;
            mo.max_measurements = std::max(mo.max_measurements, b.measurements());
            mo.total_measurements += b.measurements();
            if (b.leaf == label) {
                mo.correct_probability += b.probability;
            } else {
                mo.wrong_leaves.push_back(b.leaf);
                rep.mislabeled.emplace_back(label, b.leaf, b.probability);
            }
        }
        rep.worst_defect = std::max(rep.worst_defect, std::abs(1.0 - mo.correct_probability));
        rep.max_measurements = std::max(rep.max_measurements, mo.max_measurements);
        rep.total_measurements += mo.total_measurements;
        rep.members.push_back(std::move(mo));
    }
    rep.pass = rep.mislabeled.empty() && rep.worst_defect <= tol;
    return rep;
}

DiscriminationReport check_perfect_discrimination(const StateSet &s, const Protocol &protocol,
                                                  const ResourceSpec &resource, double tol,
                                                  double prune_tol) {
    return check_perfect_discrimination(s, validated(with_resource(protocol, resource), tol), tol,
                                        prune_tol);
}

EntanglementReport resource_entanglement(const ResourceSpec &resource) {
    resource.validate();
    EntanglementReport r;
    for (const auto &pair : resource.pairs) {
        std::size_t rank = 0;
        for (double l : pair.coefficients) {
            if (l > 0.0) {
                rank++;
                double p = l * l;
                r.ebits -= p * std::log2(p);
            }
        }
        r.schmidt_rank *= rank;
    }
    return r;
}

double pes_overlap_experiment(double lambda0, double lambda1) {
    if (!(lambda0 > 0.0) || !(lambda1 > 0.0) ||
        std::abs(lambda0 * lambda0 + lambda1 * lambda1 - 1.0) > 1e-9) {
        throw std::invalid_argument("pes_overlap_experiment: need positive coefficients with unit square sum");
    }
    StateSet t = tiles();
    std::vector<Factor> fs = t.layout().factors();
    fs.push_back({"a", 2, "A"});
    fs.push_back({"b", 2, "B"});
    SystemLayout full(fs);
    Vector pair = Vector::Zero(4);  // lambda0|00> + lambda1|11> on (a, b)
    pair[0] = lambda0;
    pair[3] = lambda1;
    Matrix p01 = Matrix::Zero(3, 3), p2 = Matrix::Zero(3, 3);
    p01(0, 0) = p01(1, 1) = p2(2, 2) = 1.0;
    Operator slide = controlled_projection({p01, p2}, "B", "b", full);

    auto transformed = [&](const std::string &label) {
        Vector in = t.ket(t.index_of(label)).amplitudes();
        in /= in.cwiseAbs().maxCoeff();  // unit amplitude per occupied cell
        Vector joint(in.size() * 4);
        for (Eigen::Index i = 0; i < in.size(); i++) {
            joint.segment(i * 4, 4) = in[i] * pair;
        }
        return apply(slide, Ket(full, joint));
    };
    Ket psi4 = transformed("Psi4");
    Ket f = transformed("F");
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < psi4.amplitudes().size(); i++) {
        if (std::abs(psi4.amplitudes()[i]) > 1e-12) {
            acc += std::conj(psi4.amplitudes()[i]) * f.amplitudes()[i];
        }
    }
    return std::abs(acc);
}

}  // namespace upb
