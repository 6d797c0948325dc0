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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace upb {

std::string ancilla_label(const std::string &party, std::size_t pair_index, std::size_t pair_count) {
    std::string s;
    for (char c : party) {
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (pair_count > 1) {
        s += std::to_string(pair_index + 1);
    }
    return s;
}

std::vector<Factor> ResourceSpec::ancilla_factors() const {
    std::vector<Factor> out;
    for (std::size_t i = 0; i < pairs.size(); i++) {
        const auto &p = pairs[i];
        out.push_back({ancilla_label(p.party1, i, pairs.size()), p.dim, p.party1});
        out.push_back({ancilla_label(p.party2, i, pairs.size()), p.dim, p.party2});
    }
    return out;
}

void ResourceSpec::validate() const {
    for (const auto &p : pairs) {
        if (p.party1 == p.party2) {
            throw std::invalid_argument("entangled pair needs two distinct parties");
        }
        if (p.coefficients.empty() || p.dim < p.coefficients.size()) {
            throw std::invalid_argument("entangled pair needs 1 <= rank <= dim");
        }
        double s = 0.0;
        for (std::size_t k = 0; k < p.coefficients.size(); k++) {
            if (!(p.coefficients[k] > 0.0)) {
                throw std::invalid_argument("Schmidt coefficients must be positive");
            }
            if (k > 0 && p.coefficients[k] > p.coefficients[k - 1] + 1e-15) {
                throw std::invalid_argument("Schmidt coefficients must be descending");
            }
            s += p.coefficients[k] * p.coefficients[k];
        }
        if (std::abs(s - 1.0) > 1e-10) {
            throw std::invalid_argument("Schmidt coefficients must have unit square sum");
        }
    }
}

EntangledPair maximally_entangled(std::size_t r, std::string party1, std::string party2) {
    if (r == 0) {
        throw std::invalid_argument("maximally_entangled: rank must be at least 1");
    }
    EntangledPair p{std::move(party1), std::move(party2),
                    std::vector<double>(r, 1.0 / std::sqrt(static_cast<double>(r))), r};
    return p;
}

EntangledPair partially_entangled(std::vector<double> coefficients, std::string party1,
                                  std::string party2, std::size_t dim) {
    std::sort(coefficients.begin(), coefficients.end(), std::greater<>());
    EntangledPair p{std::move(party1), std::move(party2), std::move(coefficients), 0};
    p.dim = dim == 0 ? p.coefficients.size() : dim;
    ResourceSpec{{p}}.validate();
    return p;
}

SystemLayout attach_resource(const SystemLayout &principal, const ResourceSpec &resource) {
    resource.validate();
    return principal.concat(SystemLayout(resource.ancilla_factors()));
}

Ket prepare(const Ket &input, const ResourceSpec &resource) {
    resource.validate();
    Ket acc = input;
    auto factors = resource.ancilla_factors();
    for (std::size_t i = 0; i < resource.pairs.size(); i++) {
        const auto &p = resource.pairs[i];
        SystemLayout l({factors[2 * i], factors[2 * i + 1]});
        Vector v = Vector::Zero(static_cast<Eigen::Index>(p.dim * p.dim));
        for (std::size_t k = 0; k < p.coefficients.size(); k++) {
            v[static_cast<Eigen::Index>(k * p.dim + k)] = p.coefficients[k];
        }
        acc = tensor_product(acc, Ket(l, v));
    }
    return acc;
}

Operator controlled_projection(const std::vector<Matrix> &projectors, const std::string &principal,
                               const std::string &ancilla, const SystemLayout &layout, double tol) {
    const Factor &anc = layout.factor(ancilla);
    const Factor &pri = layout.factor(principal);
    if (projectors.size() != anc.dim) {
        throw std::invalid_argument("controlled_projection needs one projector per ancilla level");
    }
    auto d = static_cast<Eigen::Index>(pri.dim);
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t k = 0; k < projectors.size(); k++) {
        const auto &p = projectors[k];
        if (p.rows() != d || p.cols() != d) {
            throw std::invalid_argument("projector dimension mismatch");
        }
        if (!(p * p).isApprox(p, tol) && !(p.norm() <= tol)) {
            throw std::invalid_argument("controlled_projection: P_k is not a projector");
        }
        for (std::size_t l = k + 1; l < projectors.size(); l++) {
            if ((p * projectors[l]).norm() > tol) {
                throw std::invalid_argument("controlled_projection: projectors not orthogonal");
            }
        }
        sum += p;
    }
    if ((sum - Matrix::Identity(d, d)).norm() > tol) {
        throw std::invalid_argument("completeness violation: sum of P_k is not the identity");
    }
    auto r = static_cast<Eigen::Index>(anc.dim);
    Matrix op = Matrix::Zero(r * d, r * d);
    for (Eigen::Index k = 0; k < r; k++) {
        op.block(k * d, k * d, d, d) = projectors[static_cast<std::size_t>(k)];
    }
    return Operator({anc, pri}, op);
}

OutcomeResult apply_outcome(const Ket &state, const Operator &outcome, double prune_tol) {
    Ket out = apply(outcome, state);
    OutcomeResult r;
    r.probability = out.amplitudes().squaredNorm();
    if (r.probability > prune_tol) {
        r.post = out.normalized();
    }
    return r;
}

NodePtr make_leaf(std::string label) { return std::make_shared<const ProtocolNode>(Leaf{std::move(label)}); }

NodePtr make_step(Measurement m, std::vector<NodePtr> children) {
    if (children.size() != m.outcomes.size()) {
        throw std::invalid_argument("a step needs exactly one child per outcome");
    }
    if (m.labels.size() != m.outcomes.size()) {
        throw std::invalid_argument("a measurement needs one label per outcome");
    }
    return std::make_shared<const ProtocolNode>(Step{std::move(m), std::move(children)});
}

NodePtr make_correction(LocalUnitary u, NodePtr child) {
    return std::make_shared<const ProtocolNode>(Correction{std::move(u), std::move(child)});
}

namespace {

bool local_to(const Operator &op, const std::string &party, const SystemLayout &layout,
              std::vector<std::string> &violations, const std::string &where) {
    bool ok = true;
    for (const auto &f : op.support()) {
        auto pos = layout.find(f.label);
        if (!pos) {
            violations.push_back(where + ": unknown factor '" + f.label + "'");
            ok = false;
        } else if (layout.factors()[*pos].owner != party) {
            violations.push_back(where + ": locality violation, factor '" + f.label +
                                 "' is not owned by party " + party);
            ok = false;
        } else if (layout.factors()[*pos].dim != f.dim) {
            violations.push_back(where + ": dimension mismatch on factor '" + f.label + "'");
            ok = false;
        }
    }
    return ok;
}

}  // namespace

ValidationReport validate_measurement(const Measurement &m, const SystemLayout &layout, double tol) {
    ValidationReport r;
    const std::string where = "measurement by " + m.party;
    if (m.outcomes.empty()) {
        r.violations.push_back(where + ": no outcomes");
    }
    if (m.labels.size() != m.outcomes.size()) {
        r.violations.push_back(where + ": label count differs from outcome count");
    }
    bool ok = true;
    for (const auto &op : m.outcomes) {
        ok = local_to(op, m.party, layout, r.violations, where) && ok;
        if (op.support_labels() != m.outcomes.front().support_labels()) {
            r.violations.push_back(where + ": outcomes act on different supports");
            ok = false;
        }
    }
    if (ok && !m.outcomes.empty()) {
        auto d = static_cast<Eigen::Index>(m.outcomes.front().local_dim());
        Matrix sum = Matrix::Zero(d, d);
        for (std::size_t i = 0; i < m.outcomes.size(); i++) {
            const Matrix &mi = m.outcomes[i].local();
            sum += mi.adjoint() * mi;
            if ((mi - mi.adjoint()).norm() > tol || (mi * mi - mi).norm() > tol) {
                r.projective = false;
                r.violations.push_back(where + ": outcome '" + m.labels[i] + "' is not a projector");
            }
            for (std::size_t j = i + 1; j < m.outcomes.size(); j++) {
                if ((mi * m.outcomes[j].local()).norm() > tol) {
                    r.projective = false;
                    r.violations.push_back(where + ": outcomes '" + m.labels[i] + "' and '" +
                                           m.labels[j] + "' are not orthogonal");
                }
            }
        }
        double defect = (sum - Matrix::Identity(d, d)).norm();
        if (defect > tol) {
            std::ostringstream os;
            os << where << ": completeness violation (defect " << defect << ")";
            r.violations.push_back(os.str());
        }
    }
    r.ok = r.violations.empty();
    r.measurement_count = 1;
    r.depth = 1;
    r.node_count = 1;
    return r;
}

ValidationReport validate_protocol(const ProtocolNode &root, const SystemLayout &layout, double tol) {
    ValidationReport out;
    std::function<std::size_t(const ProtocolNode &)> walk = [&](const ProtocolNode &n) -> std::size_t {
        out.node_count++;
        if (std::holds_alternative<Leaf>(n.get())) {
            return 0;
        }
        if (const auto *c = std::get_if<Correction>(&n.get())) {
            std::vector<std::string> v;
            if (local_to(c->unitary.op, c->unitary.party, layout, v, "correction by " + c->unitary.party)) {
                const Matrix &u = c->unitary.op.local();
                if ((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() > tol) {
                    v.push_back("correction by " + c->unitary.party + ": not unitary");
                }
            }
            out.violations.insert(out.violations.end(), v.begin(), v.end());
            if (!c->child) {
                out.violations.push_back("correction without child");
                return 0;
            }
            return walk(*c->child);
        }
        const auto &s = std::get<Step>(n.get());
        out.measurement_count++;
        auto r = validate_measurement(s.measurement, layout, tol);
        out.projective = out.projective && r.projective;
        out.violations.insert(out.violations.end(), r.violations.begin(), r.violations.end());
        if (s.children.size() != s.measurement.outcomes.size()) {
            out.violations.push_back("step has " + std::to_string(s.children.size()) +
                                     " children for " + std::to_string(s.measurement.outcomes.size()) +
                                     " outcomes");
        }
        std::size_t deepest = 0;
        for (const auto &child : s.children) {
            if (!child) {
                out.violations.push_back("step with a missing child");
                continue;
            }
            deepest = std::max(deepest, walk(*child));
        }
        return deepest + 1;
    };
    out.depth = walk(root);
    out.ok = out.violations.empty();
    return out;
}

ValidatedProtocol validated(Protocol p, double tol) {
    if (!p.root) {
        throw std::invalid_argument("protocol has no root");
    }
    SystemLayout layout = attach_resource(p.principal, p.resource);
    auto report = validate_protocol(*p.root, layout, tol);
    if (!report.ok) {
        std::string msg = "protocol '" + p.name + "' failed validation:";
        for (std::size_t i = 0; i < std::min<std::size_t>(report.violations.size(), 5); i++) {
            msg += "\n  " + report.violations[i];
        }
        throw std::invalid_argument(msg);
    }
    return ValidatedProtocol(std::move(p), std::move(layout), std::move(report));
}

Protocol with_resource(Protocol p, ResourceSpec resource) {
    auto old = p.resource.ancilla_factors();
    auto now = resource.ancilla_factors();
    if (old.size() != now.size()) {
        throw std::invalid_argument("resource override must keep the number of pairs");
    }
    for (std::size_t i = 0; i < old.size(); i++) {
        if (old[i].label != now[i].label || old[i].owner != now[i].owner) {
            throw std::invalid_argument("resource override must keep the same parties");
        }
        if (old[i].dim != now[i].dim) {
            throw std::invalid_argument("resource override must keep ancilla dimension " +
                                        std::to_string(old[i].dim));
        }
    }
    p.resource = std::move(resource);
    return p;
}

std::vector<BranchTrace> run_protocol(const Ket &input, const ValidatedProtocol &protocol,
                                      const RunOptions &options) {
    if (!(input.layout() == protocol.protocol().principal)) {
        throw std::invalid_argument("layout mismatch: input is not on the protocol's principal layout");
    }
    std::vector<BranchTrace> out;
    BranchTrace cur;
    std::function<void(const ProtocolNode &, const Ket &, double)> walk =
        [&](const ProtocolNode &n, const Ket &state, double p) {
            if (const auto *leaf = std::get_if<Leaf>(&n.get())) {
                BranchTrace b = cur;
                b.probability = p;
                b.leaf = leaf->label;
                if (options.keep_states) {
                    b.state = state;
                }
                out.push_back(std::move(b));
                return;
            }
            if (const auto *c = std::get_if<Correction>(&n.get())) {
                walk(*c->child, apply(c->unitary.op, state), p);
                return;
            }
            const auto &s = std::get<Step>(n.get());
            if (options.max_depth && cur.path.size() >= *options.max_depth) {
                BranchTrace b = cur;
                b.probability = p;
                b.leaf = "...";
                if (options.keep_states) {
                    b.state = state;
                }
                out.push_back(std::move(b));
                return;
            }
            const auto &m = s.measurement;
            for (std::size_t i = 0; i < m.outcomes.size(); i++) {
                auto r = apply_outcome(state, m.outcomes[i], 0.0);
                double q = p * r.probability;
                cur.path.emplace_back(m.party, m.labels[i]);
                if (q <= options.prune_tol || !r.post) {
                    BranchTrace b = cur;
                    b.probability = q;
                    b.pruned = true;
                    out.push_back(std::move(b));
                } else {
                    walk(*s.children[i], *r.post, q);
                }
                cur.path.pop_back();
            }
        };
    walk(*protocol.protocol().root, prepare(input, protocol.protocol().resource), 1.0);
    return out;
}

Protocol teleportation_protocol(std::size_t dim) {
    SystemLayout principal({{"B", dim, "B"}});
    ResourceSpec res{{maximally_entangled(dim, "A", "B")}};
    SystemLayout full = attach_resource(principal, res);
    // Generalized Bell basis on (b, B): (Z^s X^t ⊗ I)|B_0>.
    Measurement m{"B", {}, {}};
    auto d = static_cast<Eigen::Index>(dim);
    Matrix h = dft_matrix(dim);
    std::vector<NodePtr> children;
    for (Eigen::Index s = 0; s < d; s++) {
        for (Eigen::Index t = 0; t < d; t++) {
            Vector v = Vector::Zero(d * d);
            for (Eigen::Index k = 0; k < d; k++) {
                v[((k + t) % d) * d + k] = h(s, k);
            }
            m.outcomes.push_back(embed_local_operator(projector(v), {"b", "B"}, full));
            m.labels.push_back("B_" + std::to_string(s * d + t));
            children.push_back(make_leaf("B_" + std::to_string(s * d + t)));
        }
    }
    return {"teleportation", make_step(std::move(m), std::move(children)), res, principal};
}

TeleportResult teleportation_demo(const Vector &psi) {
    auto dim = static_cast<std::size_t>(psi.size());
    Protocol p = teleportation_protocol(dim);
    auto vp = validated(p);
    Ket in(p.principal, psi.normalized());
    auto branches = run_protocol(in, vp);
    TeleportResult r;
    for (const auto &b : branches) {
        if (b.leaf != "B_0" || !b.state) {
            continue;
        }
        r.probability = b.probability;
        // Alice's ancilla a carries the state; (b, B) sit in |B_0>.
        auto sd = schmidt_decomposition(*b.state, std::vector<std::string>{"a"});
        Vector a = sd.left.col(0);
        r.fidelity = std::norm(a.dot(psi.normalized()));
        if (sd.rank() != 1) {
            r.fidelity = 0.0;
        }
    }
    return r;
}

}  // namespace upb
