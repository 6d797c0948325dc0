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

#ifndef UPB_LOCC_HPP
#define UPB_LOCC_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "upb/tensor.hpp"

namespace upb {

/// Entangled ancilla pair sum_k lambda_k |kk> shared by two parties. `dim`
/// may exceed the number of coefficients (the extra levels start empty).
struct EntangledPair {
    std::string party1;
    std::string party2;
    std::vector<double> coefficients;
    std::size_t dim = 0;
};

struct ResourceSpec {
    std::vector<EntangledPair> pairs;

    /// Ancilla factors in attachment order: party1's then party2's per pair.
    std::vector<Factor> ancilla_factors() const;
    void validate() const;
};

/// r equal coefficients 1/sqrt(r). Throws for r = 0.
EntangledPair maximally_entangled(std::size_t r, std::string party1 = "A",
                                  std::string party2 = "B");
/// Pair with the given Schmidt coefficients (sorted descending, must be
/// positive with unit square sum) on ancillas of dimension `dim` (0: minimal).
EntangledPair partially_entangled(std::vector<double> coefficients, std::string party1 = "A",
                                  std::string party2 = "B", std::size_t dim = 0);

std::string ancilla_label(const std::string &party, std::size_t pair_index, std::size_t pair_count);

SystemLayout attach_resource(const SystemLayout &principal, const ResourceSpec &resource);
/// input ⊗ resource state on the attached layout.
Ket prepare(const Ket &input, const ResourceSpec &resource);

/// Block-diagonal sum_k |k><k|_anc ⊗ P_k on (ancilla, principal).
Operator controlled_projection(const std::vector<Matrix> &projectors, const std::string &principal,
                               const std::string &ancilla, const SystemLayout &layout,
                               double tol = 1e-9);

struct OutcomeResult {
    double probability = 0.0;
    std::optional<Ket> post;  ///< empty when the branch is impossible
};
OutcomeResult apply_outcome(const Ket &state, const Operator &outcome, double prune_tol = 1e-12);

/// One party's measurement. All outcomes act on the same support.
struct Measurement {
    std::string party;
    std::vector<Operator> outcomes;
    std::vector<std::string> labels;
};

struct LocalUnitary {
    std::string party;
    Operator op;
    std::string label;
};

class ProtocolNode;
using NodePtr = std::shared_ptr<const ProtocolNode>;

struct Leaf {
    std::string label;  ///< member label or "impossible"
};
struct Step {
    Measurement measurement;
    std::vector<NodePtr> children;
};
struct Correction {
    LocalUnitary unitary;
    NodePtr child;
};

class ProtocolNode {
   public:
    using Variant = std::variant<Leaf, Step, Correction>;
    explicit ProtocolNode(Variant v) : v_(std::move(v)) {}
    const Variant &get() const { return v_; }

   private:
    Variant v_;
};

inline const std::string kImpossible = "impossible";

NodePtr make_leaf(std::string label);
NodePtr make_step(Measurement m, std::vector<NodePtr> children);
NodePtr make_correction(LocalUnitary u, NodePtr child);

struct Protocol {
    std::string name;
    NodePtr root;
    ResourceSpec resource;
    SystemLayout principal;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::size_t depth = 0;              ///< measurements along the longest path
    std::size_t measurement_count = 0;  ///< Step nodes in the tree
    std::size_t node_count = 0;
    bool projective = true;
};

/// Checks locality, completeness and projectivity of every step against
/// `layout` (principal plus ancillas).
ValidationReport validate_protocol(const ProtocolNode &root, const SystemLayout &layout,
                                   double tol = 1e-9);
ValidationReport validate_measurement(const Measurement &m, const SystemLayout &layout,
                                      double tol = 1e-9);

/// A protocol that passed validation. Only `validated` creates one.
class ValidatedProtocol {
   public:
    const Protocol &protocol() const { return p_; }
    const SystemLayout &layout() const { return layout_; }
    const ValidationReport &report() const { return report_; }

   private:
    friend ValidatedProtocol validated(Protocol p, double tol);
    ValidatedProtocol(Protocol p, SystemLayout layout, ValidationReport r)
        : p_(std::move(p)), layout_(std::move(layout)), report_(std::move(r)) {}
    Protocol p_;
    SystemLayout layout_;
    ValidationReport report_;
};

/// Throws std::invalid_argument listing the violations.
ValidatedProtocol validated(Protocol p, double tol = 1e-9);
/// Same tree and principal layout with another resource.
Protocol with_resource(Protocol p, ResourceSpec resource);

struct BranchTrace {
    std::vector<std::pair<std::string, std::string>> path;  ///< (party, outcome label)
    double probability = 0.0;
    std::string leaf;
    bool pruned = false;
    std::optional<Ket> state;

    std::size_t measurements() const { return path.size(); }
};

struct RunOptions {
    double prune_tol = 1e-12;
    bool keep_states = true;
    std::optional<std::size_t> max_depth;  ///< stop after this many measurements
};

/// Depth-first enumeration of every branch. Throws on a layout mismatch.
std::vector<BranchTrace> run_protocol(const Ket &input, const ValidatedProtocol &protocol,
                                      const RunOptions &options = {});

struct TeleportResult {
    double probability = 0.0;
    double fidelity = 0.0;
};
/// Bob holds `psi` on B and shares a MES (a,b) with Alice; he measures (b,B)
/// in the Bell basis. Reports the B_0 branch: its probability and the
/// fidelity of Alice's ancilla with `psi`.
TeleportResult teleportation_demo(const Vector &psi);
/// The one-step teleportation protocol used by the demo.
Protocol teleportation_protocol(std::size_t dim);

}  // namespace upb

#endif  // UPB_LOCC_HPP
