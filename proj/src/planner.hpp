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

// Internal helpers shared by the protocol builders. Not installed.

#ifndef UPB_SRC_PLANNER_HPP
#define UPB_SRC_PLANNER_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "upb/catalog.hpp"
#include "upb/locc.hpp"

namespace upb::detail {

/// A member's unnormalized branch state; its squared norm is the branch
/// probability so far.
struct Candidate {
    std::string label;
    Ket state;
};
using Candidates = std::vector<Candidate>;

class PlannerStuck : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Tracks which members survive each branch while a tree is assembled, so
/// leaves are labelled by simulation rather than by hand.
class Builder {
   public:
    Builder(const StateSet &target, ResourceSpec resource);

    const SystemLayout &layout() const { return layout_; }
    const ResourceSpec &resource() const { return resource_; }
    const StateSet &target() const { return target_; }

    Candidates initial() const;
    Candidates project(const Candidates &c, const Operator &op) const;
    Candidates transform(const Candidates &c, const Operator &u) const;

    Operator op(const Matrix &m, const std::vector<std::string> &support) const;
    /// Measurement on `support`; appends the complement of the listed
    /// outcomes when it is non-zero. Throws if the outcomes overlap.
    Measurement measurement(const std::string &party, const std::vector<std::string> &support,
                            std::vector<Matrix> outcomes, std::vector<std::string> labels,
                            bool add_complement = true) const;

    using Next = std::function<NodePtr(std::size_t outcome, const Candidates &)>;
    NodePtr measure(const Candidates &c, Measurement m, const Next &next) const;
    /// Measure, then resolve every outcome with `finish`.
    NodePtr measure(const Candidates &c, Measurement m) const;

    /// Leaf when at most one candidate survives, otherwise the search below.
    /// Throws PlannerStuck when no local refinement separates the candidates.
    NodePtr finish(const Candidates &c, int depth = 0) const;

    Protocol protocol(std::string name, NodePtr root) const;

   private:
    NodePtr try_direct(const Candidates &c, const std::string &party, int depth) const;
    NodePtr try_split(const Candidates &c, const std::string &party, std::optional<std::size_t> hub,
                      int depth) const;
    NodePtr try_fourier(const Candidates &c, const std::string &ancilla, int depth) const;

    StateSet target_;
    ResourceSpec resource_;
    SystemLayout layout_;
    std::vector<std::string> ancillas_;
};

/// Relabels factors and leaves of a tree.
NodePtr rename_tree(const NodePtr &node, const std::map<std::string, std::string> &factors,
                    const std::function<NodePtr(const std::string &leaf)> &leaf);

}  // namespace upb::detail

#endif  // UPB_SRC_PLANNER_HPP
