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

#ifndef UPB_VERIFY_HPP
#define UPB_VERIFY_HPP

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "upb/catalog.hpp"
#include "upb/locc.hpp"

namespace upb {

struct OrthogonalityReport {
    bool pass = true;
    double max_overlap = 0.0;  ///< largest off-diagonal |Gram| entry
    std::optional<std::pair<std::string, std::string>> worst_pair;
    double max_norm_defect = 0.0;
};
OrthogonalityReport check_orthogonality(const StateSet &s, double tol = 1e-9);

enum class Extendibility { Unextendible, Extendible };

struct UnextendibleOptions {
    bool force = false;  ///< allow more than max_members members
    std::size_t max_members = 30;
    double rank_tol = 1e-9;
};

struct UnextendibleReport {
    Extendibility verdict = Extendibility::Unextendible;
    std::size_t nodes = 0;  ///< partial assignments visited
    /// For EXTENDIBLE: group (party index) of each member.
    std::vector<std::size_t> assignment;
    std::map<std::string, Vector> witness;
    double witness_max_overlap = 0.0;
};

/// Exhaustive partition test. A product vector orthogonal to every member
/// exists iff the members split into one group per party such that no
/// group's local vectors span that party's space.
UnextendibleReport check_unextendible(const StateSet &s, const UnextendibleOptions &options = {});

struct MemberOutcome {
    std::string label;
    double probability_sum = 0.0;
    double correct_probability = 0.0;
    std::size_t branches = 0;       ///< surviving branches
    std::size_t max_measurements = 0;
    std::size_t total_measurements = 0;
    std::vector<std::string> wrong_leaves;
};

struct DiscriminationReport {
    bool pass = true;
    double worst_defect = 0.0;  ///< max |1 - correct probability| over members
    std::vector<MemberOutcome> members;
    /// (member, leaf, probability) for surviving branches that name another member.
    std::vector<std::tuple<std::string, std::string, double>> mislabeled;
    std::size_t max_measurements = 0;
    std::size_t total_measurements = 0;
};

/// Runs the protocol on every member and checks that every branch with
/// probability above prune_tol ends at that member's label.
DiscriminationReport check_perfect_discrimination(const StateSet &s, const ValidatedProtocol &protocol,
                                                  double tol = 1e-9, double prune_tol = 1e-12);
/// Same with the protocol's resource replaced.
DiscriminationReport check_perfect_discrimination(const StateSet &s, const Protocol &protocol,
                                                  const ResourceSpec &resource, double tol = 1e-9,
                                                  double prune_tol = 1e-12);

struct EntanglementReport {
    std::size_t schmidt_rank = 1;
    double ebits = 0.0;
};
EntanglementReport resource_entanglement(const ResourceSpec &resource);

/// |<Psi4|F>| restricted to the Psi4 terms, after Bob's first Tiles slide
/// with resource lambda0|00> + lambda1|11>. Equals |lambda0^2 - lambda1^2|.
double pes_overlap_experiment(double lambda0, double lambda1);

}  // namespace upb

#endif  // UPB_VERIFY_HPP
