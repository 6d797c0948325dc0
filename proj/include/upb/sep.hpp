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

#ifndef UPB_SEP_HPP
#define UPB_SEP_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upb/catalog.hpp"

namespace upb {

/// Every member except `removed` (default: the stopper) plus the tile
/// completion. The result is an orthonormal product basis of the whole space;
/// throws std::logic_error if it is not.
StateSet complete_after_removal(const StateSet &s, std::optional<std::size_t> removed = std::nullopt);

/// Separable measurement made of rank-1 product projectors.
struct SepMeasurement {
    SystemLayout layout;
    std::vector<std::string> labels;
    std::vector<std::map<std::string, Vector>> parts;
    double sum_defect = 0.0;  ///< max |(sum of projectors - I)_ij|

    std::size_t size() const { return labels.size(); }
    Vector vector(std::size_t k) const { return product_ket(layout, parts[k]).amplitudes(); }
    Matrix projector(std::size_t k) const;
};

/// One projector per basis element. Throws for an entangled element or if
/// the projectors do not sum to the identity within 1e-10.
SepMeasurement build_sep_measurement(const StateSet &basis);

struct SepMemberResult {
    std::string label;
    std::vector<std::pair<std::string, double>> outcomes;  ///< outcomes with p > 1e-12
    bool identified = true;
};

struct SepReport {
    bool pass = true;
    std::vector<SepMemberResult> members;
    std::vector<std::string> ambiguous;  ///< members not identified with certainty
    /// Largest probability of an added completion outcome on a member other
    /// than the removed one.
    double completion_leak = 0.0;
};

/// Outcomes named after a member identify it; every other outcome is read
/// as `removed` (default: the stopper).
SepReport check_sep_discrimination(const StateSet &s, const SepMeasurement &m,
                                   std::optional<std::size_t> removed = std::nullopt,
                                   double zero_tol = 1e-12);

}  // namespace upb

#endif  // UPB_SEP_HPP
