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

#include "upb/sep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace upb {

StateSet complete_after_removal(const StateSet &s, std::optional<std::size_t> removed) {
    if (!removed) {
        removed = s.stopper();
    }
    if (!removed || *removed >= s.size()) {
        throw std::invalid_argument("complete_after_removal: no state to remove");
    }
    auto completion = tile_completion(s, removed);
    std::vector<ProductState> members;
    for (std::size_t i = 0; i < s.size(); i++) {
        if (i != *removed) {
            members.push_back(s.members()[i]);
        }
    }
    members.insert(members.end(), completion.added.begin(), completion.added.end());
    auto tiles = s.tiles();
    tiles.insert(tiles.end(), completion.extra_tiles.begin(), completion.extra_tiles.end());
    if (members.size() != s.layout().total_dim()) {
        throw std::logic_error("complete_after_removal: completion has " + std::to_string(members.size()) +
                               " states for dimension " + std::to_string(s.layout().total_dim()));
    }
    FamilyInfo info = s.family();
    info.name = "completed:" + info.name;
    try {
        return StateSet(s.layout(), std::move(members), std::move(tiles), std::move(info));
    } catch (const std::invalid_argument &e) {
        throw std::logic_error(std::string("complete_after_removal: completion is not orthonormal: ") +
                               e.what());
    }
}

Matrix SepMeasurement::projector(std::size_t k) const { return upb::projector(vector(k)); }

SepMeasurement build_sep_measurement(const StateSet &basis) {
    SepMeasurement m;
    m.layout = basis.layout();
    auto d = static_cast<Eigen::Index>(m.layout.total_dim());
    Matrix sum = Matrix::Zero(d, d);
    auto parties = m.layout.parties();
    for (std::size_t k = 0; k < basis.size(); k++) {
        const auto &member = basis.members()[k];
        Ket v = basis.ket(k);
        if (parties.size() > 1) {
            for (const auto &p : parties) {
                if (schmidt_decomposition(v, m.layout.labels_of(p)).rank() != 1) {
                    throw std::invalid_argument("build_sep_measurement: '" + member.label +
                                                "' is not a product state");
                }
            }
        }
        m.labels.push_back(member.label);
        m.parts.push_back(member.parts);
        sum += upb::projector(v.amplitudes());
    }
    m.sum_defect = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (m.sum_defect > 1e-10) {
        throw std::invalid_argument("build_sep_measurement: projectors do not sum to the identity");
    }
    return m;
}

SepReport check_sep_discrimination(const StateSet &s, const SepMeasurement &m,
                                   std::optional<std::size_t> removed, double zero_tol) {
    if (!(m.layout == s.layout())) {
        throw std::invalid_argument("check_sep_discrimination: layouts differ");
    }
    if (!removed) {
        removed = s.stopper();
    }
    std::vector<std::string> reading(m.size());
    std::vector<bool> added(m.size());
    for (std::size_t k = 0; k < m.size(); k++) {
        bool member = false;
        for (const auto &x : s.members()) {
            member = member || x.label == m.labels[k];
        }
        added[k] = !member;
        reading[k] = member ? m.labels[k] : (removed ? s.members().at(*removed).label : "?");
    }
    SepReport rep;
    for (std::size_t i = 0; i < s.size(); i++) {
        SepMemberResult r;
        r.label = s.members()[i].label;
        Vector psi = s.ket(i).amplitudes();
        for (std::size_t k = 0; k < m.size(); k++) {
            double p = std::norm(m.vector(k).dot(psi));
            if (p <= zero_tol) {
                continue;
            }
            r.outcomes.emplace_back(m.labels[k], p);
            if (reading[k] != r.label) {
                r.identified = false;
            }
            if (added[k] && !(removed && *removed == i)) {
                rep.completion_leak = std::max(rep.completion_leak, p);
            }
        }
        if (!r.identified) {
            rep.ambiguous.push_back(r.label);
        }
        rep.members.push_back(std::move(r));
    }
    rep.pass = rep.ambiguous.empty();
    return rep;
}

}  // namespace upb
