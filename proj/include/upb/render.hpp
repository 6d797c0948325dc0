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

#ifndef UPB_RENDER_HPP
#define UPB_RENDER_HPP

#include <string>
#include <utility>
#include <vector>

#include "upb/catalog.hpp"
#include "upb/locc.hpp"

namespace upb {

/// Tile grid: rows are the second party's standard basis, columns the
/// first party's. Cells show tile ids, '.' when uncovered. With three or
/// four parties one grid is drawn per standard-basis value of the others.
/// Throws std::invalid_argument for more than four parties.
std::string render_state_set(const StateSet &s);

/// Follows `path` (party, outcome label) down the protocol for every member
/// and draws one band per occupied ancilla image |xy>_ab, using the first
/// entangled pair. Rows with no support in a band are omitted.
std::string render_images(const StateSet &s, const Protocol &p,
                          const std::vector<std::pair<std::string, std::string>> &path);

}  // namespace upb

#endif  // UPB_RENDER_HPP
