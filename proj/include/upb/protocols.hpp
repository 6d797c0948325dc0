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

#ifndef UPB_PROTOCOLS_HPP
#define UPB_PROTOCOLS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "upb/catalog.hpp"
#include "upb/locc.hpp"

namespace upb {

// Every builder returns a tree whose leaves carry member labels of the set it
// was built for. Leaves are assigned by simulating each member through the
// tree while it is assembled; sub-problems the explicit steps leave open are
// closed by a small search over local refinements (one party isolating
// product states, splitting by reduced supports, or a Fourier measurement of
// an entangled ancilla). Builders throw std::logic_error if that search fails.

/// Bob slides his last row with a 2x2 MES; Alice and Bob then finish in at
/// most four measurements. `target` may be tiles() or nlwe_of(tiles()).
Protocol tiles_protocol();
Protocol tiles_protocol(const StateSet &target);

/// Permutes members so the orthogonality graphs are the 5-cycle on A
/// (j ~ j±1) and the pentagram on B (j ~ j±2). Throws
/// "not a 3⊗3 UPB presentation" otherwise.
StateSet canonicalize_3x3(const StateSet &s, double tol = 1e-9);
/// The permutation `canonicalize_3x3` applies (new j = old perm[j]).
std::vector<std::size_t> canonical_permutation_3x3(const StateSet &s, double tol = 1e-9);
Protocol upb3x3_protocol(const StateSet &canonical);

Protocol gentiles1_protocol(int m);
Protocol gentiles1_protocol(const StateSet &target);

Protocol gentiles2_protocol(int m, int n);
Protocol gentiles2_protocol(const StateSet &target);

/// MES between parties `p1` and `p2` (0-based). With `full_basis` the other
/// parties measure in the standard basis explicitly before the last steps,
/// as needed when the set is the complete product basis.
Protocol niset_cerf_protocol(const StateSet &target, std::size_t p1 = 0, std::size_t p2 = 1,
                             bool full_basis = false);

Protocol tiles_squared_protocol(const StateSet &target);

/// Protocol for the complete product basis derived from a family.
/// family in {tiles, gentiles1, gentiles2, niset_cerf, tiles_squared}.
Protocol nlwe_protocol(const std::string &family,
                       const std::map<std::string, std::vector<std::int64_t>> &params = {});

/// Runs p1 on the first copy, then p2 on the second. Factors are suffixed
/// "1"/"2"; leaves become "l1*l2". Resource: both pairs.
Protocol tensor_protocol(const Protocol &p1, const Protocol &p2);

/// The shipped protocol for a built set (dispatches on the family name).
Protocol shipped_protocol(const StateSet &s);

}  // namespace upb

#endif  // UPB_PROTOCOLS_HPP
