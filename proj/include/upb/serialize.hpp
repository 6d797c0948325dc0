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

#ifndef UPB_SERIALIZE_HPP
#define UPB_SERIALIZE_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "upb/catalog.hpp"
#include "upb/locc.hpp"
#include "upb/sep.hpp"
#include "upb/verify.hpp"

namespace upb {

using Json = nlohmann::ordered_json;

inline const std::string kStateSetSchema = "upb-locc/stateset/1";
inline const std::string kTraceSchema = "upb-locc/trace/1";
inline const std::string kProtocolSchema = "upb-locc/protocol/1";

// Complex numbers are [re, im] pairs throughout.
Json vector_to_json(const Vector &v);
Vector vector_from_json(const Json &j);
Json matrix_to_json(const Matrix &m);
Matrix matrix_from_json(const Json &j);

Json layout_to_json(const SystemLayout &layout);
SystemLayout layout_from_json(const Json &j);

Json to_json(const StateSet &s);
/// Parses without the orthogonality checks, so corrupted files can be
/// loaded and then verified.
StateSet state_set_from_json(const Json &j);

Json to_json(const Protocol &p);
Protocol protocol_from_json(const Json &j);

/// {schema, input, branches: [{path, p, leaf, pruned}]}
Json trace_to_json(const std::string &input, const std::vector<BranchTrace> &branches);

Json to_json(const OrthogonalityReport &r);
Json to_json(const UnextendibleReport &r);
Json to_json(const DiscriminationReport &r);
Json to_json(const SepMeasurement &m);
Json to_json(const SepReport &r);

/// Two-space indented text with a trailing newline.
std::string dump(const Json &j);

}  // namespace upb

#endif  // UPB_SERIALIZE_HPP
