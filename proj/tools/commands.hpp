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

#ifndef UPB_TOOLS_COMMANDS_HPP
#define UPB_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "upb/tensor.hpp"

namespace upb::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

using Params = std::map<std::string, std::vector<std::int64_t>>;

struct Context {
    std::ostream &out;
    std::ostream &err;
    Tolerance tol;
};

/// Tolerances from the environment (LOCC_TOL overrides the comparison one).
Tolerance tolerance_from_env();

int cmd_build(const std::string &family, const Params &params, const std::string &output, Context &ctx);
int cmd_verify(const std::string &path, bool unextendible, bool long_tier, Context &ctx);

struct RunArgs {
    std::string family;
    Params params;
    /// Squared Schmidt coefficients replacing the first entangled pair.
    std::optional<std::vector<double>> resource;
    std::string trace_path;
    std::optional<std::size_t> max_depth;
    bool long_tier = false;
};
int cmd_run(const RunArgs &args, Context &ctx);

int cmd_sep(const std::string &family, const Params &params, const std::string &removed, Context &ctx);
/// Renders a state-set file, or the image view of a trace file after its
/// first `steps` measurements.
int cmd_render(const std::string &path, std::size_t steps, Context &ctx);

/// Parses argv and dispatches. Returns the process exit code.
int run_cli(int argc, char **argv, std::ostream &out, std::ostream &err);

}  // namespace upb::cli

#endif  // UPB_TOOLS_COMMANDS_HPP
