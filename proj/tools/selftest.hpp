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

#ifndef UPB_TOOLS_SELFTEST_HPP
#define UPB_TOOLS_SELFTEST_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace upb::cli {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Evaluates the eleven acceptance criteria. The long tier adds GenTiles1
/// with m = 8.
std::vector<CriterionResult> run_acceptance(bool long_tier);

/// Prints one PASS/FAIL line per criterion; returns 0 iff all pass.
int run_selftest(bool long_tier, std::ostream &out);

}  // namespace upb::cli

#endif  // UPB_TOOLS_SELFTEST_HPP
