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

// Prints one PASS/FAIL line per acceptance criterion. Pass --long for the
// long tier.

#include <cstring>
#include <iostream>

#include "selftest.hpp"

int main(int argc, char **argv) {
    bool long_tier = argc > 1 && std::strcmp(argv[1], "--long") == 0;
    return upb::cli::run_selftest(long_tier, std::cout);
}
