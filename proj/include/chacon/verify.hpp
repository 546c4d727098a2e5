// Copyright 2026 The chacon-lab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Property suites over the whole library. Each suite is a list of named
// checks; the report is deterministic given (suite, seed).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace chacon::verify {

struct Check {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;
  bool pass = true;
  std::string json;  // pretty-printed, trailing newline
};

// table, transform, oracle, shape, ternary, counting, pn, constants,
// majorization, convergence, upper, lower, extractor
const std::vector<std::string>& suite_names();

// `suite` is one name from suite_names() or "all". Throws InputError on an
// unknown name.
Report run(const std::string& suite, std::uint64_t seed);

}  // namespace chacon::verify
