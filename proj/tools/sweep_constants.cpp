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

// Oracle sweep for the frozen constants. Prints the values to paste into
// src/frozen_constants.cpp.

#include <cmath>
#include <cstdio>

#include "chacon/frozen_constants.hpp"

int main() {
  using namespace chacon;
  const mpq_class headroom(11, 10);
  SweepResult r = sweep_profile_constants(243, 4);
  double cs = sweep_count_constant();
  double c_star = std::max(1.0, std::ceil(cs * 1.1 * 1e4) / 1e4);
  std::printf("C1       %s   (max H^2 b = %s at l=%llu)\n", freeze_sqrt(r.max_C1_sq, headroom).get_str().c_str(),
              r.max_C1_sq.get_str().c_str(), static_cast<unsigned long long>(r.argmax_C1));
  std::printf("C2       %s   (max |dD|^2 b = %s at l=%llu)\n", freeze_sqrt(r.max_C2_sq, headroom).get_str().c_str(),
              r.max_C2_sq.get_str().c_str(), static_cast<unsigned long long>(r.argmax_C2));
  std::printf("C3       %s   (max w^2 b / p^2 = %s at l=%llu)\n", freeze_sqrt(r.max_C3_sq, headroom).get_str().c_str(),
              r.max_C3_sq.get_str().c_str(), static_cast<unsigned long long>(r.argmax_C3));
  std::printf("C_star   %.4f (max ratio %.17g)\n", c_star, cs);
  return 0;
}
