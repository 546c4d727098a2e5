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

// Empirical constants for the profile bounds and the J count bound. The
// values are produced by tools/sweep_constants and pasted into
// frozen_constants.cpp; tests re-run the sweep and compare.
//
//   C1:  H_l sqrt(b_l)                      <= C1
//   C2:  |D_{l+1} - D_l|_1 sqrt(b_l)        <= C2
//   C3:  envelope_width(l, p) sqrt(b_l)     <= C3 p       (1 <= p <= p_max)
//   C*:  |J & [0,n]| <= C* h(n) (ln n)^{(ln ln n)^2 h(n)}

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace chacon {

struct FrozenConstants {
  mpq_class C1, C2, C3, C_star;
  mpq_class headroom;           // multiplier over the sweep maximum
  std::uint64_t sweep_l_end;    // sweep covers l < sweep_l_end
  unsigned sweep_p_max;
  std::string sweep_date;
  // Sweep maxima as attained (C1..C3 as squares, exact).
  mpq_class max_C1_sq, max_C2_sq, max_C3_sq;
  double max_C_star;
};

const FrozenConstants& frozen_constants();

struct SweepResult {
  mpq_class max_C1_sq, max_C2_sq, max_C3_sq;
  std::uint64_t argmax_C1 = 0, argmax_C2 = 0, argmax_C3 = 0;
  double max_C_star = 0.0;
};

// C1..C3 over l < l_end; C3 also over 1 <= p <= p_max.
SweepResult sweep_profile_constants(std::uint64_t l_end, unsigned p_max);
// count / (h(n) (ln n)^{(ln ln n)^2 h(n)}) over h in {linear, log}, k_max = 2,
// N_max = 10, n in {3^5, ..., 3^12}.
double sweep_count_constant();
std::vector<std::int64_t> count_grid();

// Smallest value of the form m / 10^4 that is >= headroom * sqrt(sq).
mpq_class freeze_sqrt(const mpq_class& sq, const mpq_class& headroom);

}  // namespace chacon
