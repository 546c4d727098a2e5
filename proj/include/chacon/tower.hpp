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

// The Chacon map: stage-k tower layout, evaluation of T and T^-1 on triadic
// points, and the induced dynamics on A_k written in ternary digits.
//
// Stage 0 is the single level [0,2/3) over the spacer reservoir [2/3,1). Stage
// k cuts every stage-(k-1) level in thirds and stacks left column, middle
// column, one fresh spacer piece, right column.

#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "chacon/triadic.hpp"

namespace chacon {

inline constexpr unsigned kDefaultDepthCap = 64;

struct TowerParams {
  unsigned k = 0;
  mpz_class height;          // h_k = (3^{k+1} - 1) / 2
  Triadic cell_width;        // 2 / 3^{k+1}
  TriadicInterval spacer_remainder;  // [1 - 3^{-(k+1)}, 1)
};

TowerParams tower_params(unsigned k);
mpz_class tower_height(unsigned k);
// h_k as a machine integer; throws ResourceCapError when it does not fit.
std::int64_t tower_height_i64(unsigned k);

struct TowerAddress {
  unsigned stage = 0;
  bool in_spacer_remainder = false;
  mpz_class level;  // meaningless when in_spacer_remainder
  Triadic offset;   // distance from the left end of the level / remainder

  std::string str() const;
};

// Throws InputError when j is outside [0, h_k).
TriadicInterval level_interval(unsigned k, const mpz_class& j);
TowerAddress locate(const TriadicRational& x, unsigned k);

// T moves x one level up at the first stage where x is below the top level.
// Throws DepthExceededError if no stage <= depth_cap qualifies.
TriadicRational apply_T(const TriadicRational& x, unsigned depth_cap = kDefaultDepthCap);
TriadicRational apply_T_inverse(const TriadicRational& x, unsigned depth_cap = kDefaultDepthCap);
// Throws InputError when |n| > limit.
TriadicRational apply_T_power(const TriadicRational& x, long long n, unsigned long long limit = 1'000'000,
                              unsigned depth_cap = kDefaultDepthCap);

// The point of A_k whose rescaled coordinate is w, i.e. w * 2/3^{k+1}.
TriadicRational point_of_word(const TernaryWord& w, unsigned k);

// Symbolic dynamics on A_k rescaled to [0,1).
mpz_class first_return(const TernaryWord& w, unsigned k);
TernaryWord induced_map(const TernaryWord& w);
// t_l' by the digit recursion on (3l + j, leading digit).
mpz_class lth_return_time(const TernaryWord& w, std::uint64_t l, unsigned k);
// t_l' as the sum of first returns along the induced orbit.
mpz_class lth_return_time_orbit(const TernaryWord& w, std::uint64_t l, unsigned k);

}  // namespace chacon
