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

// Centered profiles D_l as step functions on the half-integer lattice.
//
// Half-cell c is [c/2, (c+1)/2). D_l has b_l unit steps and lives on
// half-cells -b_l .. b_l - 1; mass i of d_l' covers half-cells -b_l+2i and
// -b_l+2i+1. Shifting by 1/2 moves a function one half-cell.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace chacon {

class HalfGridFunction {
 public:
  HalfGridFunction() = default;
  HalfGridFunction(std::int64_t first_cell, std::vector<mpq_class> values);

  std::int64_t first_cell() const noexcept { return lo_; }
  std::int64_t end_cell() const noexcept { return lo_ + static_cast<std::int64_t>(v_.size()); }
  const std::vector<mpq_class>& values() const noexcept { return v_; }
  mpq_class at(std::int64_t cell) const;

  // f(x - halves/2)
  HalfGridFunction shifted(std::int64_t halves) const;
  // integral over R: (1/2) * sum of cell values
  mpq_class integral() const;
  // Leading/trailing zero cells dropped.
  HalfGridFunction trimmed() const;

  friend bool operator==(const HalfGridFunction& a, const HalfGridFunction& b);

 private:
  std::int64_t lo_ = 0;
  std::vector<mpq_class> v_;
};

// (1/2) * sum |f - g| over half-cells.
mpq_class l1_distance(const HalfGridFunction& f, const HalfGridFunction& g);
HalfGridFunction pointwise_max(const std::vector<HalfGridFunction>& fs);
HalfGridFunction pointwise_min(const std::vector<HalfGridFunction>& fs);

// D_l from the memoized mass pattern.
HalfGridFunction profile_D(std::uint64_t l);
// D_l from the profile recursion D_{3l} = D_l,
// D_{3l+1} = (D_{l+1} + D_l(.-1/2) + D_l(.+1/2))/3,
// D_{3l+2} = (D_l + D_{l+1}(.-1/2) + D_{l+1}(.+1/2))/3. Independent route.
HalfGridFunction profile_D_by_recursion(std::uint64_t l);

// H_l = D_l(0), the central value (also the maximum).
mpq_class profile_peak(std::uint64_t l);

// max_{0<=j<=2, |i|<=p} D_{l+j}(. - i/2) minus the matching min, in L1.
mpq_class envelope_width(std::uint64_t l, unsigned p);

}  // namespace chacon
