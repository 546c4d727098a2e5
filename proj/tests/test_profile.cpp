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


#include <doctest.h>

#include "chacon/correlation.hpp"
#include "chacon/frozen_constants.hpp"
#include "chacon/oracle.hpp"
#include "chacon/profile.hpp"

using namespace chacon;

TEST_SUITE("profile") {
  TEST_CASE("D_0 and D_2") {
    auto d0 = profile_D(0);
    CHECK(d0 == HalfGridFunction(-1, {1, 1}));
    CHECK(d0.integral() == 1);
    auto d2 = profile_D(2);
    CHECK(profile_peak(2) == mpq_class(2, 3));
    CHECK(d2.at(-3) == mpq_class(1, 6));
    CHECK(d2.at(2) == mpq_class(1, 6));
    CHECK(d2.at(3) == 0);
  }

  TEST_CASE("profiles are even, of unit integral, and agree with the D recursion") {
    for (std::uint64_t l = 0; l < 400; ++l) {
      auto d = profile_D(l);
      CHECK(d.integral() == 1);
      CHECK(d.first_cell() == -d.end_cell());
      CHECK(d == profile_D_by_recursion(l));
    }
  }

  TEST_CASE("shifts and distances") {
    auto d0 = profile_D(0);
    CHECK(l1_distance(d0, d0.shifted(1)) == 1);
    CHECK(l1_distance(d0, d0.shifted(2)) == 2);
    CHECK(l1_distance(profile_D(1), profile_D(0)) == 1);
    auto mx = pointwise_max({d0, d0.shifted(1)});
    auto mn = pointwise_min({d0, d0.shifted(1)});
    CHECK(mx == HalfGridFunction(-1, {1, 1, 1}));
    CHECK(mn == HalfGridFunction(0, {1}));
    CHECK(envelope_width(0, 0) == mpq_class(7, 6));  // D_0 .. D_2 without shifts
  }

  TEST_CASE("frozen constants reproduce from the sweep") {
    const auto& fc = frozen_constants();
    SweepResult r = sweep_profile_constants(fc.sweep_l_end, fc.sweep_p_max);
    CHECK(r.max_C1_sq == fc.max_C1_sq);
    CHECK(r.max_C2_sq == fc.max_C2_sq);
    CHECK(r.max_C3_sq == fc.max_C3_sq);
    CHECK(freeze_sqrt(r.max_C1_sq, fc.headroom) == fc.C1);
    CHECK(freeze_sqrt(r.max_C2_sq, fc.headroom) == fc.C2);
    CHECK(freeze_sqrt(r.max_C3_sq, fc.headroom) == fc.C3);
    CHECK(fc.C_star >= 1);
    CHECK(sweep_count_constant() * 1.1 <= fc.C_star.get_d());
  }

  TEST_CASE("freeze_sqrt rounds up") {
    CHECK(freeze_sqrt(mpq_class(1), mpq_class(1)) == 1);
    CHECK(freeze_sqrt(mpq_class(4), mpq_class(11, 10)) == mpq_class(11, 5));
    mpq_class c = freeze_sqrt(mpq_class(2), mpq_class(1));
    CHECK(c * c >= 2);
    CHECK((c - mpq_class(1, 10000)) * (c - mpq_class(1, 10000)) < 2);
  }
}
