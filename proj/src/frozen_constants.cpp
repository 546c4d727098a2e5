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

#include "chacon/frozen_constants.hpp"

#include <cmath>

#include "chacon/correlation.hpp"
#include "chacon/exceptional.hpp"
#include "chacon/profile.hpp"

namespace chacon {

namespace {
mpq_class ratio(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}
}  // namespace

const FrozenConstants& frozen_constants() {
  // Output of `sweep_constants` (l < 243, p <= 4, headroom 11/10).
  static const FrozenConstants kFrozen{
      .C1 = ratio(12754, 10000),
      .C2 = ratio(14667, 10000),
      .C3 = ratio(45095, 10000),
      .C_star = mpq_class(1),
      .headroom = mpq_class(11, 10),
      .sweep_l_end = 243,
      .sweep_p_max = 4,
      .sweep_date = "2026-10-15",
      .max_C1_sq = mpq_class(980, 729),
      .max_C2_sq = mpq_class(16, 9),
      .max_C3_sq = mpq_class(605, 36),
      .max_C_star = 0.0,
  };
  return kFrozen;
}

SweepResult sweep_profile_constants(std::uint64_t l_end, unsigned p_max) {
  SweepResult r;
  for (std::uint64_t l = 0; l < l_end; ++l) {
    const mpq_class b(mpz_class(static_cast<unsigned long>(compute_bl(l))));
    HalfGridFunction d = profile_D(l);
    mpq_class h = d.at(0);
    mpq_class v1 = h * h * b;
    if (v1 > r.max_C1_sq) r.max_C1_sq = v1, r.argmax_C1 = l;
    mpq_class diff = l1_distance(profile_D(l + 1), d);
    mpq_class v2 = diff * diff * b;
    if (v2 > r.max_C2_sq) r.max_C2_sq = v2, r.argmax_C2 = l;
    for (unsigned p = 1; p <= p_max; ++p) {
      mpq_class w = envelope_width(l, p);
      mpq_class v3 = w * w * b / (p * p);
      if (v3 > r.max_C3_sq) r.max_C3_sq = v3, r.argmax_C3 = l;
    }
  }
  return r;
}

std::vector<std::int64_t> count_grid() {
  std::vector<std::int64_t> g;
  for (std::int64_t n = 243; n <= 531441; n *= 3) g.push_back(n);
  return g;
}

double sweep_count_constant() {
  double best = 0.0;
  for (const HFunction& h : {HFunction::linear(), HFunction::log()}) {
    WindowedSet j = build_J(2, h, 10);
    BoundSpec unit{BoundSpec::Form::kUpperTimesH, 1.0, 0.0, h, "sweep"};
    for (auto n : count_grid()) {
      BoundValue v = eval_bound(unit, static_cast<double>(n));
      if (v.overflow) continue;
      best = std::max(best, static_cast<double>(j.set.count(n)) / v.value);
    }
  }
  return best;
}

mpq_class freeze_sqrt(const mpq_class& sq, const mpq_class& headroom) {
  // ceil(10^4 * headroom * sqrt(sq)) / 10^4 via integer square roots.
  mpq_class target = sq * headroom * headroom * 100000000;  // (10^4)^2
  mpz_class m = sqrt(mpz_class(target.get_num() / target.get_den()));
  while (mpq_class(m * m) < target) ++m;
  mpq_class out(m, 10000);
  out.canonicalize();
  return out;
}

}  // namespace chacon
