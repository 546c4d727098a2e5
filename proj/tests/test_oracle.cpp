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
#include "chacon/error.hpp"
#include "chacon/oracle.hpp"
#include "chacon/profile.hpp"

using namespace chacon;
using namespace chacon::oracle;

TEST_SUITE("oracle") {
  TEST_CASE("stacking tables are permutations of the even cells") {
    for (unsigned K = 0; K <= 7; ++K) {
      const auto& t = StackingTable::stage(K);
      std::vector<bool> seen(static_cast<std::size_t>(t.height()));
      for (std::int64_t j = 0; j < t.height(); ++j) {
        std::int64_t c = t.start(j) / 2;
        CHECK(t.start(j) % 2 == 0);
        CHECK(t.level_of_cell(c) == j);
        seen[static_cast<std::size_t>(c)] = true;
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    }
    CHECK_THROWS_AS(StackingTable::stage(kMaxTableStage + 1), ResourceCapError);
  }

  TEST_CASE("brute correlation") {
    auto a1 = base_set(1);
    CHECK(brute_correlation(a1, a1, 0) == mpq_class(2, 9));
    CHECK(brute_correlation(a1, a1, 4) == mpq_class(1, 9));
    CHECK(brute_correlation(a1, a1, 1) == 0);
    CHECK(cell_set(1, 1) == TriadicSet::interval(Triadic(2, 2), Triadic(4, 2)));
  }

  TEST_CASE("pushforward keeps measure and disjointness") {
    auto st = PushforwardState::start(TriadicSet::interval(Triadic(), Triadic(1, 1)), 8);
    for (int s = 0; s < 40; ++s) {
      st = pushforward_step(st);
      Triadic total(mpz_class(static_cast<long>(st.image_measure() + st.residual)), st.resolution);
      CHECK(total == Triadic(1, 1));
      if (st.residual == 0) CHECK(measure(st.image()) == Triadic(1, 1));
    }
  }

  TEST_CASE("brute d_l'") {
    auto d1 = brute_dl(1, 1, 4);
    CHECK(d1.support_start == 4);
    CHECK(d1.masses == std::vector<mpq_class>{mpq_class(1, 2), mpq_class(1, 2)});
    auto d0 = brute_dl(1, 0, 1);
    CHECK(d0.masses == std::vector<mpq_class>{1});
    auto d4 = brute_dl(1, 4, 8);
    CHECK(d4.support_start == 17);
    CHECK(d4.masses == std::vector<mpq_class>{mpq_class(2, 9), mpq_class(5, 9), mpq_class(2, 9)});
    CHECK(brute_dl(3, 100, 2) == brute_dl(3, 100, 6));
    CHECK_THROWS_AS(brute_dl(1, 1, 13), ResourceCapError);
  }

  TEST_CASE("phi polynomials") {
    CHECK(phi_repr(0) == PhiPolynomial{{1}});
    CHECK(phi_repr(1) == PhiPolynomial{{0, 1}});
    CHECK(phi_repr(2) == PhiPolynomial{{mpq_class(1, 3), 0, mpq_class(2, 3)}});
    CHECK_FALSE(precedes(phi_repr(1), phi_repr(2)));  // incomparable
    CHECK_FALSE(precedes(phi_repr(2), phi_repr(1)));
    CHECK(precedes(lazy_polynomial(1), PhiPolynomial{{1}}));
    CHECK(lazy_polynomial(0) == PhiPolynomial{{1}});
    CHECK(lazy_polynomial(1) == PhiPolynomial{{mpq_class(2, 3), mpq_class(1, 3)}});
    for (std::uint64_t l = 0; l < 100; ++l) {
      CHECK(phi_repr(l).coefficient_sum() == 1);
      CHECK(phi_apply(phi_repr(l)) == profile_D(l));
    }
  }

  TEST_CASE("lazy walk") {
    CHECK(lazy_walk(0) == std::vector<mpq_class>{1});
    CHECK(lazy_walk(1)[1] == mpq_class(2, 3));
    for (std::uint64_t n = 0; n < 20; ++n) {
      auto w = lazy_walk(n);
      mpq_class s = 0;
      for (const auto& x : w) s += x;
      CHECK(s == 1);
      CHECK(w.size() == 2 * n + 1);
    }
  }
}
