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

#include <random>

#include "chacon/error.hpp"
#include "chacon/oracle.hpp"
#include "chacon/tower.hpp"

using namespace chacon;

namespace {
Triadic T(const char* s) { return Triadic::parse(s); }
TriadicRational P(const char* s) { return TriadicRational(Triadic::parse(s)); }
TernaryWord W(const char* s) { return TernaryWord::parse(s); }
}  // namespace

TEST_SUITE("tower") {
  TEST_CASE("tower parameters") {
    auto p0 = tower_params(0);
    CHECK(p0.height == 1);
    CHECK(p0.cell_width == T("2/3"));
    auto p1 = tower_params(1);
    CHECK(p1.height == 4);
    CHECK(p1.cell_width == T("2/9"));
    CHECK(tower_height(2) == 13);
    CHECK(tower_height_i64(5) == 364);
  }

  TEST_CASE("level intervals") {
    CHECK(level_interval(1, 0) == TriadicInterval(T("0"), T("2/9")));
    CHECK(level_interval(1, 2) == TriadicInterval(T("2/3"), T("8/9")));
    CHECK(level_interval(2, 8) == TriadicInterval(T("8/9"), T("26/27")));
    CHECK_THROWS_AS(level_interval(1, 4), InputError);
  }

  TEST_CASE("level intervals match the stacking tables") {
    for (unsigned k = 1; k <= 6; ++k) {
      const auto& tab = oracle::StackingTable::stage(k);
      for (std::int64_t j = 0; j < tab.height(); j += 1 + tab.height() / 50) {
        auto iv = level_interval(k, j);
        CHECK(iv.lo == Triadic(tab.start(j), k + 1));
        CHECK(iv.length() == Triadic(2, k + 1));
      }
    }
  }

  TEST_CASE("locate") {
    auto a = locate(P("1/3"), 1);
    CHECK(a.level == 1);
    CHECK(a.offset == T("1/9"));
    auto z = locate(P("0"), 3);
    CHECK(z.level == 0);
    CHECK(z.offset == Triadic());
    auto r = locate(P("25/27"), 1);
    CHECK(r.in_spacer_remainder);
    CHECK(r.offset == T("1/27"));
  }

  TEST_CASE("apply T") {
    CHECK(apply_T(P("1/3")).value() == T("7/9"));
    CHECK(apply_T(P("0")).value() == T("2/9"));
    // the stage-2 spacer [8/9, 26/27) sits below the right third of the
    // stage-1 bottom level, [4/27, 6/27)
    CHECK(apply_T(P("8/9")).value() == T("4/27"));
    CHECK(apply_T_inverse(P("4/27")).value() == T("8/9"));
    CHECK(apply_T_power(P("1/3"), 1).value() == T("7/9"));
    CHECK(apply_T_power(P("5/81"), 0).value() == T("5/81"));
    CHECK(apply_T_power(P("0"), 4).value() == T("2/27"));
    CHECK(apply_T_power(P("2/27"), -4).value() == T("0"));
  }

  TEST_CASE("T^n agrees with the pushforward oracle") {
    // push the stage-3 cell containing x forward and check x's image
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> num(0, 3 * 3 * 3 * 3 * 3 * 3 - 1);
    for (int i = 0; i < 20; ++i) {
      TriadicRational x = normalize(num(rng), 6);
      Triadic lo = x.value();
      TriadicSet cell = TriadicSet::interval(lo, lo + Triadic(1, 9));
      auto st = oracle::PushforwardState::start(cell, 12);
      TriadicRational y = x;
      for (int s = 0; s < 12; ++s) {
        st = oracle::pushforward_step(st);
        y = apply_T(y);
        if (st.residual == 0) CHECK(st.image().contains(y.value()));
      }
    }
  }

  TEST_CASE("bijectivity on random points") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10000; ++i) {
      unsigned m = 1 + static_cast<unsigned>(rng() % 20);
      mpz_class bound;
      mpz_ui_pow_ui(bound.get_mpz_t(), 3, m);
      mpz_class n = mpz_class(static_cast<unsigned long>(rng())) % bound;
      auto x = normalize(n, m);
      REQUIRE(apply_T_inverse(apply_T(x)) == x);
    }
  }

  TEST_CASE("first return and induced map") {
    CHECK(first_return(W("0"), 1) == 4);
    CHECK(first_return(W("1"), 1) == 5);
    CHECK(first_return(W("21"), 2) == 14);
    CHECK(induced_map(W("0201")) == W("1201"));
    CHECK(induced_map(W("1")) == W("2"));
    CHECK(induced_map(W("21")) == W("02"));
  }

  TEST_CASE("l-th return time") {
    CHECK(lth_return_time(W("0212"), 0, 1) == 0);
    CHECK(lth_return_time(W("0"), 1, 2) == 13);
    CHECK(lth_return_time(W("00"), 3, 1) == 13);
    CHECK(lth_return_time(W("00"), 3, 2) == 40);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
      std::vector<std::uint8_t> d(10);
      for (auto& x : d) x = static_cast<std::uint8_t>(rng() % 3);
      d[9] = 0;
      std::uint64_t l = rng() % 30;
      try {
        CHECK(lth_return_time(TernaryWord(d), l, 1) == lth_return_time_orbit(TernaryWord(d), l, 1));
      } catch (const DepthExceededError&) {
      }
    }
  }

  TEST_CASE("word points sit in A_k") {
    auto x = point_of_word(W("12"), 1);
    CHECK(x.value() == Triadic(10, 4));  // (5/9) * (2/9)
  }
}
