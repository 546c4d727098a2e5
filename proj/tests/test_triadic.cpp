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
#include "chacon/triadic.hpp"

using namespace chacon;

namespace {
Triadic T(const char* s) { return Triadic::parse(s); }
TriadicSet I(const char* a, const char* b) { return TriadicSet::interval(T(a), T(b)); }
}  // namespace

TEST_SUITE("triadic") {
  TEST_CASE("normalize cancels factors of three") {
    auto x = normalize(3, 2);
    CHECK(x.numerator() == 1);
    CHECK(x.exponent() == 1);
    auto z = normalize(0, 3);
    CHECK(z.numerator() == 0);
    CHECK(z.exponent() == 0);
    CHECK(normalize(5, 2).str() == "5/3^2");
    CHECK_THROWS_AS(normalize(9, 2), DomainError);
  }

  TEST_CASE("parse forms agree") {
    CHECK(T("1/3") == T("3/9"));
    CHECK(T("0.1") == T("1/3"));
    CHECK(T("0.12") == T("5/9"));
    CHECK(T("2") == Triadic::integer(2));
    CHECK_THROWS_AS(T("1/2"), InputError);
    CHECK_THROWS_AS(T("abc"), InputError);
  }

  TEST_CASE("translate") {
    CHECK(translate(TriadicRational(T("1/3")), T("4/9")).value() == T("7/9"));
    auto x = TriadicRational(T("5/27"));
    CHECK(translate(x, Triadic()) == x);
    CHECK(translate(TriadicRational(T("2/9")), T("-2/9")).value() == Triadic());
    CHECK_THROWS_AS(translate(TriadicRational(T("8/9")), T("1/9")), DomainError);
  }

  TEST_CASE("set algebra") {
    CHECK((I("0", "2/3") & I("1/3", "1")) == I("1/3", "2/3"));
    auto a = I("0", "2/9") | I("2/3", "8/9");
    CHECK((a ^ a).empty());
    CHECK((a & I("0", "1/3")) == I("0", "2/9"));
    CHECK((I("0", "1") - I("1/3", "2/3")) == (I("0", "1/3") | I("2/3", "1")));
    CHECK((I("0", "1/3") | I("1/3", "2/3")).intervals().size() == 1);
  }

  TEST_CASE("set algebra against cell membership at resolution 3^-4") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> cell(0, 81);
    for (int trial = 0; trial < 50; ++trial) {
      auto rnd = [&] {
        std::vector<TriadicInterval> iv;
        for (int i = 0; i < 3; ++i) {
          int x = cell(rng), y = cell(rng);
          if (x == y) continue;
          iv.emplace_back(Triadic(std::min(x, y), 4), Triadic(std::max(x, y), 4));
        }
        return TriadicSet(iv);
      };
      TriadicSet a = rnd(), b = rnd();
      auto u = a | b, n = a & b, d = a - b, s = a ^ b;
      for (int c = 0; c < 81; ++c) {
        Triadic x(3 * c + 1, 5);  // inside cell c
        bool ia = a.contains(x), ib = b.contains(x);
        CHECK(u.contains(x) == (ia || ib));
        CHECK(n.contains(x) == (ia && ib));
        CHECK(d.contains(x) == (ia && !ib));
        CHECK(s.contains(x) == (ia != ib));
      }
    }
  }

  TEST_CASE("measure") {
    CHECK(measure(I("0", "2/9")) == T("2/9"));
    CHECK(measure(TriadicSet()) == Triadic());
    CHECK(measure(I("0", "2/9") | I("8/9", "1")) == T("1/3"));
  }

  TEST_CASE("refine_to_level") {
    CHECK(refine_to_level(I("0", "2/9"), 2) == std::vector<std::uint64_t>{0, 1});
    CHECK(refine_to_level(I("1/3", "2/3"), 1) == std::vector<std::uint64_t>{1});
    CHECK(refine_to_level(I("2/9", "1/3"), 3) == std::vector<std::uint64_t>{6, 7, 8});
    CHECK_THROWS_AS(refine_to_level(I("0", "1/27"), 2), RefinementError);
  }

  TEST_CASE("ternary words round trip") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> digit(0, 2), len(1, 40);
    for (int i = 0; i < 500; ++i) {
      std::vector<std::uint8_t> d(static_cast<std::size_t>(len(rng)));
      for (auto& x : d) x = static_cast<std::uint8_t>(digit(rng));
      TernaryWord w = TernaryWord(d).canonical();
      if (std::all_of(d.begin(), d.end(), [](auto x) { return x == 2; })) continue;
      CHECK(TernaryWord::from_rational(w.to_rational()) == w);
    }
    CHECK(TernaryWord::parse("0.12").to_rational().value() == T("5/9"));
    CHECK(TernaryWord::parse("120").canonical().digit_string() == "12");
  }
}
