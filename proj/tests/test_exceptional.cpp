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

#include <cmath>

#include "chacon/correlation.hpp"
#include "chacon/error.hpp"
#include "chacon/exceptional.hpp"
#include "chacon/tower.hpp"

using namespace chacon;

TEST_SUITE("exceptional") {
  TEST_CASE("integer interval sets") {
    IntegerIntervalSet s({{5, 7}, {1, 2}, {3, 3}, {10, 9}, {20, 25}});
    CHECK(s.intervals() == std::vector<IntegerIntervalSet::Interval>{{1, 3}, {5, 7}, {20, 25}});
    CHECK(s.count(0) == 0);
    CHECK(s.count(4) == 3);
    CHECK(s.count(22) == 9);
    CHECK(s.size() == 12);
    CHECK(s.contains(20));
    CHECK_FALSE(s.contains(8));
    CHECK(s.clip(6, 21) == IntegerIntervalSet({{6, 7}, {20, 21}}));
    CHECK(s.fattened(6) == IntegerIntervalSet({{-5, 31}}));
    CHECK(s.elements(6, 21) == std::vector<std::int64_t>{6, 7, 20, 21});
    CHECK(s.str() == "[1, 3] u [5, 7] u [20, 25]");
    CHECK(IntegerIntervalSet({{1, 2}, {3, 4}}).intervals().size() == 1);
  }

  TEST_CASE("h functions") {
    CHECK(HFunction::linear()(5) == 5);
    CHECK(HFunction::log()(std::exp(2.0) - 1) == doctest::Approx(2.0));
    CHECK(HFunction::parse("power:0.5")(16) == doctest::Approx(4.0));
    CHECK(HFunction::parse("loglog").family() == HFunction::Family::kLogLog);
    CHECK_THROWS_AS(HFunction::parse("cubic"), InputError);
    CHECK_THROWS_AS(HFunction::parse("power:-1"), InputError);
    auto t = HFunction::table({{0, 0}, {10, 5}});
    CHECK(t(4) == doctest::Approx(2.0));
    CHECK(t(20) == doctest::Approx(10.0));
    CHECK(HFunction::linear().inverse_ceil(81) == 81);
    CHECK(HFunction::linear().inverse_ceil(80.5) == 81);
    CHECK(HFunction::log().inverse_ceil(1e6) == std::nullopt);
    // monotone and divergent on a doubling grid
    for (const auto& h : {HFunction::linear(), HFunction::log(), HFunction::loglog(), HFunction::power(0.3)}) {
      double prev = h(1);
      for (double x = 2; x < 1e300; x *= 2) {
        CHECK(h(x) >= prev);
        prev = h(x);
      }
      CHECK(prev > h(1));
    }
  }

  TEST_CASE("J_k layers") {
    // layer N = 1 has threshold 0 and contributes nothing
    CHECK(build_Jk(1, HFunction::linear(), 1).set.empty());
    auto big = HFunction::table({{0, 100}, {1, 101}});
    auto j = build_Jk(1, big, 2);
    std::vector<IntegerIntervalSet::Interval> want;
    for (std::uint64_t t = 9; t <= 27; ++t) {
      Support sp = support(1, t);
      want.emplace_back(sp.s, sp.t);
    }
    CHECK(j.set == IntegerIntervalSet(want));
    CHECK(j.window_hi == support(1, 27).s - 1);
    CHECK_THROWS_AS(build_Jk(1, big, kMaxLayer + 1), ResourceCapError);
  }

  TEST_CASE("J and its truncation") {
    CHECK(g_cutoff(1, HFunction::linear()) == 81);
    CHECK(g_cutoff(2, HFunction::linear()) == 729);
    auto j = build_J(1, HFunction::linear(), 6);
    CHECK(j.set.count(80) == 0);
    auto j1 = build_Jk(1, HFunction::linear(), 6);
    for (auto [a, b] : j1.set.intervals()) {
      for (std::int64_t n = std::max<std::int64_t>(a, 85); n <= b && n + 4 <= j.window_hi; ++n) {
        CHECK(j.set.clip(n - 4, n + 4).size() == 9);
      }
    }
    auto jl = build_J(2, HFunction::log(), 6);
    CHECK(jl.set.empty());
    CHECK(jl.notes.size() == 2);
  }

  TEST_CASE("E_k") {
    auto e = enumerate_Ek(1, 10);
    for (std::int64_t n : {1, 2, 3, 11, 12}) CHECK(e.set.contains(n));
    CHECK_FALSE(e.set.contains(8));
    CHECK_FALSE(e.set.contains(0));
    for (std::int64_t n = 0; n <= e.window_hi; ++n) {
      CHECK(e.set.contains(n) == (autocorrelation(1, n) == 0));
    }
  }

  TEST_CASE("bound evaluation") {
    BoundSpec up{BoundSpec::Form::kUpper, 1.0, 0.0, HFunction::table({{0, 1}, {1, 1}}), "test"};
    CHECK(eval_bound(up, std::exp(std::exp(1.0))).value == doctest::Approx(std::exp(1.0)));
    BoundSpec lo{BoundSpec::Form::kLower, 1.0, 2.0, std::nullopt, "test"};
    CHECK(eval_bound(lo, std::exp(10.0)).value == doctest::Approx(100.0));
    BoundSpec lin{BoundSpec::Form::kUpper, 1.0, 0.0, HFunction::linear(), "test"};
    auto v = eval_bound(lin, 1e6);
    CHECK(v.overflow);
    CHECK(std::isinf(v.value));
    CHECK_THROWS_AS(eval_bound(lin, 2.0), InputError);
    BoundSpec pr{BoundSpec::Form::kPowerRate, 2.0, 0.5, std::nullopt, "test"};
    CHECK(eval_bound(pr, 100).value == doctest::Approx(20.0));
    BoundSpec bin{BoundSpec::Form::kBinomialLog3, 1.0, 2.0, std::nullopt, "test"};
    CHECK(eval_bound(bin, 81).value == doctest::Approx(3.0));   // binom(3, 2)
    CHECK(eval_bound(bin, 80).value == doctest::Approx(1.0));   // binom(2, 2)
    CHECK(eval_bound(bin, 26).value == 0.0);
  }

  TEST_CASE("count reports") {
    IntegerIntervalSet s({{1, 10}});
    BoundSpec lo{BoundSpec::Form::kLower, 1.0, 1.0, std::nullopt, "test"};
    auto r = verify_count(s, lo, {3, 5, 100});
    CHECK(r.pass);
    CHECK(r.rows[2].count == 10);
    BoundSpec tight{BoundSpec::Form::kPowerRate, 1.0, 0.5, std::nullopt, "test"};
    CHECK_FALSE(verify_count(s, tight, {9}).pass);  // 9 > sqrt(9)
  }

  TEST_CASE("convergence report shape") {
    auto rep = convergence_report(1, HFunction::linear(), 2, 4);
    REQUIRE(rep.size() == 3);
    CHECK(rep[0].lo == 9);
    CHECK(rep[0].hi == 27);
    for (const auto& b : rep) {
      std::uint64_t width = static_cast<std::uint64_t>(b.hi - b.lo + 1);
      CHECK(b.excluded <= width);
      CHECK(b.max_dev.has_value() == (b.excluded < width));
    }
  }

  TEST_CASE("extractor") {
    std::vector<mpq_class> zero(50, mpq_class(0));
    std::vector<mpq_class> c(50);
    for (std::size_t n = 0; n < c.size(); ++n) c[n] = mpq_class(1.0 / std::log(n + 2.0));
    auto r = extract_exceptional(zero, running_cesaro(zero), c);
    CHECK(r.J.empty());
    CHECK(r.thresholds == std::vector<std::int64_t>{0});
    CHECK_FALSE(check_extraction(zero, running_cesaro(zero), c, r));

    // a spike at 10 of height 1
    std::vector<mpq_class> a(50, mpq_class(0));
    a[10] = 1;
    auto b = running_cesaro(a);
    auto rs = extract_exceptional(a, b, c);
    CHECK_FALSE(check_extraction(a, b, c, rs));

    auto rising = c;
    rising[3] = 10;
    CHECK_THROWS_AS(extract_exceptional(a, b, rising), InputError);
    auto small_b = b;
    small_b[20] = 0;
    try {
      extract_exceptional(a, small_b, c);
      FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
      CHECK(e.witness() == 20);
    }
    CHECK_THROWS_AS(extract_exceptional(a, b, std::vector<mpq_class>(3)), InputError);
  }

  TEST_CASE("extractor contract is checked") {
    std::vector<mpq_class> a(30, mpq_class(0));
    a[5] = 1;
    auto b = running_cesaro(a);
    std::vector<mpq_class> c(30, mpq_class(1, 100));
    auto r = extract_exceptional(a, b, c);
    CHECK_FALSE(check_extraction(a, b, c, r));
    // dropping the spike from J breaks the first property
    r.J = IntegerIntervalSet();
    r.thresholds.assign(r.thresholds.size(), 0);
    CHECK(check_extraction(a, b, c, r).has_value());
  }
}
