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
#include "chacon/tower.hpp"

using namespace chacon;

namespace {
mpq_class Q(long a, long b = 1) {
  mpq_class q(a, b);
  q.canonicalize();
  return q;
}
TriadicSet I(const char* a, const char* b) { return TriadicSet::interval(Triadic::parse(a), Triadic::parse(b)); }
}  // namespace

TEST_SUITE("correlation") {
  TEST_CASE("return distributions from the table") {
    for (unsigned k = 1; k <= 4; ++k) {
      const std::int64_t h = tower_height_i64(k);
      auto d0 = compute_dl(k, 0);
      CHECK(d0.support_start == 0);
      CHECK(d0.masses == std::vector<mpq_class>{1});
      auto d2 = compute_dl(k, 2);
      CHECK(d2.support_start == 2 * h);
      CHECK(d2.masses == std::vector<mpq_class>{Q(1, 6), Q(2, 3), Q(1, 6)});
      auto d4 = compute_dl(k, 4);
      CHECK(d4.support_start == 4 * h + 1);
      CHECK(d4.masses == std::vector<mpq_class>{Q(2, 9), Q(5, 9), Q(2, 9)});
      CHECK(d4.at(4 * h + 2) == Q(5, 9));
      CHECK(d4.at(4 * h) == 0);
    }
  }

  TEST_CASE("the three routes to d_l' agree") {
    for (unsigned k = 1; k <= 2; ++k) {
      for (std::uint64_t l = 0; l <= 60; ++l) {
        auto d = compute_dl(k, l);
        CHECK(d == compute_dl_by_shifts(k, l));
        CHECK(d == oracle::brute_dl(k, l));
      }
    }
  }

  TEST_CASE("resource cap on l") {
    ResourceCaps caps;
    caps.max_l = 10;
    CHECK_THROWS_AS(compute_dl(1, 11, caps), ResourceCapError);
  }

  TEST_CASE("balanced ternary") {
    CHECK(balanced_ternary(0).digits.empty());
    CHECK(compute_bl(0) == 1);
    CHECK(balanced_ternary(2).digits == std::vector<std::int8_t>{-1, 1});
    CHECK(compute_bl(2) == 3);
    CHECK(balanced_ternary(5).digits == std::vector<std::int8_t>{-1, -1, 1});
    CHECK(balanced_ternary(5).str() == "+--");
    CHECK(compute_bl(5) == 4);
    CHECK(compute_dl(1, 5).masses.size() == 4);
  }

  TEST_CASE("supports") {
    for (unsigned k = 1; k <= 3; ++k) {
      const std::int64_t h = tower_height_i64(k);
      CHECK(support(k, 1) == Support{h, h + 1});
      CHECK(support(k, 3) == Support{3 * h + 1, 3 * h + 2});
      CHECK(support(k, 4) == Support{4 * h + 1, 4 * h + 3});
      for (std::uint64_t l = 0; l < 500; ++l) {
        auto d = compute_dl(k, l);
        CHECK(support(k, l) == Support{d.support_start, d.support_end()});
      }
    }
    SupportIndex idx(2, 100);
    CHECK(idx.s(40) == support_closed(2, 40).s);
    CHECK(idx.t(100) == support_closed(2, 100).t);
  }

  TEST_CASE("P_n") {
    for (unsigned k = 1; k <= 3; ++k) {
      auto p0 = find_Pn(k, 0);
      CHECK(p0.lo == 0);
      CHECK(p0.hi == 0);
      auto ph = find_Pn(k, tower_height_i64(k));
      CHECK(ph.lo == 1);
      CHECK(ph.hi == 1);
    }
    CHECK(find_Pn(1, 11).empty());
    CHECK(find_Pn(1, 12).empty());
    for (std::int64_t n = 0; n < 400; ++n) {
      auto p = find_Pn(1, n);
      for (std::uint64_t l = 0; l < 120; ++l) {
        bool in = compute_dl(1, l).at(n) > 0;
        CHECK(in == (!p.empty() && l >= p.lo && l <= p.hi));
      }
    }
  }

  TEST_CASE("autocorrelation") {
    for (unsigned k = 1; k <= 3; ++k) CHECK(autocorrelation(k, 0) == mu_Ak(k));
    CHECK(mu_Ak(1) == Q(2, 9));
    CHECK(autocorrelation(1, 4) == Q(1, 9));
    CHECK(autocorrelation(1, -4) == Q(1, 9));
    auto a1 = oracle::base_set(1);
    CHECK(autocorrelation(1, 7) == oracle::brute_correlation(a1, a1, 7));
    auto series = autocorrelation_series(1, 50);
    for (std::int64_t n = 0; n <= 50; ++n) CHECK(series[static_cast<std::size_t>(n)] == autocorrelation(1, n));
  }

  TEST_CASE("cell correlation") {
    for (std::int64_t n = 0; n < 30; ++n) {
      CHECK(cell_correlation({{0, 2}}, {{0, 2}}, n) == autocorrelation(2, n));
    }
    for (unsigned k = 1; k <= 2; ++k) {
      const std::int64_t h = tower_height_i64(k);
      // T A_k against A_k at time n looks at c_k(n + 1)
      CHECK(cell_correlation({{1, k}}, {{0, k}}, h - 1) == mu_Ak(k) / 2);
      CHECK(cell_correlation({{1, k}}, {{0, k}}, h + 1) == autocorrelation(k, h + 2));
    }
    CHECK(cell_correlation({{0, 1}, {1, 1}}, {{0, 1}}, 4) == autocorrelation(1, 4) + autocorrelation(1, 5));
    auto a = oracle::cell_set(1, 0) | oracle::cell_set(1, 1);
    auto b = oracle::cell_set(1, 0);
    for (std::int64_t n = 0; n < 40; ++n) {
      CHECK(cell_correlation({{0, 1}, {1, 1}}, {{0, 1}}, n) == oracle::brute_correlation(a, b, n));
    }
    CHECK_THROWS_AS(cell_correlation({{0, 1}}, {{0, 2}}, 3), InputError);
    CHECK_THROWS_AS(cell_correlation({{4, 1}}, {{0, 1}}, 3), InputError);
  }

  TEST_CASE("approximation by cells") {
    for (unsigned k = 1; k <= 3; ++k) {
      auto self = approximate_by_cells(oracle::base_set(k), k);
      CHECK(self.cells == std::vector<std::int64_t>{0});
      CHECK(self.error.is_zero());
      auto all = approximate_by_cells(TriadicSet::unit(), k);
      CHECK(all.cells.size() == static_cast<std::size_t>(tower_height_i64(k)));
      CHECK(all.error == Triadic(1, k + 1));
    }
    auto third = approximate_by_cells(I("0", "1/3"), 1);
    CHECK(third.cells == std::vector<std::int64_t>{0});
    CHECK(third.error == Triadic::parse("1/9"));
  }

  TEST_CASE("Cesaro averages") {
    mpq_class mu = mu_Ak(1);
    CHECK(cesaro(1, 1) == mu * (1 - mu));
    mpq_class c4 = autocorrelation(1, 4);
    mpq_class want = (mu - mu * mu + 3 * mu * mu + abs(c4 - mu * mu)) / 5;
    CHECK(cesaro(1, 5) == want);
    CHECK(cesaro({{0, 1}}, {{0, 1}}, 9) == cesaro(1, 9));
  }
}
