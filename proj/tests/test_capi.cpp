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


// Exercises libchacon through its C header only.

#include <doctest.h>

#include <cstring>
#include <string>

#include "chacon/chacon.h"

namespace {
std::string take(char* s) {
  std::string out(s ? s : "");
  chacon_string_free(s);
  return out;
}
std::string str(chacon_rational* r) {
  char* s = nullptr;
  REQUIRE(chacon_rational_str(r, &s) == CHACON_OK);
  chacon_rational_free(r);
  return take(s);
}
}  // namespace

TEST_SUITE("capi") {
  TEST_CASE("distributions") {
    chacon_distribution* d = nullptr;
    REQUIRE(chacon_dl(1, 2, nullptr, &d) == CHACON_OK);
    CHECK(chacon_distribution_start(d) == 8);
    REQUIRE(chacon_distribution_size(d) == 3);
    chacon_rational* m = nullptr;
    REQUIRE(chacon_distribution_mass(d, 1, &m) == CHACON_OK);
    CHECK(str(m) == "2/3");
    CHECK(chacon_distribution_mass(d, 3, &m) == CHACON_ERR_INPUT);
    CHECK(std::string(chacon_last_error()).find("range") != std::string::npos);
    chacon_distribution_free(d);

    chacon_caps caps;
    chacon_caps_default(&caps);
    caps.max_l = 5;
    CHECK(chacon_dl(1, 6, &caps, &d) == CHACON_ERR_RESOURCE);
    REQUIRE(chacon_dl_brute(1, 4, 8, &d) == CHACON_OK);
    CHECK(chacon_distribution_start(d) == 17);
    chacon_distribution_free(d);
  }

  TEST_CASE("rationals") {
    chacon_rational* r = nullptr;
    REQUIRE(chacon_rational_parse("0.125", &r) == CHACON_OK);
    CHECK(str(r) == "1/8");
    REQUIRE(chacon_rational_parse("-6/4", &r) == CHACON_OK);
    CHECK(str(r) == "-3/2");
    REQUIRE(chacon_rational_parse("2.5e-3", &r) == CHACON_OK);
    CHECK(str(r) == "1/400");
    CHECK(chacon_rational_parse("1/0", &r) == CHACON_ERR_INPUT);
    CHECK(chacon_rational_parse("x", &r) == CHACON_ERR_INPUT);
    REQUIRE(chacon_rational_parse("2/9", &r) == CHACON_OK);
    char* dec = nullptr;
    REQUIRE(chacon_rational_decimal(r, 12, &dec) == CHACON_OK);
    CHECK(take(dec) == "0.222222222222");
    chacon_rational_free(r);
    REQUIRE(chacon_rational_parse("200000/3", &r) == CHACON_OK);
    REQUIRE(chacon_rational_decimal(r, 3, &dec) == CHACON_OK);
    CHECK(take(dec) == "6.67e+04");
    chacon_rational_free(r);
  }

  TEST_CASE("the map") {
    char* y = nullptr;
    REQUIRE(chacon_apply_t("1/3", 1, &y) == CHACON_OK);
    CHECK(take(y) == "7/3^2");
    REQUIRE(chacon_apply_t("0", 4, &y) == CHACON_OK);
    CHECK(take(y) == "2/3^3");
    CHECK(chacon_apply_t("1", 1, &y) == CHACON_ERR_DOMAIN);
    CHECK(chacon_apply_t("1/2", 1, &y) == CHACON_ERR_INPUT);
    REQUIRE(chacon_locate("1/3", 1, &y) == CHACON_OK);
    CHECK(take(y).find("level 1") != std::string::npos);
    REQUIRE(chacon_tower_height(30, &y) == CHACON_OK);
    CHECK(take(y) == "308836698141973");
  }

  TEST_CASE("correlations") {
    chacon_rational* r = nullptr;
    REQUIRE(chacon_autocorrelation(1, 0, nullptr, &r) == CHACON_OK);
    CHECK(str(r) == "2/9");
    int64_t a[] = {0, 1}, b[] = {0};
    REQUIRE(chacon_cell_correlation(1, a, 2, b, 1, 4, nullptr, &r) == CHACON_OK);
    CHECK(str(r) == "2/9");  // c(4) + c(5)
    REQUIRE(chacon_cesaro(1, 1, nullptr, &r) == CHACON_OK);
    CHECK(str(r) == "14/81");
    uint64_t bl = 0;
    REQUIRE(chacon_bl(5, &bl) == CHACON_OK);
    CHECK(bl == 4);
    int64_t s = 0, t = 0;
    REQUIRE(chacon_support(1, 4, &s, &t) == CHACON_OK);
    CHECK(s == 17);
    CHECK(t == 19);
    uint64_t lo = 0, hi = 0;
    REQUIRE(chacon_find_pn(1, 11, nullptr, &lo, &hi) == CHACON_OK);
    CHECK(lo > hi);
  }

  TEST_CASE("sets and reports") {
    chacon_intset* e = nullptr;
    REQUIRE(chacon_enumerate_ek(1, 10, &e) == CHACON_OK);
    CHECK(chacon_intset_contains(e, 11) == 1);
    CHECK(chacon_intset_contains(e, 8) == 0);
    CHECK(chacon_intset_count(e, 3) == 3);
    int64_t lo = 0, hi = 0;
    REQUIRE(chacon_intset_interval(e, 0, &lo, &hi) == CHACON_OK);
    CHECK(lo == 1);
    CHECK(hi == 3);
    int64_t grid[] = {10, 20};
    char* js = nullptr;
    int pass = 0;
    REQUIRE(chacon_count_report(e, "lower", 1.0, 1.0, nullptr, grid, 2, &js, &pass) == CHACON_OK);
    std::string report = take(js);
    CHECK(pass == 1);
    CHECK(report.find("\"grid\"") != std::string::npos);
    CHECK(report.find("\"window\"") != std::string::npos);
    CHECK(chacon_count_report(e, "sideways", 1.0, 1.0, nullptr, grid, 2, &js, &pass) == CHACON_ERR_INPUT);
    chacon_intset_free(e);

    chacon_intset* j = nullptr;
    REQUIRE(chacon_build_j(2, "log", 4, &j) == CHACON_OK);
    CHECK(chacon_intset_interval_count(j) == 0);
    CHECK(chacon_intset_note_count(j) == 2);
    chacon_intset_free(j);
    CHECK(chacon_build_jk(1, "nope", 4, &j) == CHACON_ERR_INPUT);
    CHECK(chacon_build_jk(1, "linear", 40, &j) == CHACON_ERR_RESOURCE);

    char* csv = nullptr;
    REQUIRE(chacon_convergence_csv(1, "linear", 2, 3, nullptr, &csv) == CHACON_OK);
    std::string text = take(csv);
    CHECK(text.rfind("N,block_lo,block_hi,max_dev_num,max_dev_den,excluded_count\n", 0) == 0);
    CHECK(text.find("\n2,9,27,") != std::string::npos);
  }

  TEST_CASE("extraction") {
    const char* a[] = {"0", "1", "0", "0", "1/2", "0"};
    chacon_extraction* e = nullptr;
    REQUIRE(chacon_extract(a, nullptr, nullptr, 6, &e) == CHACON_OK);
    int64_t v = 0;
    REQUIRE(chacon_extraction_check(e, &v) == CHACON_OK);
    CHECK(v == -1);
    CHECK(chacon_extraction_threshold_count(e) >= 1);
    CHECK(std::strlen(chacon_extraction_stop_reason(e)) > 0);
    chacon_intset* j = nullptr;
    REQUIRE(chacon_extraction_set(e, &j) == CHACON_OK);
    CHECK(chacon_intset_window(j) == 5);
    chacon_intset_free(j);
    chacon_extraction_free(e);

    const char* b[] = {"0", "0", "0", "0", "0", "0"};
    CHECK(chacon_extract(a, b, nullptr, 6, &e) == CHACON_ERR_PRECONDITION);
    CHECK(chacon_last_witness() == 2);
    const char* bad[] = {"0", "-1"};
    CHECK(chacon_extract(bad, nullptr, nullptr, 2, &e) == CHACON_ERR_INPUT);
  }

  TEST_CASE("verify entry point") {
    CHECK(std::string(chacon_verify_suites()).find("extractor") != std::string::npos);
    char* js = nullptr;
    int pass = 0;
    REQUIRE(chacon_verify("table", 1, &js, &pass) == CHACON_OK);
    CHECK(pass == 1);
    CHECK(take(js).find("\"constants\"") != std::string::npos);
    CHECK(chacon_verify("nonsense", 1, &js, &pass) == CHACON_ERR_INPUT);
    CHECK(chacon_dl(1, 0, nullptr, nullptr) == CHACON_ERR_INPUT);
  }
}
