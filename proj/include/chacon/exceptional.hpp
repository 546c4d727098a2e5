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

// Exceptional sets of times: the generic threshold extractor, the Chacon sets
// J_k and J, the zero-correlation set E_k, and growth bounds for their counts.
// Sets are exact; bounds are binary64.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chacon/correlation.hpp"

namespace chacon {

// Union of closed integer intervals [a, b], merged (no overlaps, no abutting).
class IntegerIntervalSet {
 public:
  using Interval = std::pair<std::int64_t, std::int64_t>;

  IntegerIntervalSet() = default;
  explicit IntegerIntervalSet(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const noexcept { return iv_; }
  bool empty() const noexcept { return iv_.empty(); }
  bool contains(std::int64_t n) const;
  // |S & [0, n]|
  std::uint64_t count(std::int64_t n) const;
  std::uint64_t size() const;

  IntegerIntervalSet unite(const IntegerIntervalSet& o) const;
  // S & [lo, hi]
  IntegerIntervalSet clip(std::int64_t lo, std::int64_t hi) const;
  // {n + i : n in S, |i| <= r}
  IntegerIntervalSet fattened(std::int64_t r) const;
  std::vector<std::int64_t> elements(std::int64_t lo, std::int64_t hi) const;
  std::string str() const;

  friend bool operator==(const IntegerIntervalSet&, const IntegerIntervalSet&) = default;

 private:
  std::vector<Interval> iv_;
};

// Increasing, continuous, divergent h : R+ -> R+.
class HFunction {
 public:
  enum class Family { kLinear, kLog, kLogLog, kPower, kTable };

  static HFunction linear();
  static HFunction log();       // ln(1 + x)
  static HFunction loglog();    // ln(1 + ln(1 + x))
  static HFunction power(double alpha);
  // Piecewise-linear through (x, y) knots, extended by the last slope.
  static HFunction table(std::vector<std::pair<double, double>> knots);
  // "linear", "log", "loglog", "power:<a>", "table:<csv path>"
  static HFunction parse(const std::string& spec);

  Family family() const noexcept { return family_; }
  std::string name() const;
  double operator()(double x) const;
  // Smallest integer x >= 0 with h(x) >= y; nullopt past 2^62.
  std::optional<std::int64_t> inverse_ceil(double y) const;

 private:
  Family family_ = Family::kLinear;
  double alpha_ = 1.0;
  std::vector<std::pair<double, double>> knots_;
};

struct WindowedSet {
  IntegerIntervalSet set;
  std::int64_t window_hi = 0;  // exact on [0, window_hi]
  std::vector<std::string> notes;
};

inline constexpr unsigned kMaxLayer = 13;

// Union over layers N = 1..N_max of B_t, t in [3^N, 3^{N+1}], b_t < (ln N)^2 h(N).
WindowedSet build_Jk(unsigned k, const HFunction& h, unsigned N_max);
// g(k) = ceil(h^{-1}(3^{2k+2})), nullopt when beyond 2^62.
std::optional<std::int64_t> g_cutoff(unsigned k, const HFunction& h);
// Union over k <= k_max of J_k fattened by h_k and cut below g(k).
WindowedSet build_J(unsigned k_max, const HFunction& h, unsigned N_max);

// Integers in the gaps (t_l, s_{l+1}) for l < l_max, plus [1, s_1 - 1].
WindowedSet enumerate_Ek(unsigned k, std::uint64_t l_max);

// ------------------------------------------------------------------ bounds

struct BoundSpec {
  enum class Form {
    kUpper,          // C (ln n)^{(ln ln n)^2 h(n)}
    kUpperTimesH,    // C h(n) (ln n)^{(ln ln n)^2 h(n)}
    kLower,          // C (ln n)^t
    kPowerRate,      // C n^{1-alpha}
    kLogRate,        // C n (ln n)^{-a}
    kBinomialLog3,   // C binom(floor(log_3 n) - 1, j)
  };
  Form form = Form::kUpper;
  double C = 1.0;
  double param = 0.0;  // t, alpha, a or j
  std::optional<HFunction> h;
  std::string provenance;

  bool is_lower() const { return form == Form::kLower || form == Form::kBinomialLog3; }
  std::string describe() const;
};

struct BoundValue {
  double value = 0.0;
  bool overflow = false;
};

BoundValue eval_bound(const BoundSpec& spec, double n);

struct CountRow {
  std::int64_t n = 0;
  std::uint64_t count = 0;
  BoundValue bound;
  bool pass = false;
};

struct CountReport {
  std::vector<CountRow> rows;
  bool pass = true;
};

CountReport verify_count(const IntegerIntervalSet& set, const BoundSpec& spec, const std::vector<std::int64_t>& grid);

// Per block [3^N, 3^{N+1}], max over n outside J_k of |c_k(n) - mu(A_k)^2|.
struct BlockDeviation {
  unsigned N = 0;
  std::int64_t lo = 0, hi = 0;
  std::optional<mpq_class> max_dev;  // empty block when nullopt
  std::uint64_t excluded = 0;        // block points inside J_k
};

std::vector<BlockDeviation> convergence_report(unsigned k, const HFunction& h, unsigned N_lo, unsigned N_hi,
                                               const ResourceCaps& caps = {});

// ---------------------------------------------------------------- extractor

struct ExtractionResult {
  IntegerIntervalSet J;
  std::vector<std::int64_t> thresholds;  // l_1, l_2, ...; N_max + 1 means "beyond the window"
  bool window_certified = true;
  std::string stop_reason;
};

// a_j >= 0, b_n the Cesaro bound (b_0 unused), c non-increasing; all on
// [0, N_max]. Throws PreconditionError (witness n) or InputError.
ExtractionResult extract_exceptional(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                                     const std::vector<mpq_class>& c, std::uint64_t k_cap = 1'000'000);

// Checks both window-certified properties exactly; returns the first
// violating n, or nullopt.
std::optional<std::int64_t> check_extraction(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                                             const std::vector<mpq_class>& c, const ExtractionResult& r);

// b_n = (1/n) sum_{j<n} a_j
std::vector<mpq_class> running_cesaro(const std::vector<mpq_class>& a);

}  // namespace chacon
