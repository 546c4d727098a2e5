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

#include "chacon/exceptional.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <sstream>

#include "chacon/error.hpp"
#include "chacon/tower.hpp"

namespace chacon {

// ------------------------------------------------------- IntegerIntervalSet

IntegerIntervalSet::IntegerIntervalSet(std::vector<Interval> intervals) {
  intervals.erase(std::remove_if(intervals.begin(), intervals.end(), [](const Interval& i) { return i.first > i.second; }),
                  intervals.end());
  std::sort(intervals.begin(), intervals.end());
  for (const auto& i : intervals) {
    if (!iv_.empty() && i.first <= iv_.back().second + 1) {
      iv_.back().second = std::max(iv_.back().second, i.second);
    } else {
      iv_.push_back(i);
    }
  }
}

bool IntegerIntervalSet::contains(std::int64_t n) const {
  auto it = std::upper_bound(iv_.begin(), iv_.end(), n, [](std::int64_t v, const Interval& i) { return v < i.first; });
  return it != iv_.begin() && std::prev(it)->second >= n;
}

std::uint64_t IntegerIntervalSet::count(std::int64_t n) const {
  std::uint64_t c = 0;
  for (const auto& [a, b] : iv_) {
    if (a > n) break;
    std::int64_t lo = std::max<std::int64_t>(a, 0), hi = std::min(b, n);
    if (lo <= hi) c += static_cast<std::uint64_t>(hi - lo + 1);
  }
  return c;
}

std::uint64_t IntegerIntervalSet::size() const {
  std::uint64_t c = 0;
  for (const auto& [a, b] : iv_) c += static_cast<std::uint64_t>(b - a + 1);
  return c;
}

IntegerIntervalSet IntegerIntervalSet::unite(const IntegerIntervalSet& o) const {
  auto all = iv_;
  all.insert(all.end(), o.iv_.begin(), o.iv_.end());
  return IntegerIntervalSet(std::move(all));
}

IntegerIntervalSet IntegerIntervalSet::clip(std::int64_t lo, std::int64_t hi) const {
  std::vector<Interval> out;
  for (const auto& [a, b] : iv_) out.emplace_back(std::max(a, lo), std::min(b, hi));
  return IntegerIntervalSet(std::move(out));
}

IntegerIntervalSet IntegerIntervalSet::fattened(std::int64_t r) const {
  std::vector<Interval> out;
  out.reserve(iv_.size());
  for (const auto& [a, b] : iv_) out.emplace_back(a - r, b + r);
  return IntegerIntervalSet(std::move(out));
}

std::vector<std::int64_t> IntegerIntervalSet::elements(std::int64_t lo, std::int64_t hi) const {
  std::vector<std::int64_t> out;
  for (const auto& [a, b] : iv_) {
    for (std::int64_t n = std::max(a, lo); n <= std::min(b, hi); ++n) out.push_back(n);
  }
  return out;
}

std::string IntegerIntervalSet::str() const {
  if (iv_.empty()) return "{}";
  std::string s;
  for (const auto& [a, b] : iv_) {
    if (!s.empty()) s += " u ";
    s += a == b ? "{" + std::to_string(a) + "}" : "[" + std::to_string(a) + ", " + std::to_string(b) + "]";
  }
  return s;
}

// --------------------------------------------------------------- HFunction

HFunction HFunction::linear() { return HFunction(); }

HFunction HFunction::log() {
  HFunction f;
  f.family_ = Family::kLog;
  return f;
}

HFunction HFunction::loglog() {
  HFunction f;
  f.family_ = Family::kLogLog;
  return f;
}

HFunction HFunction::power(double alpha) {
  if (!(alpha > 0)) throw InputError("power h needs alpha > 0");
  HFunction f;
  f.family_ = Family::kPower;
  f.alpha_ = alpha;
  return f;
}

HFunction HFunction::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw InputError("table h needs at least two knots");
  std::sort(knots.begin(), knots.end());
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i].first == knots[i - 1].first || knots[i].second < knots[i - 1].second) {
      throw InputError("table h must have distinct x and non-decreasing y");
    }
  }
  HFunction f;
  f.family_ = Family::kTable;
  f.knots_ = std::move(knots);
  return f;
}

HFunction HFunction::parse(const std::string& spec) {
  if (spec == "linear") return linear();
  if (spec == "log") return log();
  if (spec == "loglog") return loglog();
  if (spec.rfind("power:", 0) == 0) {
    try {
      std::size_t used = 0;
      double a = std::stod(spec.substr(6), &used);
      if (used != spec.size() - 6) throw InputError("trailing characters");
      return power(a);
    } catch (const std::logic_error&) {
      throw InputError("bad power exponent in '" + spec + "'");
    }
  }
  if (spec.rfind("table:", 0) == 0) {
    std::ifstream in(spec.substr(6));
    if (!in) throw InputError("cannot open h table '" + spec.substr(6) + "'");
    std::vector<std::pair<double, double>> knots;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x, y;
      if (ls >> x >> y) knots.emplace_back(x, y);
    }
    return table(std::move(knots));
  }
  throw InputError("unknown h function '" + spec + "'");
}

std::string HFunction::name() const {
  switch (family_) {
    case Family::kLinear: return "linear";
    case Family::kLog: return "log";
    case Family::kLogLog: return "loglog";
    case Family::kPower: {
      std::ostringstream s;
      s << "power:" << alpha_;
      return s.str();
    }
    case Family::kTable: return "table";
  }
  return "?";
}

double HFunction::operator()(double x) const {
  switch (family_) {
    case Family::kLinear: return x;
    case Family::kLog: return std::log1p(x);
    case Family::kLogLog: return std::log1p(std::log1p(x));
    case Family::kPower: return std::pow(x, alpha_);
    case Family::kTable: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                                 [](double v, const std::pair<double, double>& k) { return v < k.first; });
      std::size_t i = static_cast<std::size_t>(it - knots_.begin());
      i = std::clamp<std::size_t>(i, 1, knots_.size() - 1);
      const auto& [x0, y0] = knots_[i - 1];
      const auto& [x1, y1] = knots_[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return 0;
}

std::optional<std::int64_t> HFunction::inverse_ceil(double y) const {
  constexpr std::int64_t kBound = std::int64_t{1} << 62;
  if ((*this)(0) >= y) return 0;
  std::int64_t hi = 1;
  while ((*this)(static_cast<double>(hi)) < y) {
    if (hi >= kBound) return std::nullopt;
    hi *= 2;
  }
  std::int64_t lo = hi / 2;  // h(lo) < y <= h(hi)
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if ((*this)(static_cast<double>(mid)) >= y) hi = mid; else lo = mid;
  }
  return hi;
}

// ------------------------------------------------------------------ J_k, J

namespace {

std::uint64_t u3(unsigned e) {
  std::uint64_t p = 1;
  for (unsigned i = 0; i < e; ++i) p *= 3;
  return p;
}

void check_layers(unsigned N_max) {
  if (N_max > kMaxLayer) {
    throw ResourceCapError("N_max=" + std::to_string(N_max) + " above cap " + std::to_string(kMaxLayer));
  }
}

}  // namespace

WindowedSet build_Jk(unsigned k, const HFunction& h, unsigned N_max) {
  if (k < 1) throw InputError("build_Jk: k must be >= 1");
  check_layers(N_max);
  std::vector<IntegerIntervalSet::Interval> parts;
  for (unsigned N = 1; N <= N_max; ++N) {
    double lnN = std::log(static_cast<double>(N));
    double threshold = lnN * lnN * h(static_cast<double>(N));
    for (std::uint64_t t = u3(N); t <= u3(N + 1); ++t) {
      if (static_cast<double>(compute_bl(t)) < threshold) {
        Support sp = support_closed(k, t);
        parts.emplace_back(sp.s, sp.t);
      }
    }
  }
  WindowedSet out;
  out.set = IntegerIntervalSet(std::move(parts));
  out.window_hi = support_closed(k, u3(N_max + 1)).s - 1;
  return out;
}

std::optional<std::int64_t> g_cutoff(unsigned k, const HFunction& h) {
  return h.inverse_ceil(std::pow(3.0, 2.0 * k + 2.0));
}

WindowedSet build_J(unsigned k_max, const HFunction& h, unsigned N_max) {
  WindowedSet out;
  out.window_hi = INT64_MAX;
  for (unsigned k = 1; k <= k_max; ++k) {
    WindowedSet jk = build_Jk(k, h, N_max);
    std::int64_t hk = tower_height_i64(k);
    out.window_hi = std::min(out.window_hi, jk.window_hi - hk);
    auto g = g_cutoff(k, h);
    if (!g) {
      out.notes.push_back("layer k=" + std::to_string(k) + " skipped: g(k) beyond 2^62, empty on window");
      continue;
    }
    out.set = out.set.unite(jk.set.fattened(hk).clip(std::max<std::int64_t>(*g, 0), INT64_MAX));
  }
  return out;
}

WindowedSet enumerate_Ek(unsigned k, std::uint64_t l_max) {
  if (k < 1) throw InputError("enumerate_Ek: k must be >= 1");
  std::vector<IntegerIntervalSet::Interval> gaps;
  Support prev = support_closed(k, 0);
  for (std::uint64_t l = 0; l < l_max; ++l) {
    Support next = support_closed(k, l + 1);
    gaps.emplace_back(std::max<std::int64_t>(prev.t + 1, 1), next.s - 1);
    prev = next;
  }
  WindowedSet out;
  out.set = IntegerIntervalSet(std::move(gaps));
  out.window_hi = support_closed(k, l_max).s - 1;
  return out;
}

// ------------------------------------------------------------------ bounds

std::string BoundSpec::describe() const {
  std::ostringstream s;
  s.precision(17);
  std::string hn = h ? h->name() : "h";
  switch (form) {
    case Form::kUpper: s << C << "*(ln n)^((ln ln n)^2*" << hn << "(n))"; break;
    case Form::kUpperTimesH: s << C << "*" << hn << "(n)*(ln n)^((ln ln n)^2*" << hn << "(n))"; break;
    case Form::kLower: s << C << "*(ln n)^" << param; break;
    case Form::kPowerRate: s << C << "*n^(1-" << param << ")"; break;
    case Form::kLogRate: s << C << "*n*(ln n)^-" << param; break;
    case Form::kBinomialLog3: s << C << "*binom(floor(log3 n)-1," << param << ")"; break;
  }
  return s.str();
}

BoundValue eval_bound(const BoundSpec& spec, double n) {
  const double kMaxLog = std::log(DBL_MAX);
  auto from_log = [&](double lg) {
    if (lg > kMaxLog) return BoundValue{INFINITY, true};
    return BoundValue{std::exp(lg), false};
  };
  switch (spec.form) {
    case BoundSpec::Form::kUpper:
    case BoundSpec::Form::kUpperTimesH: {
      if (n < 3) throw InputError("double-log bound needs n >= 3");
      if (!spec.h) throw InputError("upper bound needs an h function");
      double ln = std::log(n), lnln = std::log(ln);
      double hv = (*spec.h)(n);
      double lg = std::log(spec.C) + lnln * lnln * hv * lnln;
      if (spec.form == BoundSpec::Form::kUpperTimesH) lg += std::log(hv);
      return from_log(lg);
    }
    case BoundSpec::Form::kLower:
      if (n <= 1) throw InputError("log bound needs n > 1");
      return from_log(std::log(spec.C) + spec.param * std::log(std::log(n)));
    case BoundSpec::Form::kPowerRate:
      return from_log(std::log(spec.C) + (1 - spec.param) * std::log(n));
    case BoundSpec::Form::kLogRate:
      if (n <= 1) throw InputError("log-rate bound needs n > 1");
      return from_log(std::log(spec.C) + std::log(n) - spec.param * std::log(std::log(n)));
    case BoundSpec::Form::kBinomialLog3: {
      auto x = static_cast<std::int64_t>(std::floor(n));
      std::int64_t m = 0;
      for (std::int64_t p = 3; p <= x; p *= 3) ++m;
      auto top = m - 1;
      auto j = static_cast<std::int64_t>(spec.param);
      if (top < j || j < 0) return {0.0, false};
      double v = 1;
      for (std::int64_t i = 1; i <= j; ++i) v = v * static_cast<double>(top - j + i) / static_cast<double>(i);
      v *= spec.C;
      if (std::isinf(v)) return {INFINITY, true};
      return {v, false};
    }
  }
  return {};
}

CountReport verify_count(const IntegerIntervalSet& set, const BoundSpec& spec, const std::vector<std::int64_t>& grid) {
  CountReport r;
  for (auto n : grid) {
    CountRow row;
    row.n = n;
    row.count = set.count(n);
    row.bound = eval_bound(spec, static_cast<double>(n));
    row.pass = spec.is_lower() ? static_cast<double>(row.count) >= row.bound.value
                               : static_cast<double>(row.count) <= row.bound.value;
    r.pass = r.pass && row.pass;
    r.rows.push_back(row);
  }
  return r;
}

std::vector<BlockDeviation> convergence_report(unsigned k, const HFunction& h, unsigned N_lo, unsigned N_hi,
                                               const ResourceCaps& caps) {
  if (N_lo < 1 || N_lo > N_hi) throw InputError("convergence_report: need 1 <= N_lo <= N_hi");
  const auto top = static_cast<std::int64_t>(u3(N_hi + 1));
  unsigned N_max = N_hi;
  WindowedSet jk = build_Jk(k, h, N_max);
  while (jk.window_hi < top) {
    jk = build_Jk(k, h, ++N_max);
  }
  auto c = autocorrelation_series(k, top, caps);
  mpq_class mu = mu_Ak(k);
  mpq_class mu2 = mu * mu;
  std::vector<BlockDeviation> out;
  for (unsigned N = N_lo; N <= N_hi; ++N) {
    BlockDeviation b;
    b.N = N;
    b.lo = static_cast<std::int64_t>(u3(N));
    b.hi = static_cast<std::int64_t>(u3(N + 1));
    for (std::int64_t n = b.lo; n <= b.hi; ++n) {
      if (jk.set.contains(n)) {
        ++b.excluded;
        continue;
      }
      mpq_class d = abs(c[static_cast<std::size_t>(n)] - mu2);
      if (!b.max_dev || d > *b.max_dev) b.max_dev = d;
    }
    out.push_back(std::move(b));
  }
  return out;
}

// --------------------------------------------------------------- extractor

std::vector<mpq_class> running_cesaro(const std::vector<mpq_class>& a) {
  std::vector<mpq_class> b(a.size(), mpq_class(0));
  mpq_class s = 0;
  for (std::size_t n = 1; n < a.size(); ++n) {
    s += a[n - 1];
    b[n] = s / static_cast<long>(n);
  }
  return b;
}

namespace {

// q_n = c_n / (n b_n); nullopt stands for +infinity (n = 0 or b_n = 0).
std::vector<std::optional<mpq_class>> ratio_weights(const std::vector<mpq_class>& b, const std::vector<mpq_class>& c) {
  std::vector<std::optional<mpq_class>> q(b.size());
  for (std::size_t n = 1; n < b.size(); ++n) {
    if (b[n] > 0) q[n] = c[n] / (b[n] * static_cast<long>(n));
  }
  return q;
}

bool ratio_ok(const std::optional<mpq_class>& q, std::uint64_t count, std::uint64_t k) {
  if (count == 0) return true;
  if (!q) return false;
  return *q * mpq_class(mpz_class(static_cast<unsigned long>(count))) * static_cast<unsigned long>(k) <= 1;
}

bool ratio_zero(const std::optional<mpq_class>& q, std::uint64_t count) {
  return count == 0 || (q && *q == 0);
}

}  // namespace

ExtractionResult extract_exceptional(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                                     const std::vector<mpq_class>& c, std::uint64_t k_cap) {
  if (a.empty() || b.size() != a.size() || c.size() != a.size()) {
    throw InputError("extract: a, b, c must be non-empty and of equal length");
  }
  const auto N = static_cast<std::int64_t>(a.size()) - 1;
  for (std::int64_t j = 0; j <= N; ++j) {
    if (a[j] < 0) throw InputError("extract: a_" + std::to_string(j) + " is negative");
  }
  for (std::int64_t n = 1; n <= N; ++n) {
    if (c[n] > c[n - 1]) throw InputError("extract: c is not non-increasing at n=" + std::to_string(n));
  }
  {
    mpq_class s = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
      s += a[n - 1];
      if (s > b[n] * static_cast<long>(n)) {
        throw PreconditionError("extract: Cesaro bound violated at n=" + std::to_string(n), n);
      }
    }
  }
  auto q = ratio_weights(b, c);
  std::vector<bool> support(a.size());
  for (std::int64_t j = 0; j <= N; ++j) support[j] = a[j] > 0;

  ExtractionResult r;
  std::vector<IntegerIntervalSet::Interval> parts;
  std::vector<bool> prev_in;
  std::int64_t prev_l = 0;
  std::vector<std::uint64_t> cnt(a.size());
  auto flush = [&](std::int64_t from, std::int64_t to) {
    for (std::int64_t j = std::max<std::int64_t>(from, 0); j <= std::min(to, N); ++j) {
      if (prev_in[j]) parts.emplace_back(j, j);
    }
  };

  for (std::uint64_t k = 1;; ++k) {
    if (k > k_cap) {
      flush(prev_l, N);
      r.window_certified = false;
      r.stop_reason = "k cap reached";
      break;
    }
    const mpq_class inv(1, static_cast<unsigned long>(k));
    std::vector<bool> in(a.size());
    std::uint64_t running = 0;
    for (std::int64_t j = 0; j <= N; ++j) {
      in[j] = a[j] > inv;
      running += in[j] ? 1 : 0;
      cnt[j] = running;
    }
    std::int64_t lk = prev_l;
    for (std::int64_t n = N; n >= prev_l; --n) {
      if (!ratio_ok(q[n], cnt[n], k)) {
        lk = n + 1;
        break;
      }
    }
    if (k > 1) flush(prev_l, lk);
    r.thresholds.push_back(lk);
    if (lk > N) {
      r.stop_reason = "threshold left the window";
      break;
    }
    bool saturated = in == support;
    bool all_zero = true;
    for (std::int64_t n = lk; n <= N && all_zero; ++n) all_zero = ratio_zero(q[n], cnt[n]);
    prev_in = std::move(in);
    prev_l = lk;
    if (saturated && all_zero) {
      flush(lk, N);
      r.stop_reason = "saturated";
      break;
    }
  }
  r.J = IntegerIntervalSet(std::move(parts));
  return r;
}

std::optional<std::int64_t> check_extraction(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                                             const std::vector<mpq_class>& c, const ExtractionResult& r) {
  const auto N = static_cast<std::int64_t>(a.size()) - 1;
  auto q = ratio_weights(b, c);
  std::vector<std::uint64_t> jcount(a.size());
  std::uint64_t running = 0;
  for (std::int64_t n = 0; n <= N; ++n) {
    running += r.J.contains(n) ? 1 : 0;
    jcount[n] = running;
  }
  for (std::size_t i = 0; i < r.thresholds.size(); ++i) {
    const std::uint64_t k = i + 1;
    const mpq_class inv(1, static_cast<unsigned long>(k));
    const std::int64_t lk = r.thresholds[i];
    const std::int64_t next = i + 1 < r.thresholds.size() ? r.thresholds[i + 1] : N + 1;
    for (std::int64_t n = lk; n <= N; ++n) {
      if (!r.J.contains(n) && a[n] > inv) return n;
    }
    for (std::int64_t n = lk; n < std::min(next, N + 1); ++n) {
      if (!ratio_ok(q[n], jcount[n], k)) return n;
    }
  }
  return std::nullopt;
}

}  // namespace chacon
