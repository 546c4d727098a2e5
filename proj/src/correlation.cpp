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

#include "chacon/correlation.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <unordered_map>

#include "chacon/error.hpp"
#include "chacon/tower.hpp"

namespace chacon {

namespace {

std::int64_t stage_height(unsigned k) {
  if (k > kMaxCorrelationStage) {
    throw ResourceCapError("stage " + std::to_string(k) + " above correlation cap " +
                           std::to_string(kMaxCorrelationStage));
  }
  return tower_height_i64(k);
}

void check_l(std::uint64_t l, const ResourceCaps& caps) {
  if (l > caps.max_l) {
    throw ResourceCapError("index l=" + std::to_string(l) + " above cap " + std::to_string(caps.max_l));
  }
}

void check_n(std::int64_t n, const ResourceCaps& caps) {
  if (n > caps.max_n || n < -caps.max_n) {
    throw ResourceCapError("time n=" + std::to_string(n) + " above cap " + std::to_string(caps.max_n));
  }
}

// ----------------------------------------------------------- pattern memo

struct PatternCache {
  std::shared_mutex mu;
  std::unordered_map<std::uint64_t, std::shared_ptr<const MassPattern>> map;
};

PatternCache& cache() {
  static PatternCache c;
  return c;
}

// Sum of shifted, scaled patterns on a dense range.
MassPattern combine(std::initializer_list<std::pair<const MassPattern*, std::int64_t>> parts,
                    const mpq_class& weight) {
  std::int64_t lo = INT64_MAX, hi = INT64_MIN;
  for (auto [p, shift] : parts) {
    lo = std::min(lo, p->offset + shift);
    hi = std::max(hi, p->offset + shift + static_cast<std::int64_t>(p->masses.size()) - 1);
  }
  MassPattern out;
  out.offset = lo;
  out.masses.assign(static_cast<std::size_t>(hi - lo + 1), mpq_class(0));
  for (auto [p, shift] : parts) {
    std::int64_t base = p->offset + shift - lo;
    for (std::size_t i = 0; i < p->masses.size(); ++i) out.masses[base + i] += p->masses[i];
  }
  if (weight != 1) {
    for (auto& m : out.masses) m *= weight;
  }
  return out;
}

std::shared_ptr<const MassPattern> build_pattern(std::uint64_t L) {
  auto p = std::make_shared<MassPattern>();
  if (L == 0) {
    p->masses = {mpq_class(1)};
    return p;
  }
  if (L == 1) {
    p->masses = {mpq_class(1, 2), mpq_class(1, 2)};
    return p;
  }
  const std::uint64_t l = L / 3;
  const auto sl = static_cast<std::int64_t>(l);
  const mpq_class third(1, 3);
  auto pl = mass_pattern(l);
  switch (L % 3) {
    case 0:
      *p = combine({{pl.get(), sl}}, 1);
      break;
    case 1: {
      auto pl1 = mass_pattern(l + 1);
      *p = combine({{pl.get(), sl}, {pl.get(), sl + 1}, {pl1.get(), sl}}, third);
      break;
    }
    default: {
      auto pl1 = mass_pattern(l + 1);
      *p = combine({{pl.get(), sl + 1}, {pl1.get(), sl + 1}, {pl1.get(), sl}}, third);
      break;
    }
  }
  return p;
}

}  // namespace

std::shared_ptr<const MassPattern> mass_pattern(std::uint64_t l) {
  auto& c = cache();
  {
    std::shared_lock lock(c.mu);
    auto it = c.map.find(l);
    if (it != c.map.end()) return it->second;
  }
  auto built = build_pattern(l);
  std::unique_lock lock(c.mu);
  auto [it, inserted] = c.map.emplace(l, std::move(built));
  return it->second;
}

void clear_mass_pattern_cache() {
  auto& c = cache();
  std::unique_lock lock(c.mu);
  c.map.clear();
}

std::size_t mass_pattern_cache_size() {
  auto& c = cache();
  std::shared_lock lock(c.mu);
  return c.map.size();
}

// ------------------------------------------------------- distributions

mpq_class ReturnDistribution::at(std::int64_t n) const {
  if (n < support_start || n > support_end()) return 0;
  return masses[static_cast<std::size_t>(n - support_start)];
}

mpq_class ReturnDistribution::total() const {
  mpq_class s = 0;
  for (const auto& m : masses) s += m;
  return s;
}

ReturnDistribution compute_dl(unsigned k, std::uint64_t l, const ResourceCaps& caps) {
  check_l(l, caps);
  std::int64_t h = stage_height(k);
  if (compute_bl(l) > caps.max_support) throw ResourceCapError("support size above cap");
  auto p = mass_pattern(l);
  ReturnDistribution d;
  d.k = k;
  d.l = l;
  d.support_start = static_cast<std::int64_t>(l) * h + p->offset;
  d.masses = p->masses;
  return d;
}

namespace {

using Sparse = std::map<std::int64_t, mpq_class>;

void add_shifted(Sparse& out, const Sparse& in, std::int64_t shift) {
  for (const auto& [n, m] : in) out[n + shift] += m / 3;
}

// (d_l', d_{l+1}') with the real h; recursion on the pair keeps the call tree
// linear in the number of ternary digits of l.
std::pair<Sparse, Sparse> shift_pair(std::int64_t h, std::uint64_t l) {
  if (l == 0) {
    return {Sparse{{0, mpq_class(1)}}, Sparse{{h, mpq_class(1, 2)}, {h + 1, mpq_class(1, 2)}}};
  }
  auto [a, b] = shift_pair(h, l / 3);
  const auto q = static_cast<std::int64_t>(l / 3);
  auto at = [&](unsigned j, std::int64_t q, const Sparse& dl, const Sparse& dl1) {
    Sparse out;
    if (j == 0) {
      for (const auto& [n, m] : dl) out[n + 2 * q * h + q] += m;
    } else if (j == 1) {
      add_shifted(out, dl, (2 * q + 1) * h + q);
      add_shifted(out, dl, (2 * q + 1) * h + q + 1);
      add_shifted(out, dl1, 2 * q * h + q);
    } else {
      add_shifted(out, dl, (2 * q + 2) * h + q + 1);
      add_shifted(out, dl1, (2 * q + 1) * h + q + 1);
      add_shifted(out, dl1, (2 * q + 1) * h + q);
    }
    return out;
  };
  unsigned j = static_cast<unsigned>(l % 3);
  Sparse cur = at(j, q, a, b);
  Sparse next = j < 2 ? at(j + 1, q, a, b) : at(0, q + 1, b, Sparse{});
  return {std::move(cur), std::move(next)};
}

}  // namespace

ReturnDistribution compute_dl_by_shifts(unsigned k, std::uint64_t l) {
  std::int64_t h = stage_height(k);
  Sparse d = shift_pair(h, l).first;
  ReturnDistribution out;
  out.k = k;
  out.l = l;
  out.support_start = d.begin()->first;
  std::int64_t end = d.rbegin()->first;
  out.masses.assign(static_cast<std::size_t>(end - out.support_start + 1), mpq_class(0));
  for (const auto& [n, m] : d) out.masses[static_cast<std::size_t>(n - out.support_start)] = m;
  return out;
}

// --------------------------------------------------------- balanced ternary

std::uint64_t BalancedTernary::value() const {
  std::int64_t v = 0, p = 1;
  for (auto d : digits) {
    v += d * p;
    p *= 3;
  }
  return static_cast<std::uint64_t>(v);
}

std::string BalancedTernary::str() const {
  if (digits.empty()) return "0";
  std::string s;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) s.push_back(*it > 0 ? '+' : (*it < 0 ? '-' : '0'));
  return s;
}

BalancedTernary balanced_ternary(std::uint64_t l) {
  BalancedTernary bt;
  while (l > 0) {
    unsigned r = static_cast<unsigned>(l % 3);
    if (r == 2) {
      bt.digits.push_back(-1);
      l = l / 3 + 1;
    } else {
      bt.digits.push_back(static_cast<std::int8_t>(r));
      l /= 3;
    }
  }
  return bt;
}

std::uint64_t compute_bl(std::uint64_t l) {
  std::uint64_t b = 1;
  while (l > 0) {
    unsigned r = static_cast<unsigned>(l % 3);
    if (r != 0) ++b;
    l = l / 3 + (r == 2 ? 1 : 0);
  }
  return b;
}

// ---------------------------------------------------------------- supports

namespace {

Support combine_support(unsigned j, std::int64_t q, std::int64_t h, const Support& a, const Support& b) {
  switch (j) {
    case 0:
      return {a.s + 2 * q * h + q, a.t + 2 * q * h + q};
    case 1:
      return {std::min(a.s + (2 * q + 1) * h + q, b.s + 2 * q * h + q),
              std::max(a.t + (2 * q + 1) * h + q + 1, b.t + 2 * q * h + q)};
    default:
      return {std::min(a.s + (2 * q + 2) * h + q + 1, b.s + (2 * q + 1) * h + q),
              std::max(a.t + (2 * q + 2) * h + q + 1, b.t + (2 * q + 1) * h + q + 1)};
  }
}

std::pair<Support, Support> support_pair(std::int64_t h, std::uint64_t l) {
  if (l == 0) return {Support{0, 0}, Support{h, h + 1}};
  auto [a, b] = support_pair(h, l / 3);
  const auto q = static_cast<std::int64_t>(l / 3);
  unsigned j = static_cast<unsigned>(l % 3);
  Support cur = combine_support(j, q, h, a, b);
  Support next = j < 2 ? combine_support(j + 1, q, h, a, b) : combine_support(0, q + 1, h, b, b);
  return {cur, next};
}

}  // namespace

Support support(unsigned k, std::uint64_t l) { return support_pair(stage_height(k), l).first; }

Support support_closed(unsigned k, std::uint64_t l) {
  std::int64_t h = stage_height(k);
  auto b = static_cast<std::int64_t>(compute_bl(l));
  auto li = static_cast<std::int64_t>(l);
  std::int64_t s = li * h + (li - b + 1) / 2;
  return {s, s + b - 1};
}

SupportIndex::SupportIndex(unsigned k, std::uint64_t l_max) : k_(k) {
  std::int64_t h = stage_height(k);
  std::uint64_t n = std::max<std::uint64_t>(l_max, 1) + 1;
  s_.resize(n);
  t_.resize(n);
  s_[0] = t_[0] = 0;
  s_[1] = h;
  t_[1] = h + 1;
  for (std::uint64_t L = 2; L < n; ++L) {
    std::uint64_t q = L / 3;
    Support a{s_[q], t_[q]};
    Support b{s_[q + 1], t_[q + 1]};
    Support r = combine_support(static_cast<unsigned>(L % 3), static_cast<std::int64_t>(q), h, a, b);
    s_[L] = r.s;
    t_[L] = r.t;
  }
  s_.resize(l_max + 1);
  t_.resize(l_max + 1);
}

IndexRange find_Pn(unsigned k, std::int64_t n, const ResourceCaps& caps) {
  if (n < 0) throw InputError("find_Pn: n must be non-negative");
  check_n(n, caps);
  std::int64_t h = stage_height(k);
  // s_l and t_l increase by at least h_k per step; l <= n/h_k bounds P_n.
  std::uint64_t top = static_cast<std::uint64_t>(n / h) + 1;
  auto first_t_ge = [&] {
    std::uint64_t lo = 0, hi = top + 1;
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (support_closed(k, mid).t >= n) hi = mid; else lo = mid + 1;
    }
    return lo;
  };
  auto last_s_le = [&] {
    std::uint64_t lo = 0, hi = top + 1;  // first l with s_l > n
    while (lo < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      if (support_closed(k, mid).s > n) hi = mid; else lo = mid + 1;
    }
    return lo;  // lo >= 1 since s_0 = 0 <= n
  };
  IndexRange r;
  r.lo = first_t_ge();
  std::uint64_t after = last_s_le();
  if (after == 0 || r.lo > after - 1) return IndexRange{};
  r.hi = after - 1;
  check_l(r.hi, caps);
  return r;
}

// ------------------------------------------------------------- correlations

mpq_class mu_Ak(unsigned k) {
  mpq_class q(mpz_class(2), pow3(k + 1));
  q.canonicalize();
  return q;
}

mpq_class autocorrelation(unsigned k, std::int64_t n, const ResourceCaps& caps) {
  if (n < 0) n = -n;
  check_n(n, caps);
  IndexRange P = find_Pn(k, n, caps);
  std::int64_t h = stage_height(k);
  mpq_class sum = 0;
  for (std::uint64_t l = P.lo; l <= P.hi && !P.empty(); ++l) {
    auto p = mass_pattern(l);
    std::int64_t idx = n - static_cast<std::int64_t>(l) * h - p->offset;
    sum += p->masses.at(static_cast<std::size_t>(idx));
  }
  return sum * mu_Ak(k);
}

std::vector<mpq_class> autocorrelation_series(unsigned k, std::int64_t n_max, const ResourceCaps& caps) {
  if (n_max < 0) return {};
  check_n(n_max, caps);
  std::int64_t h = stage_height(k);
  std::vector<mpq_class> out(static_cast<std::size_t>(n_max + 1), mpq_class(0));
  for (std::uint64_t l = 0;; ++l) {
    Support sp = support_closed(k, l);
    if (sp.s > n_max) break;
    check_l(l, caps);
    auto p = mass_pattern(l);
    std::int64_t start = static_cast<std::int64_t>(l) * h + p->offset;
    for (std::size_t i = 0; i < p->masses.size(); ++i) {
      std::int64_t n = start + static_cast<std::int64_t>(i);
      if (n > n_max) break;
      out[static_cast<std::size_t>(n)] += p->masses[i];
    }
  }
  mpq_class mu = mu_Ak(k);
  for (auto& v : out) v *= mu;
  return out;
}

namespace {

unsigned common_stage(const std::vector<TowerCell>& a, const std::vector<TowerCell>& b) {
  if (a.empty() && b.empty()) return 0;
  unsigned k = a.empty() ? b.front().k : a.front().k;
  std::int64_t h = stage_height(k);
  for (const auto* v : {&a, &b}) {
    for (const auto& c : *v) {
      if (c.k != k) throw InputError("cells at different stages; refine to a common stage first");
      if (c.m < 0 || c.m >= h) throw InputError("cell level " + std::to_string(c.m) + " outside [0, h_k)");
    }
  }
  return k;
}

std::vector<std::int64_t> distinct_levels(const std::vector<TowerCell>& v) {
  std::set<std::int64_t> s;
  for (const auto& c : v) s.insert(c.m);
  return {s.begin(), s.end()};
}

}  // namespace

mpq_class cell_correlation(const std::vector<TowerCell>& a, const std::vector<TowerCell>& b, std::int64_t n,
                           const ResourceCaps& caps) {
  unsigned k = common_stage(a, b);
  mpq_class sum = 0;
  for (auto m1 : distinct_levels(a)) {
    for (auto m2 : distinct_levels(b)) sum += autocorrelation(k, n - m2 + m1, caps);
  }
  return sum;
}

CellApproximation approximate_by_cells(const TriadicSet& a, unsigned k) {
  std::int64_t h = stage_height(k);
  Triadic width(2, k + 1);
  CellApproximation out;
  std::vector<TriadicInterval> kept;
  for (std::int64_t m = 0; m < h; ++m) {
    TriadicInterval cell = level_interval(k, mpz_class(static_cast<long>(m)));
    Triadic overlap = measure(a & TriadicSet({cell}));
    if (overlap.times(2) > width) {
      out.cells.push_back(m);
      kept.push_back(cell);
    }
  }
  out.error = measure(a ^ TriadicSet(std::move(kept)));
  return out;
}

mpq_class cesaro(unsigned k, std::int64_t N, const ResourceCaps& caps) {
  if (N < 1) throw InputError("cesaro: N must be >= 1");
  auto c = autocorrelation_series(k, N - 1, caps);
  mpq_class mu2 = mu_Ak(k) * mu_Ak(k);
  mpq_class sum = 0;
  for (const auto& v : c) sum += abs(v - mu2);
  return sum / N;
}

mpq_class cesaro(const std::vector<TowerCell>& a, const std::vector<TowerCell>& b, std::int64_t N,
                 const ResourceCaps& caps) {
  if (N < 1) throw InputError("cesaro: N must be >= 1");
  unsigned k = common_stage(a, b);
  auto la = distinct_levels(a);
  auto lb = distinct_levels(b);
  mpq_class mu = mu_Ak(k);
  mpq_class target = mu * static_cast<long>(la.size()) * mu * static_cast<long>(lb.size());
  // c_k is needed on [min shift, N-1 + max shift] in absolute value.
  std::int64_t reach = 0;
  for (auto m1 : la) {
    for (auto m2 : lb) reach = std::max({reach, std::abs(N - 1 - m2 + m1), std::abs(-m2 + m1)});
  }
  auto c = autocorrelation_series(k, reach, caps);
  mpq_class sum = 0;
  for (std::int64_t n = 0; n < N; ++n) {
    mpq_class v = 0;
    for (auto m1 : la) {
      for (auto m2 : lb) v += c[static_cast<std::size_t>(std::abs(n - m2 + m1))];
    }
    sum += abs(v - target);
  }
  return sum / N;
}

}  // namespace chacon
