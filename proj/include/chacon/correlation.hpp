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

// Return-time distributions d_l' on A_k, their supports B_l = [s_l, t_l],
// the index sets P_n, and the correlations c_k(n) = mu(A_k & T^-n A_k).
//
// The mass pattern of d_l' does not depend on k: every term of the three-way
// recursion for index L carries exactly L copies of h_k in its shift. So the
// pattern is computed once with h_k dropped ("h-free") and translated by l*h_k.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "chacon/triadic.hpp"

namespace chacon {

struct ResourceCaps {
  std::uint64_t max_l = 531441;     // 3^12
  std::int64_t max_n = 4782969;     // 3^14
  std::size_t max_support = 4096;   // b_l
};

// Largest stage accepted by the integer-indexed routines here; keeps
// l * h_k well inside 64 bits for l <= 3^12.
inline constexpr unsigned kMaxCorrelationStage = 24;

struct MassPattern {
  std::int64_t offset = 0;  // s_l - l*h_k
  std::vector<mpq_class> masses;
};

// Memoized, thread-safe; concurrent fills of one index are idempotent.
std::shared_ptr<const MassPattern> mass_pattern(std::uint64_t l);
void clear_mass_pattern_cache();
std::size_t mass_pattern_cache_size();

struct ReturnDistribution {
  unsigned k = 0;
  std::uint64_t l = 0;
  std::int64_t support_start = 0;
  std::vector<mpq_class> masses;  // d_l'(support_start + i)

  std::int64_t support_end() const { return support_start + static_cast<std::int64_t>(masses.size()) - 1; }
  mpq_class at(std::int64_t n) const;
  mpq_class total() const;
  friend bool operator==(const ReturnDistribution&, const ReturnDistribution&) = default;
};

ReturnDistribution compute_dl(unsigned k, std::uint64_t l, const ResourceCaps& caps = {});
// Same values by the shift recursion evaluated with the actual h_k and no
// sharing with the memo above; used as a cross-check.
ReturnDistribution compute_dl_by_shifts(unsigned k, std::uint64_t l);

// Digits a_i in {-1,0,1}, least significant first; empty for l = 0.
struct BalancedTernary {
  std::vector<std::int8_t> digits;
  std::uint64_t value() const;
  std::string str() const;  // most significant first, using '+', '0', '-'
};

BalancedTernary balanced_ternary(std::uint64_t l);
std::uint64_t compute_bl(std::uint64_t l);

struct Support {
  std::int64_t s = 0;
  std::int64_t t = 0;
  std::int64_t size() const { return t - s + 1; }
  friend bool operator==(const Support&, const Support&) = default;
};

// By the min/max support recursion.
Support support(unsigned k, std::uint64_t l);
// Closed form s_l = l h_k + (l - b_l + 1)/2, t_l = s_l + b_l - 1.
Support support_closed(unsigned k, std::uint64_t l);

// Tables of s_l, t_l for l <= l_max, filled by the support recursion.
class SupportIndex {
 public:
  SupportIndex(unsigned k, std::uint64_t l_max);
  unsigned k() const noexcept { return k_; }
  std::uint64_t l_max() const noexcept { return s_.size() - 1; }
  std::int64_t s(std::uint64_t l) const { return s_.at(l); }
  std::int64_t t(std::uint64_t l) const { return t_.at(l); }

 private:
  unsigned k_;
  std::vector<std::int64_t> s_, t_;
};

// P_n as a contiguous range [lo, hi]; empty when lo > hi.
struct IndexRange {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  bool empty() const noexcept { return lo > hi; }
  std::uint64_t size() const noexcept { return empty() ? 0 : hi - lo + 1; }
};

IndexRange find_Pn(unsigned k, std::int64_t n, const ResourceCaps& caps = {});

// mu(A_k) = 2/3^{k+1}
mpq_class mu_Ak(unsigned k);

// c_k(n); negative n by symmetry.
mpq_class autocorrelation(unsigned k, std::int64_t n, const ResourceCaps& caps = {});
// c_k(0..n_max) in one pass.
std::vector<mpq_class> autocorrelation_series(unsigned k, std::int64_t n_max, const ResourceCaps& caps = {});

// T^m A_k.
struct TowerCell {
  std::int64_t m = 0;
  unsigned k = 0;
};

// mu(A & T^-n B) for unions of stage-k cells.
mpq_class cell_correlation(const std::vector<TowerCell>& a, const std::vector<TowerCell>& b, std::int64_t n,
                           const ResourceCaps& caps = {});

struct CellApproximation {
  std::vector<std::int64_t> cells;  // levels m, ascending
  Triadic error;                    // mu(A sym-diff union of cells)
};

// A stage-k cell is kept when it overlaps A in strictly more than half its width.
CellApproximation approximate_by_cells(const TriadicSet& a, unsigned k);

// (1/N) sum_{n<N} |c_k(n) - mu(A_k)^2|
mpq_class cesaro(unsigned k, std::int64_t N, const ResourceCaps& caps = {});
mpq_class cesaro(const std::vector<TowerCell>& a, const std::vector<TowerCell>& b, std::int64_t N,
                 const ResourceCaps& caps = {});

}  // namespace chacon
