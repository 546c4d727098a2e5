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

// Brute-force ground truth. Nothing here calls into tower.cpp or the mass
// recursion: T is rebuilt from explicit per-stage stacking tables of integer
// level positions, and d_l' is rebuilt by running the induced map on digit
// prefixes.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "chacon/correlation.hpp"
#include "chacon/profile.hpp"
#include "chacon/triadic.hpp"

namespace chacon::oracle {

inline constexpr unsigned kMaxTableStage = 14;

// Stage-K layout as integers: level j is [start(j), start(j) + 2) in units of
// 3^{-(K+1)}; level_of_cell(c) inverts it for the cell [2c, 2c + 2).
class StackingTable {
 public:
  // Shared, lazily built, thread-safe. Throws ResourceCapError above
  // kMaxTableStage.
  static const StackingTable& stage(unsigned K);

  unsigned stage_index() const noexcept { return K_; }
  std::int64_t height() const noexcept { return static_cast<std::int64_t>(start_.size()); }
  std::int64_t start(std::int64_t j) const { return start_[static_cast<std::size_t>(j)]; }
  std::int64_t level_of_cell(std::int64_t c) const { return level_[static_cast<std::size_t>(c)]; }

 private:
  explicit StackingTable(unsigned K) : K_(K) {}
  unsigned K_;
  std::vector<std::int32_t> start_;
  std::vector<std::int32_t> level_;
  friend class TableBuilder;
};

// Interval sets as integers in units of 3^{-R}.
struct Piece {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::int64_t size() const { return hi - lo; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

struct PushforwardState {
  unsigned resolution = 0;  // R
  unsigned max_stage = 0;   // stages searched per step
  std::vector<std::pair<Piece, Piece>> pieces;  // (source, current image)
  std::int64_t residual = 0;  // measure whose image left the searched stages
  std::uint64_t steps = 0;
  std::size_t fragment_cap = 1u << 20;

  static PushforwardState start(const TriadicSet& a, unsigned max_stage);
  std::int64_t image_measure() const;
  TriadicSet image() const;
};

// One application of T to every image piece.
PushforwardState pushforward_step(const PushforwardState& state);

// mu(A & T^-n B), exact. |n| <= n_cap.
mpq_class brute_correlation(const TriadicSet& a, const TriadicSet& b, std::int64_t n, std::int64_t n_cap = 500);

// A_k as a set.
TriadicSet base_set(unsigned k);
// T^m A_k as a set, read from the stacking table.
TriadicSet cell_set(unsigned k, std::int64_t m);

// d_l' by enumerating ternary prefixes of length `depth`, refining any cell
// whose orbit reads past its prefix; hard cap 64 digits.
ReturnDistribution brute_dl(unsigned k, std::uint64_t l, unsigned depth = 4);

// Polynomial in phi: c_0 + c_1 phi + ..., applied to D_0.
struct PhiPolynomial {
  std::vector<mpq_class> coeffs;
  mpq_class coefficient_sum() const;
  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
  friend bool operator==(const PhiPolynomial&, const PhiPolynomial&) = default;
};

PhiPolynomial phi_repr(std::uint64_t l);
// (phi/3 + 2/3)^n
PhiPolynomial lazy_polynomial(std::uint64_t n);
// Prefix sums of f never exceed those of g (missing coefficients are 0).
bool precedes(const PhiPolynomial& f, const PhiPolynomial& g);
// The step function f(phi) D_0 on the half-cell lattice.
HalfGridFunction phi_apply(const PhiPolynomial& f);
// Distribution of the (1/6, 2/3, 1/6) walk after n steps at m = -n..n.
std::vector<mpq_class> lazy_walk(std::uint64_t n);

}  // namespace chacon::oracle
