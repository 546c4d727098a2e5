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

// Exact arithmetic on triadic rationals p/3^m, ternary digit words and finite
// unions of half-open triadic intervals. No floating point is used here except
// in the explicit to_double() conversions.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chacon {

// 3^e as a big integer. Small exponents come from a shared table.
const mpz_class& pow3(unsigned e);

// A signed exact rational whose denominator is a power of three, kept in
// lowest terms: the numerator is not divisible by 3 unless the value is 0, in
// which case the exponent is 0 as well.
class Triadic {
 public:
  Triadic() = default;
  Triadic(mpz_class numerator, unsigned exponent);
  static Triadic integer(long value) { return Triadic(mpz_class(value), 0); }

  const mpz_class& numerator() const noexcept { return num_; }
  unsigned exponent() const noexcept { return exp_; }
  bool is_zero() const noexcept { return num_ == 0; }
  int sign() const noexcept { return sgn(num_); }

  mpq_class to_rational() const;
  double to_double() const;

  // Numerator when the value is written over 3^e; e must be >= exponent().
  mpz_class numerator_at(unsigned e) const;

  // "p/3^m", or "p" when m = 0.
  std::string str() const;
  // Accepts "p/3^m", "p/q" with q a power of 3, an integer, or a ternary
  // fraction "0.a1a2...". Throws InputError.
  static Triadic parse(std::string_view text);

  Triadic operator-() const { return Triadic(-num_, exp_); }
  friend Triadic operator+(const Triadic& a, const Triadic& b);
  friend Triadic operator-(const Triadic& a, const Triadic& b);
  Triadic& operator+=(const Triadic& o) { return *this = *this + o; }
  Triadic& operator-=(const Triadic& o) { return *this = *this - o; }
  Triadic times(long factor) const;
  // value / 3^e
  Triadic shrink(unsigned e) const { return Triadic(num_, exp_ + e); }

  friend bool operator==(const Triadic& a, const Triadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Triadic& a, const Triadic& b);

 private:
  mpz_class num_{0};
  unsigned exp_ = 0;
};

// A point of [0,1) with triadic coordinate.
class TriadicRational {
 public:
  TriadicRational() = default;
  // Throws DomainError unless 0 <= value < 1.
  explicit TriadicRational(Triadic value);

  const Triadic& value() const noexcept { return v_; }
  const mpz_class& numerator() const noexcept { return v_.numerator(); }
  unsigned exponent() const noexcept { return v_.exponent(); }
  std::string str() const { return v_.str(); }

  friend bool operator==(const TriadicRational&, const TriadicRational&) = default;
  friend std::strong_ordering operator<=>(const TriadicRational& a, const TriadicRational& b) {
    return a.v_ <=> b.v_;
  }

 private:
  Triadic v_;
};

// Canonical form of numerator/3^exponent; requires 0 <= numerator <= 3^exponent
// and throws DomainError when the value is >= 1.
TriadicRational normalize(const mpz_class& numerator, unsigned exponent);

// x + shift, throwing DomainError when the result leaves [0,1).
TriadicRational translate(const TriadicRational& x, const Triadic& shift);

// A finite ternary digit string 0.a1a2...am with implicit trailing zeros.
class TernaryWord {
 public:
  TernaryWord() = default;
  explicit TernaryWord(std::vector<std::uint8_t> digits);
  // Parses "0.a1a2..." or the bare digit string "a1a2...".
  static TernaryWord parse(std::string_view text);
  static TernaryWord from_rational(const TriadicRational& x);

  std::span<const std::uint8_t> digits() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  // Digit i (0-based) with the trailing-zero convention.
  std::uint8_t digit(std::size_t i) const noexcept { return i < digits_.size() ? digits_[i] : 0; }

  TriadicRational to_rational() const;
  // Same value, trailing zeros removed.
  TernaryWord canonical() const;
  // The digit string without the leading "0.".
  std::string digit_string() const;
  std::string str() const { return "0." + digit_string(); }

  friend bool operator==(const TernaryWord&, const TernaryWord&) = default;

 private:
  std::vector<std::uint8_t> digits_;
};

// Half-open [lo, hi) with 0 <= lo < hi <= 1.
struct TriadicInterval {
  Triadic lo;
  Triadic hi;

  TriadicInterval() = default;
  TriadicInterval(Triadic lo_, Triadic hi_);  // validates
  Triadic length() const { return hi - lo; }
  bool contains(const Triadic& x) const { return lo <= x && x < hi; }
  std::string str() const { return "[" + lo.str() + ", " + hi.str() + ")"; }

  friend bool operator==(const TriadicInterval&, const TriadicInterval&) = default;
};

// Finite union of triadic intervals in merged canonical form: sorted, pairwise
// disjoint and non-adjacent, so equality is structural.
class TriadicSet {
 public:
  TriadicSet() = default;
  // Accepts any intervals (overlapping, unsorted) and canonicalizes them.
  explicit TriadicSet(std::vector<TriadicInterval> intervals);
  static TriadicSet interval(Triadic lo, Triadic hi) {
    return TriadicSet({TriadicInterval(std::move(lo), std::move(hi))});
  }
  static TriadicSet unit() { return interval(Triadic::integer(0), Triadic::integer(1)); }

  const std::vector<TriadicInterval>& intervals() const noexcept { return iv_; }
  bool empty() const noexcept { return iv_.empty(); }
  bool contains(const Triadic& x) const;
  // Largest exponent over all endpoints.
  unsigned max_exponent() const;
  std::string str() const;

  friend bool operator==(const TriadicSet&, const TriadicSet&) = default;

 private:
  std::vector<TriadicInterval> iv_;
};

enum class SetOp { kUnion, kIntersect, kDifference, kSymmetricDifference };

TriadicSet set_algebra(const TriadicSet& a, const TriadicSet& b, SetOp op);
inline TriadicSet operator|(const TriadicSet& a, const TriadicSet& b) { return set_algebra(a, b, SetOp::kUnion); }
inline TriadicSet operator&(const TriadicSet& a, const TriadicSet& b) { return set_algebra(a, b, SetOp::kIntersect); }
inline TriadicSet operator-(const TriadicSet& a, const TriadicSet& b) { return set_algebra(a, b, SetOp::kDifference); }
inline TriadicSet operator^(const TriadicSet& a, const TriadicSet& b) { return set_algebra(a, b, SetOp::kSymmetricDifference); }

// Lebesgue measure; exact.
Triadic measure(const TriadicSet& a);

// Indices p of the cells [p 3^-m, (p+1) 3^-m) whose union is `a`. Throws
// RefinementError if an endpoint needs more than m ternary digits, and
// ResourceCapError for m > 40.
std::vector<std::uint64_t> refine_to_level(const TriadicSet& a, unsigned m);

}  // namespace chacon
