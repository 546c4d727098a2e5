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

#include "chacon/triadic.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "chacon/error.hpp"

namespace chacon {

namespace {

constexpr unsigned kPowTableSize = 256;

const std::vector<mpz_class>& pow3_table() {
  static const std::vector<mpz_class> table = [] {
    std::vector<mpz_class> t(kPowTableSize);
    t[0] = 1;
    for (unsigned i = 1; i < kPowTableSize; ++i) t[i] = t[i - 1] * 3;
    return t;
  }();
  return table;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

mpz_class parse_integer(const std::string& s) {
  if (s.empty()) throw InputError("empty integer");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw InputError("malformed integer '" + s + "'");
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
      throw InputError("malformed integer '" + s + "'");
    }
  }
  return mpz_class(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace

const mpz_class& pow3(unsigned e) {
  if (e < kPowTableSize) return pow3_table()[e];
  thread_local mpz_class scratch;
  mpz_ui_pow_ui(scratch.get_mpz_t(), 3, e);
  return scratch;
}

// ---------------------------------------------------------------- Triadic

Triadic::Triadic(mpz_class numerator, unsigned exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  // strip common factors of three
  while (exp_ > 0 && mpz_divisible_ui_p(num_.get_mpz_t(), 3)) {
    mpz_divexact_ui(num_.get_mpz_t(), num_.get_mpz_t(), 3);
    --exp_;
  }
}

mpq_class Triadic::to_rational() const {
  mpq_class q(num_, pow3(exp_));
  q.canonicalize();
  return q;
}

double Triadic::to_double() const { return to_rational().get_d(); }

mpz_class Triadic::numerator_at(unsigned e) const {
  if (e < exp_) throw RefinementError("numerator_at: exponent below value's own");
  return num_ * pow3(e - exp_);
}

std::string Triadic::str() const {
  if (exp_ == 0) return num_.get_str();
  return num_.get_str() + "/3^" + std::to_string(exp_);
}

Triadic Triadic::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw InputError("empty triadic value");
  if (s.rfind("0.", 0) == 0 && s.find('/') == std::string::npos) {
    return TernaryWord::parse(s).to_rational().value();
  }
  auto slash = s.find('/');
  if (slash == std::string::npos) return Triadic(parse_integer(s), 0);
  mpz_class num = parse_integer(trim(s.substr(0, slash)));
  std::string den = trim(s.substr(slash + 1));
  if (den.rfind("3^", 0) == 0) {
    mpz_class e = parse_integer(den.substr(2));
    if (e < 0 || e > 100000) throw InputError("exponent out of range in '" + s + "'");
    return Triadic(num, static_cast<unsigned>(e.get_ui()));
  }
  mpz_class d = parse_integer(den);
  if (d <= 0) throw InputError("denominator must be positive in '" + s + "'");
  unsigned e = 0;
  while (d > 1 && mpz_divisible_ui_p(d.get_mpz_t(), 3)) {
    mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), 3);
    ++e;
  }
  if (d != 1) throw InputError("denominator is not a power of 3 in '" + s + "'");
  return Triadic(num, e);
}

Triadic operator+(const Triadic& a, const Triadic& b) {
  unsigned e = std::max(a.exp_, b.exp_);
  return Triadic(a.numerator_at(e) + b.numerator_at(e), e);
}

Triadic operator-(const Triadic& a, const Triadic& b) {
  unsigned e = std::max(a.exp_, b.exp_);
  return Triadic(a.numerator_at(e) - b.numerator_at(e), e);
}

Triadic Triadic::times(long factor) const { return Triadic(num_ * factor, exp_); }

std::strong_ordering operator<=>(const Triadic& a, const Triadic& b) {
  unsigned e = std::max(a.exp_, b.exp_);
  int c = cmp(a.numerator_at(e), b.numerator_at(e));
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// --------------------------------------------------------- TriadicRational

TriadicRational::TriadicRational(Triadic value) : v_(std::move(value)) {
  if (v_.sign() < 0 || v_ >= Triadic::integer(1)) {
    throw DomainError("triadic point " + v_.str() + " is outside [0,1)");
  }
}

TriadicRational normalize(const mpz_class& numerator, unsigned exponent) {
  if (numerator < 0 || numerator > pow3(exponent)) {
    throw DomainError("normalize: numerator outside [0, 3^m]");
  }
  return TriadicRational(Triadic(numerator, exponent));
}

TriadicRational translate(const TriadicRational& x, const Triadic& shift) {
  return TriadicRational(x.value() + shift);
}

// ------------------------------------------------------------- TernaryWord

TernaryWord::TernaryWord(std::vector<std::uint8_t> digits) : digits_(std::move(digits)) {
  for (auto d : digits_) {
    if (d > 2) throw InputError("ternary digit out of range");
  }
}

TernaryWord TernaryWord::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.rfind("0.", 0) == 0) s = s.substr(2);
  std::vector<std::uint8_t> d;
  d.reserve(s.size());
  for (char c : s) {
    if (c < '0' || c > '2') throw InputError("not a ternary word: '" + std::string(text) + "'");
    d.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return TernaryWord(std::move(d));
}

TernaryWord TernaryWord::from_rational(const TriadicRational& x) {
  std::vector<std::uint8_t> d(x.exponent(), 0);
  mpz_class n = x.numerator();
  for (std::size_t i = d.size(); i-- > 0;) {
    d[i] = static_cast<std::uint8_t>(mpz_fdiv_q_ui(n.get_mpz_t(), n.get_mpz_t(), 3));
  }
  return TernaryWord(std::move(d));
}

TriadicRational TernaryWord::to_rational() const {
  mpz_class n = 0;
  for (auto d : digits_) n = n * 3 + d;
  return TriadicRational(Triadic(n, static_cast<unsigned>(digits_.size())));
}

TernaryWord TernaryWord::canonical() const {
  auto d = digits_;
  while (!d.empty() && d.back() == 0) d.pop_back();
  return TernaryWord(std::move(d));
}

std::string TernaryWord::digit_string() const {
  std::string s;
  s.reserve(digits_.size());
  for (auto d : digits_) s.push_back(static_cast<char>('0' + d));
  return s;
}

// ------------------------------------------------------- TriadicInterval/Set

TriadicInterval::TriadicInterval(Triadic lo_, Triadic hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.sign() < 0 || !(lo < hi) || hi > Triadic::integer(1)) {
    throw DomainError("invalid triadic interval [" + lo.str() + ", " + hi.str() + ")");
  }
}

TriadicSet::TriadicSet(std::vector<TriadicInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const TriadicInterval& a, const TriadicInterval& b) { return a.lo < b.lo; });
  for (auto& iv : intervals) {
    if (!iv_.empty() && iv.lo <= iv_.back().hi) {
      if (iv.hi > iv_.back().hi) iv_.back().hi = std::move(iv.hi);
    } else {
      iv_.push_back(std::move(iv));
    }
  }
}

bool TriadicSet::contains(const Triadic& x) const {
  auto it = std::upper_bound(iv_.begin(), iv_.end(), x,
                             [](const Triadic& v, const TriadicInterval& iv) { return v < iv.lo; });
  if (it == iv_.begin()) return false;
  return std::prev(it)->contains(x);
}

unsigned TriadicSet::max_exponent() const {
  unsigned e = 0;
  for (const auto& iv : iv_) e = std::max({e, iv.lo.exponent(), iv.hi.exponent()});
  return e;
}

std::string TriadicSet::str() const {
  if (iv_.empty()) return "{}";
  std::string s;
  for (const auto& iv : iv_) {
    if (!s.empty()) s += " u ";
    s += iv.str();
  }
  return s;
}

TriadicSet set_algebra(const TriadicSet& a, const TriadicSet& b, SetOp op) {
  std::vector<Triadic> pts;
  pts.reserve(2 * (a.intervals().size() + b.intervals().size()));
  for (const auto* s : {&a, &b}) {
    for (const auto& iv : s->intervals()) {
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto keep = [op](bool in_a, bool in_b) {
    switch (op) {
      case SetOp::kUnion: return in_a || in_b;
      case SetOp::kIntersect: return in_a && in_b;
      case SetOp::kDifference: return in_a && !in_b;
      case SetOp::kSymmetricDifference: return in_a != in_b;
    }
    return false;
  };

  // Every elementary segment [pts[i], pts[i+1]) lies wholly inside or outside
  // each operand; advance one cursor per operand.
  std::vector<TriadicInterval> out;
  std::size_t ia = 0, ib = 0;
  const auto& av = a.intervals();
  const auto& bv = b.intervals();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Triadic& x = pts[i];
    while (ia < av.size() && av[ia].hi <= x) ++ia;
    while (ib < bv.size() && bv[ib].hi <= x) ++ib;
    bool in_a = ia < av.size() && av[ia].lo <= x;
    bool in_b = ib < bv.size() && bv[ib].lo <= x;
    if (!keep(in_a, in_b)) continue;
    if (!out.empty() && out.back().hi == x) {
      out.back().hi = pts[i + 1];
    } else {
      out.emplace_back(x, pts[i + 1]);
    }
  }
  return TriadicSet(std::move(out));
}

Triadic measure(const TriadicSet& a) {
  Triadic total;
  for (const auto& iv : a.intervals()) total += iv.length();
  return total;
}

std::vector<std::uint64_t> refine_to_level(const TriadicSet& a, unsigned m) {
  if (m > 40) throw ResourceCapError("refine_to_level: level above 40 does not fit 64-bit cell indices");
  std::vector<std::uint64_t> cells;
  for (const auto& iv : a.intervals()) {
    if (iv.lo.exponent() > m || iv.hi.exponent() > m) {
      throw RefinementError("refine_to_level: endpoint " +
                            (iv.lo.exponent() > m ? iv.lo : iv.hi).str() + " needs level above " +
                            std::to_string(m));
    }
    std::uint64_t lo = iv.lo.numerator_at(m).get_ui();
    std::uint64_t hi = iv.hi.numerator_at(m).get_ui();
    for (std::uint64_t p = lo; p < hi; ++p) cells.push_back(p);
  }
  return cells;
}

}  // namespace chacon
