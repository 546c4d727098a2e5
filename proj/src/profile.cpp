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

#include "chacon/profile.hpp"

#include <algorithm>
#include <map>

#include "chacon/correlation.hpp"
#include "chacon/error.hpp"

namespace chacon {

HalfGridFunction::HalfGridFunction(std::int64_t first_cell, std::vector<mpq_class> values)
    : lo_(first_cell), v_(std::move(values)) {}

mpq_class HalfGridFunction::at(std::int64_t cell) const {
  if (cell < lo_ || cell >= end_cell()) return 0;
  return v_[static_cast<std::size_t>(cell - lo_)];
}

HalfGridFunction HalfGridFunction::shifted(std::int64_t halves) const { return {lo_ + halves, v_}; }

mpq_class HalfGridFunction::integral() const {
  mpq_class s = 0;
  for (const auto& x : v_) s += x;
  return s / 2;
}

HalfGridFunction HalfGridFunction::trimmed() const {
  std::size_t b = 0, e = v_.size();
  while (b < e && v_[b] == 0) ++b;
  while (e > b && v_[e - 1] == 0) --e;
  return {lo_ + static_cast<std::int64_t>(b), std::vector<mpq_class>(v_.begin() + b, v_.begin() + e)};
}

bool operator==(const HalfGridFunction& a, const HalfGridFunction& b) {
  auto ta = a.trimmed();
  auto tb = b.trimmed();
  return (ta.v_.empty() && tb.v_.empty()) || (ta.lo_ == tb.lo_ && ta.v_ == tb.v_);
}

namespace {

template <class Op>
HalfGridFunction pointwise(const std::vector<HalfGridFunction>& fs, Op op) {
  if (fs.empty()) return {};
  std::int64_t lo = fs.front().first_cell(), hi = fs.front().end_cell();
  for (const auto& f : fs) {
    lo = std::min(lo, f.first_cell());
    hi = std::max(hi, f.end_cell());
  }
  std::vector<mpq_class> v(static_cast<std::size_t>(hi - lo));
  for (std::int64_t c = lo; c < hi; ++c) {
    mpq_class acc = fs.front().at(c);
    for (std::size_t i = 1; i < fs.size(); ++i) acc = op(acc, fs[i].at(c));
    v[static_cast<std::size_t>(c - lo)] = acc;
  }
  return {lo, std::move(v)};
}

}  // namespace

mpq_class l1_distance(const HalfGridFunction& f, const HalfGridFunction& g) {
  std::int64_t lo = std::min(f.first_cell(), g.first_cell());
  std::int64_t hi = std::max(f.end_cell(), g.end_cell());
  mpq_class s = 0;
  for (std::int64_t c = lo; c < hi; ++c) s += abs(f.at(c) - g.at(c));
  return s / 2;
}

HalfGridFunction pointwise_max(const std::vector<HalfGridFunction>& fs) {
  return pointwise(fs, [](const mpq_class& a, const mpq_class& b) { return a < b ? b : a; });
}

HalfGridFunction pointwise_min(const std::vector<HalfGridFunction>& fs) {
  return pointwise(fs, [](const mpq_class& a, const mpq_class& b) { return b < a ? b : a; });
}

HalfGridFunction profile_D(std::uint64_t l) {
  auto p = mass_pattern(l);
  const auto b = static_cast<std::int64_t>(p->masses.size());
  std::vector<mpq_class> v;
  v.reserve(2 * p->masses.size());
  for (const auto& m : p->masses) {
    v.push_back(m);
    v.push_back(m);
  }
  return {-b, std::move(v)};
}

namespace {

HalfGridFunction mix3(const HalfGridFunction& a, const HalfGridFunction& b, const HalfGridFunction& c) {
  auto sum = pointwise({a, b, c}, [](const mpq_class&, const mpq_class&) { return mpq_class(0); });
  std::vector<mpq_class> v(sum.values().size());
  for (std::int64_t cell = sum.first_cell(); cell < sum.end_cell(); ++cell) {
    v[static_cast<std::size_t>(cell - sum.first_cell())] = (a.at(cell) + b.at(cell) + c.at(cell)) / 3;
  }
  return HalfGridFunction(sum.first_cell(), std::move(v)).trimmed();
}

std::pair<HalfGridFunction, HalfGridFunction> profile_pair(std::uint64_t l) {
  if (l == 0) {
    return {HalfGridFunction(-1, {1, 1}), HalfGridFunction(-2, {mpq_class(1, 2), mpq_class(1, 2),
                                                                mpq_class(1, 2), mpq_class(1, 2)})};
  }
  auto [dl, dl1] = profile_pair(l / 3);
  auto at = [](unsigned j, const HalfGridFunction& x, const HalfGridFunction& y) {
    if (j == 0) return x;
    if (j == 1) return mix3(y, x.shifted(1), x.shifted(-1));
    return mix3(x, y.shifted(1), y.shifted(-1));
  };
  unsigned j = static_cast<unsigned>(l % 3);
  HalfGridFunction cur = at(j, dl, dl1);
  HalfGridFunction next = j < 2 ? at(j + 1, dl, dl1) : dl1;
  return {std::move(cur), std::move(next)};
}

}  // namespace

HalfGridFunction profile_D_by_recursion(std::uint64_t l) { return profile_pair(l).first; }

mpq_class profile_peak(std::uint64_t l) { return profile_D(l).at(0); }

mpq_class envelope_width(std::uint64_t l, unsigned p) {
  std::vector<HalfGridFunction> family;
  family.reserve(3 * (2 * p + 1));
  for (std::uint64_t j = 0; j <= 2; ++j) {
    HalfGridFunction d = profile_D(l + j);
    for (std::int64_t i = -static_cast<std::int64_t>(p); i <= static_cast<std::int64_t>(p); ++i) {
      family.push_back(d.shifted(i));
    }
  }
  return l1_distance(pointwise_max(family), pointwise_min(family));
}

}  // namespace chacon
