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

#include "chacon/oracle.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <mutex>

#include "chacon/error.hpp"

namespace chacon::oracle {

namespace {

std::int64_t ipow3(unsigned e) {
  if (e > 39) throw ResourceCapError("oracle resolution 3^" + std::to_string(e) + " exceeds 64 bits");
  std::int64_t p = 1;
  for (unsigned i = 0; i < e; ++i) p *= 3;
  return p;
}

std::int64_t height_of(unsigned K) {
  std::int64_t h = 1;
  for (unsigned i = 0; i < K; ++i) h = 3 * h + 1;
  return h;
}

}  // namespace

class TableBuilder {
 public:
  static const StackingTable& get(unsigned K) {
    if (K > kMaxTableStage) {
      throw ResourceCapError("stacking table for stage " + std::to_string(K) + " above cap " +
                             std::to_string(kMaxTableStage));
    }
    static std::mutex mu;
    static std::vector<std::unique_ptr<StackingTable>> tables;
    std::lock_guard lock(mu);
    while (tables.size() <= K) {
      unsigned s = static_cast<unsigned>(tables.size());
      auto t = std::unique_ptr<StackingTable>(new StackingTable(s));
      if (s == 0) {
        t->start_ = {0};
      } else {
        // Units shrink by 3: left, middle thirds, the spacer piece cut from the
        // reservoir at 1 - 3^{-s}, then right thirds.
        const auto& prev = tables.back()->start_;
        const auto h = prev.size();
        t->start_.reserve(3 * h + 1);
        for (auto x : prev) t->start_.push_back(3 * x);
        for (auto x : prev) t->start_.push_back(3 * x + 2);
        t->start_.push_back(static_cast<std::int32_t>(ipow3(s + 1) - 3));
        for (auto x : prev) t->start_.push_back(3 * x + 4);
      }
      t->level_.assign(t->start_.size(), -1);
      for (std::size_t j = 0; j < t->start_.size(); ++j) t->level_[t->start_[j] / 2] = static_cast<std::int32_t>(j);
      tables.push_back(std::move(t));
    }
    return *tables[K];
  }
};

const StackingTable& StackingTable::stage(unsigned K) { return TableBuilder::get(K); }

namespace {

std::vector<Piece> to_pieces(const TriadicSet& a, unsigned R) {
  std::vector<Piece> out;
  for (const auto& iv : a.intervals()) {
    out.push_back({iv.lo.numerator_at(R).get_si(), iv.hi.numerator_at(R).get_si()});
  }
  return out;
}

TriadicSet from_pieces(std::vector<Piece> ps, unsigned R) {
  std::vector<TriadicInterval> iv;
  iv.reserve(ps.size());
  for (const auto& p : ps) iv.emplace_back(Triadic(p.lo, R), Triadic(p.hi, R));
  return TriadicSet(std::move(iv));
}

// |B & [x, y)| for sorted disjoint pieces, via prefix sums.
class MeasureIndex {
 public:
  explicit MeasureIndex(std::vector<Piece> b) : b_(std::move(b)) {
    std::sort(b_.begin(), b_.end(), [](const Piece& p, const Piece& q) { return p.lo < q.lo; });
    cum_.push_back(0);
    for (const auto& p : b_) cum_.push_back(cum_.back() + p.size());
  }
  std::int64_t below(std::int64_t x) const {
    auto it = std::upper_bound(b_.begin(), b_.end(), x, [](std::int64_t v, const Piece& p) { return v < p.lo; });
    std::size_t i = static_cast<std::size_t>(it - b_.begin());
    if (i == 0) return 0;
    const Piece& p = b_[i - 1];
    return cum_[i - 1] + std::min(x, p.hi) - p.lo;
  }
  std::int64_t within(std::int64_t x, std::int64_t y) const { return below(y) - below(x); }

 private:
  std::vector<Piece> b_;
  std::vector<std::int64_t> cum_;
};

}  // namespace

// ------------------------------------------------------------ pushforward

PushforwardState PushforwardState::start(const TriadicSet& a, unsigned max_stage) {
  PushforwardState s;
  s.max_stage = max_stage;
  s.resolution = std::max(a.max_exponent(), max_stage + 1);
  StackingTable::stage(max_stage);  // validates the cap early
  for (const auto& p : to_pieces(a, s.resolution)) s.pieces.emplace_back(p, p);
  return s;
}

std::int64_t PushforwardState::image_measure() const {
  std::int64_t m = 0;
  for (const auto& [src, img] : pieces) m += img.size();
  return m;
}

TriadicSet PushforwardState::image() const {
  std::vector<Piece> ps;
  for (const auto& pr : pieces) ps.push_back(pr.second);
  return from_pieces(std::move(ps), resolution);
}

PushforwardState pushforward_step(const PushforwardState& state) {
  const unsigned R = state.resolution;
  PushforwardState next = state;
  next.pieces.clear();
  next.steps = state.steps + 1;

  using Pair = std::pair<Piece, Piece>;
  std::vector<Pair> pending = state.pieces;
  for (unsigned K = 0; K <= state.max_stage && !pending.empty(); ++K) {
    const StackingTable& tab = StackingTable::stage(K);
    const std::int64_t unit = ipow3(R - K - 1);
    const std::int64_t w = 2 * unit;
    const std::int64_t rem = tab.height() * w;
    std::vector<Pair> carry;
    for (const auto& [src, img] : pending) {
      auto emit = [&](std::int64_t lo, std::int64_t hi, bool moved, std::int64_t delta) {
        Piece s{src.lo + (lo - img.lo), src.lo + (hi - img.lo)};
        if (moved) {
          next.pieces.emplace_back(s, Piece{lo + delta, hi + delta});
        } else {
          carry.emplace_back(s, Piece{lo, hi});
        }
      };
      if (img.hi > rem) emit(std::max(img.lo, rem), img.hi, false, 0);
      for (std::int64_t c = img.lo / w; c * w < std::min(img.hi, rem); ++c) {
        std::int64_t lo = std::max(img.lo, c * w), hi = std::min(img.hi, (c + 1) * w);
        std::int64_t j = tab.level_of_cell(c);
        if (j + 1 < tab.height()) {
          emit(lo, hi, true, tab.start(j + 1) * unit - c * w);
        } else {
          emit(lo, hi, false, 0);
        }
      }
    }
    pending = std::move(carry);
    if (next.pieces.size() + pending.size() > state.fragment_cap) {
      throw ResourceCapError("pushforward fragment cap exceeded");
    }
  }
  for (const auto& [src, img] : pending) next.residual += img.size();

  // Merge neighbours that stay neighbours on both sides.
  std::sort(next.pieces.begin(), next.pieces.end(),
            [](const Pair& a, const Pair& b) { return a.first.lo < b.first.lo; });
  std::vector<Pair> merged;
  for (const auto& pr : next.pieces) {
    if (!merged.empty() && merged.back().first.hi == pr.first.lo && merged.back().second.hi == pr.second.lo) {
      merged.back().first.hi = pr.first.hi;
      merged.back().second.hi = pr.second.hi;
    } else {
      merged.push_back(pr);
    }
  }
  next.pieces = std::move(merged);
  return next;
}

// ---------------------------------------------------------- correlation

TriadicSet base_set(unsigned k) { return TriadicSet::interval(Triadic::integer(0), Triadic(2, k + 1)); }

TriadicSet cell_set(unsigned k, std::int64_t m) {
  const StackingTable& tab = StackingTable::stage(k);
  if (m < 0 || m >= tab.height()) throw InputError("cell level out of range");
  std::int64_t s = tab.start(m);
  return TriadicSet::interval(Triadic(s, k + 1), Triadic(s + 2, k + 1));
}

mpq_class brute_correlation(const TriadicSet& a_in, const TriadicSet& b_in, std::int64_t n, std::int64_t n_cap) {
  if (n > n_cap || n < -n_cap) throw ResourceCapError("oracle time " + std::to_string(n) + " above cap");
  const TriadicSet* a = &a_in;
  const TriadicSet* b = &b_in;
  if (n == 0) return measure(a_in & b_in).to_rational();
  if (n < 0) {
    std::swap(a, b);
    n = -n;
  }
  unsigned M = std::max(a->max_exponent(), b->max_exponent());
  unsigned K0 = 0;
  while (height_of(K0) <= n) ++K0;
  const unsigned K_last = std::max(M, K0 + 1) + 3;
  const unsigned R = K_last + 1;
  StackingTable::stage(K_last);

  MeasureIndex bidx(to_pieces(*b, R));
  std::vector<Piece> pending = to_pieces(*a, R);
  std::vector<std::int64_t> hit(K_last + 1, 0);

  // Below K0 the tower is at most n high, so nothing is decided there.
  for (unsigned K = K0; K <= K_last; ++K) {
    const StackingTable& tab = StackingTable::stage(K);
    const std::int64_t unit = ipow3(R - K - 1);
    const std::int64_t w = 2 * unit;
    const std::int64_t rem = tab.height() * w;
    std::vector<Piece> carry;
    for (const auto& p : pending) {
      if (p.hi > rem) carry.push_back({std::max(p.lo, rem), p.hi});
      for (std::int64_t c = p.lo / w; c * w < std::min(p.hi, rem); ++c) {
        std::int64_t lo = std::max(p.lo, c * w), hi = std::min(p.hi, (c + 1) * w);
        std::int64_t j = tab.level_of_cell(c);
        if (j + n < tab.height()) {
          std::int64_t delta = tab.start(j + n) * unit - c * w;
          hit[K] += bidx.within(lo + delta, hi + delta);
        } else {
          carry.push_back({lo, hi});
        }
      }
    }
    pending = std::move(carry);
  }
  // What is still undecided shrinks by 3 per stage; once three consecutive
  // stages show the exact 1/3 ratio the rest is a geometric tail.
  std::int64_t c2 = hit[K_last - 2], c1 = hit[K_last - 1], c0 = hit[K_last];
  if (c2 != 3 * c1 || c1 != 3 * c0) {
    throw RefinementError("brute_correlation: tail not geometric by stage " + std::to_string(K_last));
  }
  mpz_class total = 0;
  for (auto v : hit) total += v;
  mpq_class result(total * 2 + c0, mpz_class(2) * pow3(R));
  result.canonicalize();
  return result;
}

// --------------------------------------------------------------- brute d_l

ReturnDistribution brute_dl(unsigned k, std::uint64_t l, unsigned depth) {
  constexpr unsigned kHardCap = 64;
  if (depth > 12) throw ResourceCapError("brute_dl: initial depth above 12");
  const std::int64_t h = height_of(k);
  std::map<std::int64_t, mpq_class> dist;

  std::vector<std::vector<std::uint8_t>> stack;
  {
    std::int64_t count = ipow3(depth);
    for (std::int64_t c = 0; c < count; ++c) {
      std::vector<std::uint8_t> w(depth);
      std::int64_t x = c;
      for (unsigned i = depth; i-- > 0;) {
        w[i] = static_cast<std::uint8_t>(x % 3);
        x /= 3;
      }
      stack.push_back(std::move(w));
    }
  }
  // A step whose carry runs off the prefix reads the unread tail: its first
  // non-2 digit is 0 or 1 with conditional probability 1/2 each, so the
  // return is h or h + 1 and the prefix then reads all zeros. A second
  // carry-out sends the cell back for refinement.
  struct Branch {
    std::vector<std::uint8_t> d;
    std::uint64_t step = 0;
    std::int64_t t = 0;
    bool carried = false;
    mpq_class mass;
  };
  while (!stack.empty()) {
    std::vector<std::uint8_t> prefix = std::move(stack.back());
    stack.pop_back();
    mpz_class cells;
    mpz_ui_pow_ui(cells.get_mpz_t(), 3, prefix.size());
    std::vector<std::pair<std::int64_t, mpq_class>> hits;
    std::vector<Branch> todo{{prefix, 0, 0, false, mpq_class(1, cells)}};
    todo.back().mass.canonicalize();
    bool decided = true;
    while (decided && !todo.empty()) {
      Branch br = std::move(todo.back());
      todo.pop_back();
      bool split = false;
      for (; br.step < l; ++br.step) {
        auto& d = br.d;
        std::size_t idx = 0;
        while (idx < d.size() && d[idx] == 2) ++idx;
        if (idx == d.size()) {
          if (br.carried) {
            decided = false;
            break;
          }
          std::fill(d.begin(), d.end(), 0);
          for (int extra = 0; extra < 2; ++extra) {
            Branch child{d, br.step + 1, br.t + h + extra, true, br.mass / 2};
            todo.push_back(std::move(child));
          }
          split = true;
          break;
        }
        br.t += d[idx] == 0 ? h : h + 1;
        for (std::size_t z = 0; z < idx; ++z) d[z] = 0;
        ++d[idx];
      }
      if (decided && !split) hits.emplace_back(br.t, br.mass);
    }
    if (decided) {
      for (auto& [t, m] : hits) dist[t] += m;
      continue;
    }
    if (prefix.size() >= kHardCap) throw DepthExceededError("brute_dl: refinement passed 64 digits");
    for (std::uint8_t a = 0; a < 3; ++a) {
      auto child = prefix;
      child.push_back(a);
      stack.push_back(std::move(child));
    }
  }
  ReturnDistribution out;
  out.k = k;
  out.l = l;
  out.support_start = dist.begin()->first;
  std::int64_t end = dist.rbegin()->first;
  out.masses.assign(static_cast<std::size_t>(end - out.support_start + 1), mpq_class(0));
  for (const auto& [n, m] : dist) out.masses[static_cast<std::size_t>(n - out.support_start)] = m;
  return out;
}

// ---------------------------------------------------------- phi polynomials

mpq_class PhiPolynomial::coefficient_sum() const {
  mpq_class s = 0;
  for (const auto& c : coeffs) s += c;
  return s;
}

namespace {

PhiPolynomial lin(const PhiPolynomial& shifted_by_phi, const PhiPolynomial& plain) {
  PhiPolynomial out;
  out.coeffs.assign(std::max(shifted_by_phi.coeffs.size() + 1, plain.coeffs.size()), mpq_class(0));
  for (std::size_t i = 0; i < shifted_by_phi.coeffs.size(); ++i) out.coeffs[i + 1] += shifted_by_phi.coeffs[i] * 2 / 3;
  for (std::size_t i = 0; i < plain.coeffs.size(); ++i) out.coeffs[i] += plain.coeffs[i] / 3;
  while (out.coeffs.size() > 1 && out.coeffs.back() == 0) out.coeffs.pop_back();
  return out;
}

std::pair<PhiPolynomial, PhiPolynomial> repr_pair(std::uint64_t l) {
  if (l == 0) return {PhiPolynomial{{1}}, PhiPolynomial{{0, 1}}};
  auto [a, b] = repr_pair(l / 3);
  auto at = [](unsigned j, const PhiPolynomial& x, const PhiPolynomial& y) {
    if (j == 0) return x;
    if (j == 1) return lin(x, y);
    return lin(y, x);
  };
  unsigned j = static_cast<unsigned>(l % 3);
  PhiPolynomial cur = at(j, a, b);
  PhiPolynomial next = j < 2 ? at(j + 1, a, b) : b;
  return {std::move(cur), std::move(next)};
}

}  // namespace

PhiPolynomial phi_repr(std::uint64_t l) { return repr_pair(l).first; }

PhiPolynomial lazy_polynomial(std::uint64_t n) {
  PhiPolynomial p;
  p.coeffs.assign(n + 1, mpq_class(0));
  mpz_class binom = 1;
  for (std::uint64_t i = 0; i <= n; ++i) {
    // C(n,i) (1/3)^i (2/3)^{n-i} = C(n,i) 2^{n-i} / 3^n
    mpz_class two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, n - i);
    p.coeffs[i] = mpq_class(binom * two_pow, pow3(static_cast<unsigned>(n)));
    p.coeffs[i].canonicalize();
    binom = binom * (n - i) / (i + 1);
  }
  return p;
}

bool precedes(const PhiPolynomial& f, const PhiPolynomial& g) {
  std::size_t m = std::max(f.coeffs.size(), g.coeffs.size());
  mpq_class sf = 0, sg = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i < f.coeffs.size()) sf += f.coeffs[i];
    if (i < g.coeffs.size()) sg += g.coeffs[i];
    if (sf > sg) return false;
  }
  return true;
}

HalfGridFunction phi_apply(const PhiPolynomial& f) {
  // phi^i D_0 = D_0 convolved with the +-1/2 fair walk of i steps.
  const auto deg = static_cast<std::int64_t>(f.coeffs.empty() ? 0 : f.coeffs.size() - 1);
  std::int64_t lo = -1 - deg;
  std::vector<mpq_class> v(static_cast<std::size_t>(2 * deg + 2), mpq_class(0));
  std::vector<mpq_class> walk{1};  // walk[m] = P(position = -i + 2m) after i steps, positions in half-cells
  for (std::int64_t i = 0; i <= deg; ++i) {
    if (i > 0) {
      std::vector<mpq_class> nw(walk.size() + 1, mpq_class(0));
      for (std::size_t m = 0; m < walk.size(); ++m) {
        nw[m] += walk[m] / 2;
        nw[m + 1] += walk[m] / 2;
      }
      walk = std::move(nw);
    }
    const mpq_class& c = f.coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    for (std::size_t m = 0; m < walk.size(); ++m) {
      std::int64_t shift = -i + 2 * static_cast<std::int64_t>(m);
      // D_0 occupies half-cells -1 and 0.
      v[static_cast<std::size_t>(-1 + shift - lo)] += c * walk[m];
      v[static_cast<std::size_t>(shift - lo)] += c * walk[m];
    }
  }
  return HalfGridFunction(lo, std::move(v));
}

std::vector<mpq_class> lazy_walk(std::uint64_t n) {
  std::vector<mpq_class> p{1};
  const mpq_class side(1, 6), stay(2, 3);
  for (std::uint64_t s = 0; s < n; ++s) {
    std::vector<mpq_class> q(p.size() + 2, mpq_class(0));
    for (std::size_t m = 0; m < p.size(); ++m) {
      q[m] += p[m] * side;
      q[m + 1] += p[m] * stay;
      q[m + 2] += p[m] * side;
    }
    p = std::move(q);
  }
  return p;
}

}  // namespace chacon::oracle
