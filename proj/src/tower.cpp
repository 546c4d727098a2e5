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

#include "chacon/tower.hpp"

#include <vector>

#include "chacon/error.hpp"

namespace chacon {

namespace {

Triadic cell_width(unsigned k) { return Triadic(2, k + 1); }

// Walks the stage-by-stage address of one point. Advancing from stage s to
// s+1 is O(1) big-integer work, so scanning stages 0..K costs O(K).
class StageWalker {
 public:
  explicit StageWalker(const Triadic& x) {
    addr_.stage = 0;
    Triadic w0 = cell_width(0);
    if (x < w0) {
      addr_.level = 0;
      addr_.offset = x;
    } else {
      addr_.in_spacer_remainder = true;
      addr_.offset = x - w0;
    }
    h_ = 1;
  }

  const TowerAddress& address() const { return addr_; }
  const mpz_class& height() const { return h_; }

  void advance() {
    unsigned s = addr_.stage;
    Triadic w = cell_width(s + 1);
    if (addr_.in_spacer_remainder) {
      if (addr_.offset < w) {
        addr_.in_spacer_remainder = false;
        addr_.level = 2 * h_;
      } else {
        addr_.offset -= w;
      }
    } else {
      int third = 0;
      if (addr_.offset >= w.times(2)) {
        third = 2;
      } else if (addr_.offset >= w) {
        third = 1;
      }
      addr_.offset -= w.times(third);
      if (third == 1) addr_.level += h_;
      if (third == 2) addr_.level += 2 * h_ + 1;
    }
    h_ = 3 * h_ + 1;
    addr_.stage = s + 1;
  }

 private:
  TowerAddress addr_;
  mpz_class h_;
};

}  // namespace

mpz_class tower_height(unsigned k) { return (pow3(k + 1) - 1) / 2; }

std::int64_t tower_height_i64(unsigned k) {
  if (k > 38) throw ResourceCapError("stage " + std::to_string(k) + " height exceeds 64 bits");
  std::int64_t h = 1;
  for (unsigned i = 0; i < k; ++i) h = 3 * h + 1;
  return h;
}

TowerParams tower_params(unsigned k) {
  TowerParams p;
  p.k = k;
  p.height = tower_height(k);
  p.cell_width = cell_width(k);
  p.spacer_remainder = TriadicInterval(Triadic::integer(1) - Triadic(1, k + 1), Triadic::integer(1));
  return p;
}

std::string TowerAddress::str() const {
  if (in_spacer_remainder) {
    return "remainder(stage " + std::to_string(stage) + ", offset " + offset.str() + ")";
  }
  return "level " + level.get_str() + " of stage " + std::to_string(stage) + ", offset " + offset.str();
}

TriadicInterval level_interval(unsigned k, const mpz_class& j) {
  mpz_class h = tower_height(k);
  if (j < 0 || j >= h) {
    throw InputError("level " + j.get_str() + " outside [0, " + h.get_str() + ") at stage " + std::to_string(k));
  }
  // Peel stages from the top: each step tells which third of its parent level
  // the current level is, until we hit stage 0 or a freshly inserted spacer.
  std::vector<std::uint8_t> thirds(k + 1, 0);
  mpz_class level = j;
  unsigned s = k;
  Triadic base;
  for (;; --s) {
    if (s == 0) {
      base = Triadic::integer(0);
      break;
    }
    h = (h - 1) / 3;  // h_{s-1}
    if (level < h) {
      thirds[s] = 0;
    } else if (level < 2 * h) {
      thirds[s] = 1;
      level -= h;
    } else if (level == 2 * h) {
      base = Triadic::integer(1) - Triadic(1, s);
      break;
    } else {
      thirds[s] = 2;
      level -= 2 * h + 1;
    }
  }
  Triadic lo = base;
  for (unsigned t = s + 1; t <= k; ++t) {
    if (thirds[t]) lo += cell_width(t).times(thirds[t]);
  }
  Triadic hi = lo + cell_width(k);
  return TriadicInterval(lo, hi);
}

TowerAddress locate(const TriadicRational& x, unsigned k) {
  StageWalker walk(x.value());
  while (walk.address().stage < k) walk.advance();
  return walk.address();
}

TriadicRational apply_T(const TriadicRational& x, unsigned depth_cap) {
  StageWalker walk(x.value());
  for (;;) {
    const auto& a = walk.address();
    if (!a.in_spacer_remainder && a.level + 1 < walk.height()) {
      TriadicInterval up = level_interval(a.stage, a.level + 1);
      return TriadicRational(up.lo + a.offset);
    }
    if (a.stage >= depth_cap) {
      throw DepthExceededError("T(" + x.str() + ") undetermined up to stage " + std::to_string(depth_cap));
    }
    walk.advance();
  }
}

TriadicRational apply_T_inverse(const TriadicRational& x, unsigned depth_cap) {
  StageWalker walk(x.value());
  for (;;) {
    const auto& a = walk.address();
    if (!a.in_spacer_remainder && a.level > 0) {
      TriadicInterval down = level_interval(a.stage, a.level - 1);
      return TriadicRational(down.lo + a.offset);
    }
    if (a.stage >= depth_cap) {
      throw DepthExceededError("T^-1(" + x.str() + ") undetermined up to stage " + std::to_string(depth_cap));
    }
    walk.advance();
  }
}

TriadicRational apply_T_power(const TriadicRational& x, long long n, unsigned long long limit,
                              unsigned depth_cap) {
  unsigned long long steps = n < 0 ? 0ULL - static_cast<unsigned long long>(n) : static_cast<unsigned long long>(n);
  if (steps > limit) {
    throw InputError("power " + std::to_string(n) + " exceeds limit " + std::to_string(limit));
  }
  TriadicRational y = x;
  for (unsigned long long i = 0; i < steps; ++i) {
    y = n > 0 ? apply_T(y, depth_cap) : apply_T_inverse(y, depth_cap);
  }
  return y;
}

TriadicRational point_of_word(const TernaryWord& w, unsigned k) {
  return TriadicRational(w.to_rational().value().times(2).shrink(k + 1));
}

mpz_class first_return(const TernaryWord& w, unsigned k) {
  std::size_t i = 0;
  while (w.digit(i) == 2) ++i;
  mpz_class h = tower_height(k);
  return w.digit(i) == 0 ? h : h + 1;
}

TernaryWord induced_map(const TernaryWord& w) {
  // Leading 2s become 0s and the first non-2 digit goes up by one.
  std::vector<std::uint8_t> d(w.digits().begin(), w.digits().end());
  std::size_t i = 0;
  while (i < d.size() && d[i] == 2) d[i++] = 0;
  if (i == d.size()) d.push_back(0);
  ++d[i];
  return TernaryWord(std::move(d));
}

mpz_class lth_return_time(const TernaryWord& w, std::uint64_t l, unsigned k) {
  const mpz_class h = tower_height(k);
  mpz_class acc = 0;
  std::uint64_t L = l;
  for (std::size_t i = 0; L > 0; ++i) {
    std::uint64_t q = L / 3;
    unsigned r = static_cast<unsigned>(L % 3);
    unsigned a = w.digit(i);
    mpz_class ql = q;
    switch (r) {
      case 0:
        acc += 2 * ql * h + ql;
        break;
      case 1:
        if (a == 0) {
          acc += (2 * ql + 1) * h + ql;
        } else if (a == 1) {
          acc += (2 * ql + 1) * h + ql + 1;
        } else {
          acc += 2 * ql * h + ql;
          ++q;
        }
        break;
      default:
        if (a == 0) {
          acc += (2 * ql + 2) * h + ql + 1;
        } else if (a == 1) {
          acc += (2 * ql + 1) * h + ql + 1;
          ++q;
        } else {
          acc += (2 * ql + 1) * h + ql;
          ++q;
        }
        break;
    }
    L = q;
  }
  return acc;
}

mpz_class lth_return_time_orbit(const TernaryWord& w, std::uint64_t l, unsigned k) {
  mpz_class acc = 0;
  TernaryWord cur = w;
  for (std::uint64_t i = 0; i < l; ++i) {
    acc += first_return(cur, k);
    cur = induced_map(cur);
  }
  return acc;
}

}  // namespace chacon
