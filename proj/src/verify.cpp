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

#include "chacon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "chacon/correlation.hpp"
#include "chacon/error.hpp"
#include "chacon/exceptional.hpp"
#include "chacon/frozen_constants.hpp"
#include "chacon/oracle.hpp"
#include "chacon/profile.hpp"
#include "chacon/tower.hpp"

namespace chacon::verify {

using json = nlohmann::ordered_json;

namespace {

struct Ctx {
  std::mt19937_64 rng;
  std::string suite;
  Report* report;
  json* checks;

  void add(const std::string& name, bool pass, const std::string& detail, json extra = json::object()) {
    report->checks.push_back({suite, name, pass, detail});
    report->pass = report->pass && pass;
    json c;
    c["suite"] = suite;
    c["name"] = name;
    c["pass"] = pass;
    c["detail"] = detail;
    for (auto& [key, v] : extra.items()) c[key] = v;
    checks->push_back(std::move(c));
  }
};

std::string q(const mpq_class& x) { return x.get_str(); }

std::uint64_t u3(unsigned e) {
  std::uint64_t p = 1;
  while (e--) p *= 3;
  return p;
}

// "first failure" accumulator
struct Witness {
  std::uint64_t checked = 0;
  std::uint64_t failed = 0;
  std::string first;
  void fail(const std::string& w) {
    if (first.empty()) first = w;
    ++failed;
  }
  bool ok() const { return first.empty(); }
  std::string detail() const {
    if (ok()) return std::to_string(checked) + " cases";
    return std::to_string(failed) + " of " + std::to_string(checked) + " cases fail; first: " + first;
  }
};

ReturnDistribution expected_dl(std::int64_t start, std::vector<mpq_class> m) {
  ReturnDistribution d;
  d.k = 1;
  d.support_start = start;
  d.masses = std::move(m);
  return d;
}

// ------------------------------------------------------------------ suites

void suite_table(Ctx& ctx) {
  const mpq_class half(1, 2), sixth(1, 6), two_thirds(2, 3);
  std::vector<ReturnDistribution> want = {
      expected_dl(0, {1}),
      expected_dl(4, {half, half}),
      expected_dl(8, {sixth, two_thirds, sixth}),
      expected_dl(13, {half, half}),
  };
  for (std::uint64_t l = 0; l < want.size(); ++l) {
    want[l].l = l;
    auto got = compute_dl(1, l);
    ctx.add("dl k=1 l=" + std::to_string(l), got == want[l],
            "support starts at " + std::to_string(got.support_start) + ", " + std::to_string(got.masses.size()) +
                " masses");
  }
  auto d4 = oracle::brute_dl(1, 4, 8);
  auto want4 = expected_dl(17, {mpq_class(2, 9), mpq_class(5, 9), mpq_class(2, 9)});
  want4.l = 4;
  ctx.add("brute dl k=1 l=4 depth 8", d4 == want4 && d4 == compute_dl(1, 4),
          "2/9, 5/9, 2/9 at 17..19");
  ctx.add("c_1(0) = 2/9", autocorrelation(1, 0) == mpq_class(2, 9), q(autocorrelation(1, 0)));
  ctx.add("c_1(4) = 1/9", autocorrelation(1, 4) == mpq_class(1, 9), q(autocorrelation(1, 4)));
  ctx.add("mu(A_1) = 2/9", mu_Ak(1) == mpq_class(2, 9), q(mu_Ak(1)));
}

void suite_transform(Ctx& ctx) {
  // T against the stacking tables: level j maps onto level j + 1.
  {
    Witness w;
    std::uniform_int_distribution<unsigned> stage(1, 8);
    for (int i = 0; i < 300; ++i) {
      unsigned K = stage(ctx.rng);
      const auto& tab = oracle::StackingTable::stage(K);
      std::uniform_int_distribution<std::int64_t> lev(0, tab.height() - 2);
      std::int64_t j = lev(ctx.rng);
      // a point inside level j: start + 2 * u / 3^6 with u < 3^6, units 3^{-(K+1)}
      std::uniform_int_distribution<std::int64_t> off(0, 2 * 729 - 1);
      std::int64_t u = off(ctx.rng);
      Triadic x(mpz_class(static_cast<long>(tab.start(j) * 729 + u)), K + 7);
      Triadic y(mpz_class(static_cast<long>(tab.start(j + 1) * 729 + u)), K + 7);
      ++w.checked;
      if (apply_T(TriadicRational(x)).value() != y) w.fail("K=" + std::to_string(K) + " j=" + std::to_string(j));
    }
    ctx.add("T agrees with stacking tables", w.ok(), w.detail());
  }
  {
    Witness w;
    std::uniform_int_distribution<unsigned> expo(1, 14);
    for (int i = 0; i < 300; ++i) {
      unsigned m = expo(ctx.rng);
      // 0 is the one point without a preimage: it lies in every base A_k.
      std::uniform_int_distribution<std::uint64_t> num(1, u3(m) - 1);
      TriadicRational x = normalize(mpz_class(static_cast<unsigned long>(num(ctx.rng))), m);
      ++w.checked;
      if (apply_T_inverse(apply_T(x)) != x || apply_T(apply_T_inverse(x)) != x) w.fail(x.str());
    }
    ctx.add("T and T^-1 are inverse", w.ok(), w.detail());
    bool undetermined = false;
    try {
      (void)apply_T_inverse(TriadicRational());
    } catch (const DepthExceededError&) {
      undetermined = true;
    }
    ctx.add("T^-1(0) is undetermined", undetermined, "0 lies in every base");
  }
  {
    Witness w;
    std::uniform_int_distribution<int> digit(0, 2);
    std::uniform_int_distribution<std::uint64_t> steps(0, 40);
    for (int i = 0; i < 200; ++i) {
      std::vector<std::uint8_t> d(12);
      for (auto& x : d) x = static_cast<std::uint8_t>(digit(ctx.rng));
      if (std::all_of(d.begin(), d.end(), [](auto x) { return x == 2; })) d[0] = 0;
      TernaryWord word(d);
      std::uint64_t l = steps(ctx.rng);
      unsigned k = 1 + static_cast<unsigned>(i % 3);
      ++w.checked;
      try {
        if (lth_return_time(word, l, k) != lth_return_time_orbit(word, l, k)) w.fail(word.str());
      } catch (const DepthExceededError&) {
        --w.checked;  // orbit reads past the finite word
      }
    }
    ctx.add("digit recursion = orbit sum of first returns", w.ok(), w.detail());
  }
  {
    auto a = locate(TriadicRational(Triadic(1, 1)), 1);
    ctx.add("locate(1/3, 1)", !a.in_spacer_remainder && a.level == 1 && a.offset == Triadic(1, 2), a.str());
    auto t = apply_T(TriadicRational(Triadic(8, 2)));
    ctx.add("T(8/9) = 4/27", t.value() == Triadic(4, 3), t.str());
  }
  {
    Witness w;
    for (unsigned k = 1; k <= 2; ++k) {
      auto st = oracle::PushforwardState::start(oracle::base_set(k), 10);
      Triadic m0 = measure(oracle::base_set(k));
      for (int s = 0; s < 60; ++s) {
        st = oracle::pushforward_step(st);
        ++w.checked;
        if (Triadic(mpz_class(static_cast<long>(st.image_measure() + st.residual)), st.resolution) != m0) {
          w.fail("k=" + std::to_string(k) + " step " + std::to_string(s));
        }
      }
    }
    ctx.add("pushforward preserves measure", w.ok(), w.detail());
  }
}

void suite_oracle(Ctx& ctx) {
  {
    Witness w;
    for (unsigned k = 1; k <= 3; ++k) {
      for (std::uint64_t l = 0; l <= 200; ++l) {
        ++w.checked;
        if (oracle::brute_dl(k, l) != compute_dl(k, l)) w.fail("k=" + std::to_string(k) + " l=" + std::to_string(l));
      }
    }
    ctx.add("brute_dl = compute_dl, k<=3, l<=200", w.ok(), w.detail());
  }
  {
    Witness w;
    for (unsigned k = 1; k <= 3; ++k) {
      for (std::uint64_t l = 0; l <= 200; ++l) {
        ++w.checked;
        if (compute_dl_by_shifts(k, l) != compute_dl(k, l)) w.fail("k=" + std::to_string(k) + " l=" + std::to_string(l));
      }
    }
    ctx.add("shift recursion = mass pattern, k<=3, l<=200", w.ok(), w.detail());
  }
  {
    Witness w;
    for (unsigned k = 1; k <= 2; ++k) {
      auto a = oracle::base_set(k);
      for (std::int64_t n = 0; n <= 200; ++n) {
        ++w.checked;
        if (oracle::brute_correlation(a, a, n) != autocorrelation(k, n)) {
          w.fail("k=" + std::to_string(k) + " n=" + std::to_string(n));
        }
      }
    }
    ctx.add("brute_correlation = autocorrelation, k<=2, n<=200", w.ok(), w.detail());
  }
}

void suite_shape(Ctx& ctx) {
  Witness w;
  for (std::uint64_t l = 0; l < u3(7); ++l) {
    auto d = compute_dl(1, l);
    const auto& m = d.masses;
    ++w.checked;
    if (d.total() != 1) w.fail("sum l=" + std::to_string(l));
    if (!std::equal(m.begin(), m.end(), m.rbegin())) w.fail("palindrome l=" + std::to_string(l));
    std::size_t peak = 0;
    while (peak + 1 < m.size() && m[peak + 1] >= m[peak]) ++peak;
    for (std::size_t i = peak; i + 1 < m.size(); ++i) {
      if (m[i + 1] > m[i]) w.fail("unimodal l=" + std::to_string(l));
    }
    if (std::any_of(m.begin(), m.end(), [](const mpq_class& x) { return x <= 0; })) {
      w.fail("zero inside support l=" + std::to_string(l));
    }
  }
  ctx.add("d_l' sums to 1, palindromic, unimodal, l<3^7", w.ok(), w.detail());
}

void suite_ternary(Ctx& ctx) {
  {
    Witness w;
    for (std::uint64_t l = 0; l < u3(5); ++l) {
      ++w.checked;
      if (compute_bl(l) != compute_dl(1, l).masses.size()) w.fail("l=" + std::to_string(l));
    }
    ctx.add("b_l = number of masses, l<3^5", w.ok(), w.detail());
  }
  for (unsigned k = 1; k <= 2; ++k) {
    Witness w;
    const std::int64_t h = tower_height_i64(k);
    SupportIndex idx(k, u3(8));
    for (std::uint64_t l = 0; l < u3(8); ++l) {
      ++w.checked;
      std::string at = "l=" + std::to_string(l);
      Support sp{idx.s(l), idx.t(l)};
      if (static_cast<std::uint64_t>(sp.size()) != compute_bl(l)) w.fail("size " + at);
      if (sp != support_closed(k, l)) w.fail("closed form " + at);
      if (balanced_ternary(l).value() != l) w.fail("balanced ternary value " + at);
      std::uint64_t b = compute_bl(l), b1 = compute_bl(l + 1);
      if (b != b1 + 1 && b1 != b + 1) w.fail("|b_l - b_l+1| " + at);
      if (b > 4 * compute_bl(l / 3) || b > 4 * compute_bl(l / 3 + 1)) w.fail("b_l <= 4 b_l/3 " + at);
      std::int64_t ds = idx.s(l + 1) - idx.s(l), dt = idx.t(l + 1) - idx.t(l);
      if (ds < h || ds > h + 1 || dt < h || dt > h + 1) w.fail("increment " + at);
    }
    ctx.add("support recursion vs b_l, k=" + std::to_string(k) + ", l<3^8", w.ok(), w.detail());
  }
  {
    Witness w;
    for (std::uint64_t l = 0; l < 2000; l += 7) {
      ++w.checked;
      if (support(2, l) != support_closed(2, l)) w.fail("l=" + std::to_string(l));
    }
    ctx.add("support() = closed form, k=2", w.ok(), w.detail());
  }
}

void suite_counting(Ctx& ctx) {
  Witness strict, top;
  json rows = json::array();
  for (unsigned N = 0; N <= 10; ++N) {
    std::map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t mx = 0;
    for (std::uint64_t t = u3(N); t <= u3(N + 1); ++t) {
      std::uint64_t b = compute_bl(t);
      ++hist[b];
      mx = std::max(mx, b);
    }
    ++top.checked;
    if (mx != N + 3) top.fail("N=" + std::to_string(N) + " max " + std::to_string(mx));
    if (N <= 8) {
      for (auto [n, c] : hist) {
        mpz_class bound;
        mpz_ui_pow_ui(bound.get_mpz_t(), N + 2, n);
        ++strict.checked;
        if (!(mpz_class(static_cast<unsigned long>(c)) < bound)) {
          strict.fail("N=" + std::to_string(N) + " b=" + std::to_string(n));
        }
      }
    }
    rows.push_back({{"N", N}, {"max_b", mx}});
  }
  ctx.add("#{t in block: b_t = n} < (N+2)^n, N<=8", strict.ok(), strict.detail());
  ctx.add("max b_t over block = N+3, N<=10", top.ok(), top.detail(), {{"blocks", rows}});
}

void suite_pn(Ctx& ctx) {
  for (unsigned k = 1; k <= 2; ++k) {
    Witness member, lower, upper;
    const std::int64_t h = tower_height_i64(k);
    for (std::int64_t n = 1; n <= 100000; ++n) {
      IndexRange p = find_Pn(k, n);
      std::string at = "n=" + std::to_string(n);
      // membership against the closed-form supports on both sides
      ++member.checked;
      if (!p.empty()) {
        for (std::uint64_t l = p.lo; l <= p.hi; ++l) {
          Support sp = support_closed(k, l);
          if (n < sp.s || n > sp.t) member.fail("member " + at);
        }
      }
      // nothing adjacent to the range (or near n/h when empty) covers n
      std::uint64_t lo = p.empty() ? static_cast<std::uint64_t>(n / (h + 1)) : p.lo;
      std::uint64_t hi = p.empty() ? static_cast<std::uint64_t>(n / h) + 1 : p.hi;
      for (std::uint64_t l = lo > 2 ? lo - 2 : 0; l <= hi + 2; ++l) {
        if (!p.empty() && l >= p.lo && l <= p.hi) continue;
        Support sp = support_closed(k, l);
        if (sp.s <= n && n <= sp.t) member.fail("unlisted " + at);
      }
      if (p.empty()) continue;
      const auto size = static_cast<std::int64_t>(p.size());
      for (std::uint64_t m = p.lo; m <= p.hi; ++m) {
        const auto b = static_cast<std::int64_t>(compute_bl(m));
        const std::string why = at + " m=" + std::to_string(m) + " b_m=" + std::to_string(b) +
                                " |P_n|=" + std::to_string(size);
        // (b-1)/(h+3/2) < |P|  and  |P| < b/(h-1/2) + 1
        ++lower.checked;
        if (!(2 * (b - 1) < size * (2 * h + 3))) lower.fail(why);
        ++upper.checked;
        if (!((size - 1) * (2 * h - 1) < 2 * b)) upper.fail(why);
      }
    }
    const std::string kk = "k=" + std::to_string(k) + ", n<=10^5";
    ctx.add("P_n equals the l with n in [s_l, t_l], " + kk, member.ok(), member.detail());
    ctx.add("(b_m-1)/(h_k+3/2) < |P_n|, " + kk, lower.ok(), lower.detail());
    ctx.add("|P_n| < b_m/(h_k-1/2) + 1, " + kk, upper.ok(), upper.detail());
  }
}

void suite_constants(Ctx& ctx) {
  const auto& fc = frozen_constants();
  {
    bool ok = fc.C1 * fc.C1 >= fc.headroom * fc.headroom * fc.max_C1_sq &&
              fc.C2 * fc.C2 >= fc.headroom * fc.headroom * fc.max_C2_sq &&
              fc.C3 * fc.C3 >= fc.headroom * fc.headroom * fc.max_C3_sq && fc.C_star >= 1;
    ctx.add("constants carry headroom over recorded maxima", ok, "headroom " + q(fc.headroom));
  }
  {
    SweepResult r = sweep_profile_constants(fc.sweep_l_end, fc.sweep_p_max);
    bool ok = r.max_C1_sq == fc.max_C1_sq && r.max_C2_sq == fc.max_C2_sq && r.max_C3_sq == fc.max_C3_sq;
    ctx.add("sweep reproduces recorded maxima", ok,
            q(r.max_C1_sq) + ", " + q(r.max_C2_sq) + ", " + q(r.max_C3_sq));
  }
  {
    Witness w1, w2, w3;
    mpq_class worst1 = 0, worst2 = 0;
    for (std::uint64_t l = 0; l < u3(7); ++l) {
      const mpq_class b(mpz_class(static_cast<unsigned long>(compute_bl(l))));
      HalfGridFunction d = profile_D(l);
      ++w1.checked;
      if (!(d == profile_D_by_recursion(l))) w3.fail("l=" + std::to_string(l));
      mpq_class v1 = d.at(0) * d.at(0) * b;
      worst1 = std::max(worst1, v1);
      if (v1 > fc.C1 * fc.C1) w1.fail("l=" + std::to_string(l));
      mpq_class diff = l1_distance(profile_D(l + 1), d);
      mpq_class v2 = diff * diff * b;
      worst2 = std::max(worst2, v2);
      ++w2.checked;
      if (v2 > fc.C2 * fc.C2) w2.fail("l=" + std::to_string(l));
    }
    w3.checked = w1.checked;
    ctx.add("profile D_l: mass pattern = D recursion, l<3^7", w3.ok(), w3.detail());
    ctx.add("H_l sqrt(b_l) <= C1*, l<3^7", w1.ok(), w1.detail() + "; max square " + q(worst1));
    ctx.add("|D_l+1 - D_l|_1 sqrt(b_l) <= C2*, l<3^7", w2.ok(), w2.detail() + "; max square " + q(worst2));
  }
  {
    Witness w;
    for (std::uint64_t l = 0; l < u3(4); ++l) {
      const mpq_class b(mpz_class(static_cast<unsigned long>(compute_bl(l))));
      for (unsigned p = 1; p <= 4; ++p) {
        mpq_class width = envelope_width(l, p);
        ++w.checked;
        if (width * width * b > fc.C3 * fc.C3 * (p * p)) w.fail("l=" + std::to_string(l) + " p=" + std::to_string(p));
      }
    }
    ctx.add("envelope width sqrt(b_l) <= C3* p, p<=4, l<3^4", w.ok(), w.detail());
  }
}

void suite_majorization(Ctx& ctx) {
  Witness order, peak, sum, repr;
  for (std::uint64_t l = 0; l <= u3(5); ++l) {
    std::string at = "l=" + std::to_string(l);
    auto f = oracle::phi_repr(l);
    const std::uint64_t b = compute_bl(l);
    auto g = oracle::lazy_polynomial(b - 1);
    ++order.checked;
    if (!oracle::precedes(f, g)) order.fail(at);
    ++peak.checked;
    if (profile_D(l).at(0) > oracle::phi_apply(g).at(0)) peak.fail(at);
    ++sum.checked;
    if (f.coefficient_sum() != 1) sum.fail(at);
    ++repr.checked;
    if (f.degree() != b - 1 || f.coeffs.back() == 0 || !(oracle::phi_apply(f) == profile_D(l))) repr.fail(at);
  }
  ctx.add("D_l precedes F_{b_l-1}, l<=3^5", order.ok(), order.detail());
  ctx.add("D_l(0) <= F_{b_l-1}(0), l<=3^5", peak.ok(), peak.detail());
  ctx.add("phi coefficients sum to 1, l<=3^5", sum.ok(), sum.detail());
  ctx.add("phi representation reproduces D_l, degree b_l-1", repr.ok(), repr.detail());
  // Under the prefix-sum order D_1 and D_2 are incomparable (0 < 1/3, then 1 > 1/3).
  ctx.add("D_1, D_2 incomparable",
          !oracle::precedes(oracle::phi_repr(1), oracle::phi_repr(2)) &&
              !oracle::precedes(oracle::phi_repr(2), oracle::phi_repr(1)),
          "partial sums");
  {
    Witness chain;
    for (std::uint64_t n = 1; n <= 60; ++n) {
      ++chain.checked;
      if (!oracle::precedes(oracle::lazy_polynomial(n), oracle::lazy_polynomial(n - 1))) chain.fail("n=" + std::to_string(n));
    }
    ctx.add("F_n precedes F_{n-1}, n<=60", chain.ok(), chain.detail());
  }
  {
    auto w0 = oracle::lazy_walk(0), w1 = oracle::lazy_walk(1);
    bool ok = w0 == std::vector<mpq_class>{1} &&
              w1 == std::vector<mpq_class>{mpq_class(1, 6), mpq_class(2, 3), mpq_class(1, 6)};
    Witness w;
    for (std::uint64_t n = 0; n <= 30; ++n) {
      // the walk is the law of phi-applications: F_n = (phi/3 + 2/3)^n
      auto walk = oracle::lazy_walk(n);
      auto poly = oracle::lazy_polynomial(n);
      mpq_class center = 0;
      // P(walk at 0) = sum_i coeff_i * P(i fair +-1/2 steps land at 0)
      for (std::uint64_t i = 0; i <= n; i += 2) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), i, i / 2);
        mpz_class two;
        mpz_ui_pow_ui(two.get_mpz_t(), 2, i);
        mpq_class land(c, two);
        land.canonicalize();
        center += poly.coeffs[i] * land;
      }
      ++w.checked;
      if (walk[n] != center) w.fail("n=" + std::to_string(n));
    }
    ctx.add("lazy walk: base cases and agreement with (phi/3+2/3)^n", ok && w.ok(), w.detail());
  }
}

void suite_convergence(Ctx& ctx) {
  auto rep = convergence_report(1, HFunction::linear(), 5, 9);
  json blocks = json::array();
  bool decreasing = true;
  std::optional<mpq_class> prev;
  for (const auto& b : rep) {
    blocks.push_back({{"N", b.N},
                      {"block_lo", b.lo},
                      {"block_hi", b.hi},
                      {"max_dev", b.max_dev ? q(*b.max_dev) : "empty"},
                      {"excluded", b.excluded}});
    if (!b.max_dev) continue;
    if (prev && !(*b.max_dev < *prev)) decreasing = false;
    prev = b.max_dev;
  }
  bool factor = rep.front().max_dev && rep.back().max_dev && *rep.back().max_dev * 3 <= *rep.front().max_dev;
  std::ostringstream d;
  d << "max |c_1(n) - mu^2| off J_1 per block:";
  for (const auto& b : rep) d << " " << (b.max_dev ? q(*b.max_dev) : "empty");
  ctx.add("block maxima off J_1 strictly decreasing, N=5..9", decreasing, d.str(), {{"blocks", blocks}});
  ctx.add("N=9 maximum at most a third of N=5 maximum", factor, d.str());
}

json count_json(const CountReport& r, const BoundSpec& spec, std::int64_t window) {
  json grid = json::array();
  for (const auto& row : r.rows) {
    json b = row.bound.overflow ? json("inf") : json(row.bound.value);
    grid.push_back({{"n", row.n}, {"count", row.count}, {"bound", b}, {"pass", row.pass}});
  }
  return {{"spec", spec.describe()}, {"grid", grid}, {"window", window}};
}

void suite_upper(Ctx& ctx) {
  const auto& fc = frozen_constants();
  const double cs = fc.C_star.get_d();
  for (const HFunction& h : {HFunction::linear(), HFunction::log()}) {
    WindowedSet j = build_J(2, h, 10);
    BoundSpec spec{BoundSpec::Form::kUpperTimesH, cs, 0.0, h, "frozen C*"};
    auto grid = count_grid();
    auto r = verify_count(j.set, spec, grid);
    bool covered = j.window_hi >= grid.back();
    ctx.add("|J & [0,n]| <= C* h(n) (ln n)^((ln ln n)^2 h(n)), h=" + h.name(), r.pass && covered,
            "window " + std::to_string(j.window_hi) + ", |J| on window " + std::to_string(j.set.count(j.window_hi)),
            count_json(r, spec, j.window_hi));
  }
  for (unsigned k = 1; k <= 2; ++k) {
    for (const HFunction& h : {HFunction::linear(), HFunction::log()}) {
      WindowedSet jk = build_Jk(k, h, 10);
      BoundSpec spec{BoundSpec::Form::kUpper, cs, 0.0, h, "frozen C*"};
      bool ok = true;
      json grid = json::array();
      for (std::int64_t n = 243; n <= 59049; n *= 3) {
        std::int64_t top = static_cast<std::int64_t>(u3(k + 1)) * n / 2;
        std::uint64_t count = jk.set.count(top);
        BoundValue b = eval_bound(spec, static_cast<double>(n));
        bool pass = top <= jk.window_hi && static_cast<double>(count) <= b.value;
        ok = ok && pass;
        grid.push_back({{"n", n}, {"count", count}, {"bound", b.overflow ? json("inf") : json(b.value)}, {"pass", pass}});
      }
      ctx.add("|J_k & [0, 3^(k+1) n/2]| <= C* (ln n)^((ln ln n)^2 h(n)), k=" + std::to_string(k) + " h=" + h.name(), ok,
              "window " + std::to_string(jk.window_hi),
              {{"spec", spec.describe()}, {"grid", grid}, {"window", jk.window_hi}});
    }
  }
  {
    auto g = g_cutoff(1, HFunction::linear());
    WindowedSet j = build_J(1, HFunction::linear(), 6);
    ctx.add("g(1) = 81 for linear h; J & [0,81) empty", g && *g == 81 && j.set.count(80) == 0,
            "g(1) = " + (g ? std::to_string(*g) : std::string("none")));
  }
  {
    WindowedSet j1 = build_Jk(1, HFunction::linear(), 6);
    WindowedSet j = build_J(1, HFunction::linear(), 6);
    Witness w;
    for (auto [a, b] : j1.set.intervals()) {
      for (std::int64_t n = std::max<std::int64_t>(a, 81 + 4); n <= b && n + 4 <= j.window_hi; ++n) {
        ++w.checked;
        if (j.set.clip(n - 4, n + 4).size() != 9) w.fail("n=" + std::to_string(n));
      }
    }
    ctx.add("fattening: [n-4, n+4] in J for n in J_1, n >= g(1)+4", w.ok(), w.detail());
  }
  {
    WindowedSet j = build_Jk(1, [] {
      return HFunction::table({{0.0, 100.0}, {1.0, 101.0}});
    }(), 2);
    bool all = true;
    for (std::uint64_t t = 9; t <= 27; ++t) {
      Support sp = support_closed(1, t);
      all = all && j.set.clip(sp.s, sp.t).size() == static_cast<std::uint64_t>(sp.size());
    }
    ctx.add("h(N)=N+100: layer N=2 holds every B_t, t in [9,27]", all, j.set.str().substr(0, 60));
  }
}

void suite_lower(Ctx& ctx) {
  for (unsigned k = 1; k <= 3; ++k) {
    WindowedSet e = enumerate_Ek(k, u3(6));
    Witness zero, positive, empty_pn;
    for (auto [a, b] : e.set.intervals()) {
      for (std::int64_t n = a; n <= b; ++n) {
        ++zero.checked;
        if (autocorrelation(k, n) != 0) zero.fail("n=" + std::to_string(n));
        ++empty_pn.checked;
        if (!find_Pn(k, n).empty()) empty_pn.fail("n=" + std::to_string(n));
      }
    }
    std::uniform_int_distribution<std::int64_t> pick(0, e.window_hi);
    while (positive.checked < 100) {
      std::int64_t n = pick(ctx.rng);
      if (e.set.contains(n)) continue;
      ++positive.checked;
      if (!(autocorrelation(k, n) > 0)) positive.fail("n=" + std::to_string(n));
    }
    const std::string ks = "k=" + std::to_string(k);
    ctx.add("c_k(n) = 0 on E_k, " + ks, zero.ok(), zero.detail() + ", window " + std::to_string(e.window_hi));
    ctx.add("P_n empty on E_k, " + ks, empty_pn.ok(), empty_pn.detail());
    ctx.add("c_k(n) > 0 at 100 random n off E_k, " + ks, positive.ok(), positive.detail());

    Witness gaps;
    const std::int64_t h = tower_height_i64(k);
    for (std::uint64_t l = 0; l <= u3(6); ++l) {
      if (static_cast<std::int64_t>(compute_bl(l)) > h - 2) continue;
      ++gaps.checked;
      if (support_closed(k, l).t + 1 > support_closed(k, l + 1).s - 1) gaps.fail("l=" + std::to_string(l));
    }
    ctx.add("gap (t_l, s_l+1) nonempty when b_l <= h_k - 2, " + ks, gaps.ok(), gaps.detail());
  }
  {
    WindowedSet e1 = enumerate_Ek(1, 10);
    bool ok = e1.set.contains(1) && e1.set.contains(2) && e1.set.contains(3) && e1.set.contains(11) &&
              e1.set.contains(12) && !e1.set.contains(8);
    ctx.add("{1,2,3}, {11,12} in E_1; 8 not in E_1", ok, e1.set.str().substr(0, 60));
  }
  {
    // binom(n-1, h_3 - 3) = binom(n-1, 37) vanishes for n <= 37
    WindowedSet e3 = enumerate_Ek(3, 10);
    bool ok = true;
    for (std::int64_t n = 1; n <= 37; ++n) {
      mpz_class bin;
      mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(n - 1), 37);
      ok = ok && mpz_class(static_cast<unsigned long>(e3.set.count(n))) >= bin;
    }
    BoundSpec spec{BoundSpec::Form::kBinomialLog3, 1.0, 37.0, std::nullopt, "h_3 - 3"};
    std::vector<std::int64_t> grid;
    for (std::int64_t n = 3; n <= 37; ++n) grid.push_back(n);
    auto r = verify_count(e3.set, spec, grid);
    ctx.add("|E_3 & [0,n]| >= binom(n-1, 37), n<=37", ok && r.pass, "vacuous range",
            count_json(r, spec, e3.window_hi));
  }
}

std::vector<mpq_class> default_c(std::size_t len) {
  std::vector<mpq_class> c(len);
  for (std::size_t n = 0; n < len; ++n) c[n] = mpq_class(1.0 / std::log(static_cast<double>(n) + 2.0));
  return c;
}

void suite_extractor(Ctx& ctx) {
  auto report = [&](const std::string& name, const std::vector<mpq_class>& a, const std::vector<mpq_class>& b,
                    const std::vector<mpq_class>& c, const std::function<std::string(const ExtractionResult&)>& extra) {
    ExtractionResult r = extract_exceptional(a, b, c);
    auto bad = check_extraction(a, b, c, r);
    std::string e = extra(r);
    json th = json::array();
    for (auto t : r.thresholds) th.push_back(t);
    ctx.add("extractor contract: " + name, !bad && e.empty(),
            (bad ? "violated at n=" + std::to_string(*bad) : "holds on window") + (e.empty() ? "" : "; " + e) +
                "; stop: " + r.stop_reason,
            {{"thresholds", th}, {"J_size", r.J.size()}});
  };
  {
    std::vector<mpq_class> a(1001, mpq_class(0));
    report("a = 0", a, running_cesaro(a), default_c(a.size()), [](const ExtractionResult& r) {
      bool ok = r.J.empty() && std::all_of(r.thresholds.begin(), r.thresholds.end(), [](auto t) { return t == 0; });
      return ok ? std::string() : "expected empty J and zero thresholds";
    });
  }
  {
    const std::size_t N = 65536;
    std::vector<mpq_class> a(N + 1, mpq_class(0)), b(N + 1, mpq_class(0));
    for (std::size_t p = 1; p <= N; p *= 2) a[p] = 1;
    for (std::size_t n = 1; n <= N; ++n) {
      long lg = 0;
      while ((std::size_t{2} << lg) <= n) ++lg;
      b[n] = mpq_class(lg + 2, static_cast<unsigned long>(n));
      b[n].canonicalize();
    }
    report("a = 1 on powers of 2, N = 2^16", a, b, default_c(a.size()), [&](const ExtractionResult& r) {
      std::int64_t l2 = r.thresholds.size() > 1 ? r.thresholds[1] : 0;
      for (std::size_t p = 1; p <= N; p *= 2) {
        if (static_cast<std::int64_t>(p) >= l2 && !r.J.contains(static_cast<std::int64_t>(p))) {
          return "power " + std::to_string(p) + " missing";
        }
      }
      for (std::int64_t n = l2; n <= static_cast<std::int64_t>(N); ++n) {
        if (!r.J.contains(n) && a[static_cast<std::size_t>(n)] != 0) return "nonzero off J at " + std::to_string(n);
      }
      return std::string();
    });
  }
  {
    std::vector<mpq_class> a(1001);
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = mpq_class(1, static_cast<unsigned long>(j + 1));
    report("a_j = 1/(j+1)", a, running_cesaro(a), default_c(a.size()), [](const ExtractionResult& r) {
      auto kmax = static_cast<std::int64_t>(r.thresholds.size());
      // a_j > 1/k needs j + 1 < k
      return r.J.clip(kmax, INT64_MAX).empty() ? std::string() : "J reaches past j+1 < k";
    });
  }
  {
    std::vector<mpq_class> a = {0, 1, 1, 1}, b = {0, mpq_class(1, 10), mpq_class(1, 10), 1};
    bool ok = false;
    try {
      extract_exceptional(a, b, default_c(4));
    } catch (const PreconditionError& e) {
      ok = e.witness() == 2;
    }
    ctx.add("extractor reports Cesaro violation with witness", ok, "a = (0, 1, 1, 1), b_2 = 1/10: witness n = 2");
  }
}

const std::vector<std::pair<std::string, void (*)(Ctx&)>>& registry() {
  static const std::vector<std::pair<std::string, void (*)(Ctx&)>> r = {
      {"table", suite_table},         {"transform", suite_transform},   {"oracle", suite_oracle},
      {"shape", suite_shape},         {"ternary", suite_ternary},       {"counting", suite_counting},
      {"pn", suite_pn},               {"constants", suite_constants},   {"majorization", suite_majorization},
      {"convergence", suite_convergence}, {"upper", suite_upper},       {"lower", suite_lower},
      {"extractor", suite_extractor},
  };
  return r;
}

json constants_json() {
  const auto& fc = frozen_constants();
  auto num = [](const mpq_class& x) {
    std::ostringstream s;
    s.precision(12);
    s << x.get_d();
    return json{{"value", q(x)}, {"decimal", s.str()}};
  };
  return {{"C1", num(fc.C1)},
          {"C2", num(fc.C2)},
          {"C3", num(fc.C3)},
          {"C_star", num(fc.C_star)},
          {"headroom", q(fc.headroom)},
          {"sweep",
           {{"l_end", fc.sweep_l_end},
            {"p_max", fc.sweep_p_max},
            {"date", fc.sweep_date},
            {"max_C1_sq", q(fc.max_C1_sq)},
            {"max_C2_sq", q(fc.max_C2_sq)},
            {"max_C3_sq", q(fc.max_C3_sq)},
            {"max_C_star", fc.max_C_star}}}};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, f] : registry()) v.push_back(n);
    return v;
  }();
  return names;
}

Report run(const std::string& suite, std::uint64_t seed) {
  std::vector<std::pair<std::string, void (*)(Ctx&)>> chosen;
  for (const auto& entry : registry()) {
    if (suite == "all" || suite == entry.first) chosen.push_back(entry);
  }
  if (chosen.empty()) throw InputError("unknown suite '" + suite + "'");
  Report report;
  json checks = json::array();
  std::uint32_t index = 0;
  for (const auto& [name, fn] : chosen) {
    // each suite draws from its own stream so suites stay reproducible alone
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(index++)};
    Ctx ctx{std::mt19937_64(sq), name, &report, &checks};
    fn(ctx);
  }
  json out;
  out["suite"] = suite;
  out["seed"] = seed;
  out["pass"] = report.pass;
  out["constants"] = constants_json();
  out["checks"] = std::move(checks);
  report.json = out.dump(2) + "\n";
  return report;
}

}  // namespace chacon::verify
