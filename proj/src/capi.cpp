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

#include "chacon/chacon.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chacon/correlation.hpp"
#include "chacon/error.hpp"
#include "chacon/exceptional.hpp"
#include "chacon/frozen_constants.hpp"
#include "chacon/oracle.hpp"
#include "chacon/tower.hpp"
#include "chacon/verify.hpp"

struct chacon_rational {
  mpq_class v;
};
struct chacon_distribution {
  chacon::ReturnDistribution d;
};
struct chacon_intset {
  chacon::WindowedSet w;
};
struct chacon_extraction {
  std::vector<mpq_class> a, b, c;
  chacon::ExtractionResult r;
};

namespace {

thread_local std::string g_error;
thread_local long long g_witness = -1;

chacon_status fail(chacon_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

template <class F>
chacon_status guard(F&& f) {
  g_error.clear();
  g_witness = -1;
  try {
    f();
    return CHACON_OK;
  } catch (const chacon::PreconditionError& e) {
    g_witness = e.witness();
    return fail(CHACON_ERR_PRECONDITION, e.what());
  } catch (const chacon::DomainError& e) {
    return fail(CHACON_ERR_DOMAIN, e.what());
  } catch (const chacon::InputError& e) {
    return fail(CHACON_ERR_INPUT, e.what());
  } catch (const chacon::RefinementError& e) {
    return fail(CHACON_ERR_REFINEMENT, e.what());
  } catch (const chacon::DepthExceededError& e) {
    return fail(CHACON_ERR_DEPTH, e.what());
  } catch (const chacon::ResourceCapError& e) {
    return fail(CHACON_ERR_RESOURCE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CHACON_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(CHACON_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (!p) throw chacon::InputError(std::string("null argument: ") + what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

chacon::ResourceCaps caps_of(const chacon_caps* c) {
  chacon::ResourceCaps r;
  if (c) {
    r.max_l = c->max_l;
    r.max_n = c->max_n;
    r.max_support = static_cast<std::size_t>(c->max_support);
  }
  return r;
}

// Sign, digits, optional fraction and exponent; or p/q; or an integer.
mpq_class parse_rational(const std::string& text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  if (s.empty()) throw chacon::InputError("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw chacon::InputError("bad rational '" + text + "'");
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool any = false;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], any = true;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++], ++frac, any = true;
  }
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    try {
      exp10 = std::stol(s.substr(i), &used);
    } catch (const std::logic_error&) {
      throw chacon::InputError("bad exponent in '" + text + "'");
    }
    if (std::labs(exp10) > 10000) throw chacon::InputError("exponent out of range in '" + text + "'");
    i += used;
  }
  if (!any || i != s.size()) throw chacon::InputError("bad number '" + text + "'");
  mpz_class m(digits, 10);  // explicit base: a leading 0 would mean octal
  long shift = exp10 - frac;
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
  mpq_class q = shift >= 0 ? mpq_class(m * p) : mpq_class(m, p);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

// Correctly rounded (half away from zero) to `digits` significant digits,
// printed like %g.
std::string decimal(const mpq_class& x, int digits) {
  if (digits < 1 || digits > 100) throw chacon::InputError("digits must be in 1..100");
  if (x == 0) return "0";
  mpq_class a = abs(x);
  // e = floor(log10 a)
  long e = static_cast<long>(std::floor(std::log10(a.get_d())));
  auto pow10 = [](long n) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(n));
    return mpq_class(p);
  };
  auto scale = [&](long n) { return n >= 0 ? pow10(n) : mpq_class(1) / pow10(-n); };
  while (a >= scale(e + 1)) ++e;
  while (a < scale(e)) --e;
  mpq_class scaled = a * scale(digits - 1 - e);
  mpz_class m = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
  mpz_class lim = pow10(digits).get_num();
  if (m >= lim) {
    m /= 10;
    ++e;
  }
  std::string ds = m.get_str();  // exactly `digits` characters
  while (ds.size() > 1 && ds.back() == '0') ds.pop_back();
  std::string out = x < 0 ? "-" : "";
  if (e < -4 || e >= digits) {
    out += ds.substr(0, 1);
    if (ds.size() > 1) out += "." + ds.substr(1);
    char buf[32];
    std::snprintf(buf, sizeof buf, "e%c%02ld", e < 0 ? '-' : '+', std::labs(e));
    out += buf;
  } else if (e >= 0) {
    std::string ip = ds.substr(0, std::min<std::size_t>(ds.size(), e + 1));
    ip.append(static_cast<std::size_t>(e + 1) - ip.size(), '0');
    out += ip;
    if (ds.size() > static_cast<std::size_t>(e + 1)) out += "." + ds.substr(e + 1);
  } else {
    out += "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + ds;
  }
  return out;
}

chacon::TriadicRational parse_point(const char* x) {
  need(x, "x");
  return chacon::TriadicRational(chacon::Triadic::parse(x));
}

std::vector<chacon::TowerCell> cells(unsigned k, const int64_t* m, size_t n) {
  if (n && !m) throw chacon::InputError("null cell array");
  std::vector<chacon::TowerCell> out;
  for (size_t i = 0; i < n; ++i) out.push_back({m[i], k});
  return out;
}

chacon::BoundSpec::Form form_of(const std::string& f) {
  using F = chacon::BoundSpec::Form;
  if (f == "upper") return F::kUpper;
  if (f == "upper-h") return F::kUpperTimesH;
  if (f == "lower") return F::kLower;
  if (f == "power-rate") return F::kPowerRate;
  if (f == "log-rate") return F::kLogRate;
  if (f == "binomial-log3") return F::kBinomialLog3;
  throw chacon::InputError("unknown bound form '" + f + "'");
}

}  // namespace

extern "C" {

const char* chacon_version(void) { return "1.0.0"; }
const char* chacon_last_error(void) { return g_error.c_str(); }
long long chacon_last_witness(void) { return g_witness; }
void chacon_string_free(char* s) { std::free(s); }

void chacon_caps_default(chacon_caps* caps) {
  if (!caps) return;
  chacon::ResourceCaps d;
  caps->max_l = d.max_l;
  caps->max_n = d.max_n;
  caps->max_support = d.max_support;
}

chacon_status chacon_rational_parse(const char* text, chacon_rational** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new chacon_rational{parse_rational(text)};
  });
}

chacon_status chacon_rational_str(const chacon_rational* r, char** out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    *out = dup(r->v.get_str());
  });
}

chacon_status chacon_rational_parts(const chacon_rational* r, char** num, char** den) {
  return guard([&] {
    need(r, "r");
    need(num, "num");
    need(den, "den");
    std::string n = r->v.get_num().get_str(), d = r->v.get_den().get_str();
    *num = dup(n);
    *den = dup(d);
  });
}

chacon_status chacon_rational_decimal(const chacon_rational* r, int digits, char** out) {
  return guard([&] {
    need(r, "r");
    need(out, "out");
    *out = dup(decimal(r->v, digits));
  });
}

int chacon_rational_sign(const chacon_rational* r) { return r ? sgn(r->v) : 0; }
void chacon_rational_free(chacon_rational* r) { delete r; }

chacon_status chacon_apply_t(const char* x, long long power, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(chacon::apply_T_power(parse_point(x), power).str());
  });
}

chacon_status chacon_locate(const char* x, unsigned k, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(chacon::locate(parse_point(x), k).str());
  });
}

chacon_status chacon_tower_height(unsigned k, char** out) {
  return guard([&] {
    need(out, "out");
    *out = dup(chacon::tower_height(k).get_str());
  });
}

chacon_status chacon_dl(unsigned k, uint64_t l, const chacon_caps* caps, chacon_distribution** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_distribution{chacon::compute_dl(k, l, caps_of(caps))};
  });
}

chacon_status chacon_dl_brute(unsigned k, uint64_t l, unsigned depth, chacon_distribution** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_distribution{chacon::oracle::brute_dl(k, l, depth)};
  });
}

int64_t chacon_distribution_start(const chacon_distribution* d) { return d ? d->d.support_start : 0; }
size_t chacon_distribution_size(const chacon_distribution* d) { return d ? d->d.masses.size() : 0; }

chacon_status chacon_distribution_mass(const chacon_distribution* d, size_t i, chacon_rational** out) {
  return guard([&] {
    need(d, "d");
    need(out, "out");
    if (i >= d->d.masses.size()) throw chacon::InputError("mass index out of range");
    *out = new chacon_rational{d->d.masses[i]};
  });
}

void chacon_distribution_free(chacon_distribution* d) { delete d; }

chacon_status chacon_bl(uint64_t l, uint64_t* out) {
  return guard([&] {
    need(out, "out");
    *out = chacon::compute_bl(l);
  });
}

chacon_status chacon_support(unsigned k, uint64_t l, int64_t* s, int64_t* t) {
  return guard([&] {
    need(s, "s");
    need(t, "t");
    auto sp = chacon::support(k, l);
    *s = sp.s;
    *t = sp.t;
  });
}

chacon_status chacon_find_pn(unsigned k, int64_t n, const chacon_caps* caps, uint64_t* lo, uint64_t* hi) {
  return guard([&] {
    need(lo, "lo");
    need(hi, "hi");
    auto r = chacon::find_Pn(k, n, caps_of(caps));
    *lo = r.lo;
    *hi = r.hi;
  });
}

chacon_status chacon_mu(unsigned k, chacon_rational** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_rational{chacon::mu_Ak(k)};
  });
}

chacon_status chacon_autocorrelation(unsigned k, int64_t n, const chacon_caps* caps, chacon_rational** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_rational{chacon::autocorrelation(k, n, caps_of(caps))};
  });
}

chacon_status chacon_cell_correlation(unsigned k, const int64_t* a, size_t na, const int64_t* b, size_t nb, int64_t n,
                                      const chacon_caps* caps, chacon_rational** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_rational{chacon::cell_correlation(cells(k, a, na), cells(k, b, nb), n, caps_of(caps))};
  });
}

chacon_status chacon_cesaro(unsigned k, int64_t N, const chacon_caps* caps, chacon_rational** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_rational{chacon::cesaro(k, N, caps_of(caps))};
  });
}

chacon_status chacon_cell_cesaro(unsigned k, const int64_t* a, size_t na, const int64_t* b, size_t nb, int64_t N,
                                 const chacon_caps* caps, chacon_rational** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_rational{chacon::cesaro(cells(k, a, na), cells(k, b, nb), N, caps_of(caps))};
  });
}

chacon_status chacon_build_jk(unsigned k, const char* h_spec, unsigned n_max, chacon_intset** out) {
  return guard([&] {
    need(h_spec, "h_spec");
    need(out, "out");
    *out = new chacon_intset{chacon::build_Jk(k, chacon::HFunction::parse(h_spec), n_max)};
  });
}

chacon_status chacon_build_j(unsigned k_max, const char* h_spec, unsigned n_max, chacon_intset** out) {
  return guard([&] {
    need(h_spec, "h_spec");
    need(out, "out");
    *out = new chacon_intset{chacon::build_J(k_max, chacon::HFunction::parse(h_spec), n_max)};
  });
}

chacon_status chacon_enumerate_ek(unsigned k, uint64_t l_max, chacon_intset** out) {
  return guard([&] {
    need(out, "out");
    *out = new chacon_intset{chacon::enumerate_Ek(k, l_max)};
  });
}

size_t chacon_intset_interval_count(const chacon_intset* s) { return s ? s->w.set.intervals().size() : 0; }

chacon_status chacon_intset_interval(const chacon_intset* s, size_t i, int64_t* lo, int64_t* hi) {
  return guard([&] {
    need(s, "s");
    need(lo, "lo");
    need(hi, "hi");
    const auto& iv = s->w.set.intervals();
    if (i >= iv.size()) throw chacon::InputError("interval index out of range");
    *lo = iv[i].first;
    *hi = iv[i].second;
  });
}

int chacon_intset_contains(const chacon_intset* s, int64_t n) { return s && s->w.set.contains(n) ? 1 : 0; }
uint64_t chacon_intset_count(const chacon_intset* s, int64_t n) { return s ? s->w.set.count(n) : 0; }
int64_t chacon_intset_window(const chacon_intset* s) { return s ? s->w.window_hi : 0; }
size_t chacon_intset_note_count(const chacon_intset* s) { return s ? s->w.notes.size() : 0; }

const char* chacon_intset_note(const chacon_intset* s, size_t i) {
  return s && i < s->w.notes.size() ? s->w.notes[i].c_str() : nullptr;
}

void chacon_intset_free(chacon_intset* s) { delete s; }

chacon_status chacon_count_report(const chacon_intset* s, const char* form, double C, double param,
                                  const char* h_spec, const int64_t* grid, size_t grid_len, char** json, int* pass) {
  return guard([&] {
    need(s, "s");
    need(form, "form");
    need(json, "json");
    if (grid_len && !grid) throw chacon::InputError("null grid");
    const auto& fc = chacon::frozen_constants();
    chacon::BoundSpec spec;
    spec.form = form_of(form);
    spec.C = C < 0 ? fc.C_star.get_d() : C;
    spec.provenance = C < 0 ? "frozen C*" : "user";
    spec.param = param;
    if (h_spec) spec.h = chacon::HFunction::parse(h_spec);
    auto report = chacon::verify_count(s->w.set, spec, std::vector<std::int64_t>(grid, grid + grid_len));
    nlohmann::ordered_json j;
    j["spec"] = spec.describe();
    j["provenance"] = spec.provenance;
    j["grid"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
      nlohmann::ordered_json b = row.bound.overflow ? nlohmann::ordered_json("inf") : nlohmann::ordered_json(row.bound.value);
      j["grid"].push_back({{"n", row.n}, {"count", row.count}, {"bound", b}, {"pass", row.pass}});
    }
    j["constants"] = {{"C1", fc.C1.get_str()},
                      {"C2", fc.C2.get_str()},
                      {"C3", fc.C3.get_str()},
                      {"C_star", fc.C_star.get_str()},
                      {"headroom", fc.headroom.get_str()},
                      {"sweep_l_end", fc.sweep_l_end},
                      {"sweep_date", fc.sweep_date}};
    j["window"] = s->w.window_hi;
    j["pass"] = report.pass;
    *json = dup(j.dump(2) + "\n");
    if (pass) *pass = report.pass ? 1 : 0;
  });
}

chacon_status chacon_convergence_csv(unsigned k, const char* h_spec, unsigned n_lo, unsigned n_hi,
                                     const chacon_caps* caps, char** csv) {
  return guard([&] {
    need(h_spec, "h_spec");
    need(csv, "csv");
    auto rep = chacon::convergence_report(k, chacon::HFunction::parse(h_spec), n_lo, n_hi, caps_of(caps));
    std::ostringstream o;
    o << "N,block_lo,block_hi,max_dev_num,max_dev_den,excluded_count\n";
    for (const auto& b : rep) {
      o << b.N << ',' << b.lo << ',' << b.hi << ',';
      if (b.max_dev) {
        o << b.max_dev->get_num().get_str() << ',' << b.max_dev->get_den().get_str();
      } else {
        o << "empty,empty";
      }
      o << ',' << b.excluded << '\n';
    }
    *csv = dup(o.str());
  });
}

chacon_status chacon_extract(const char* const* a, const char* const* b, const char* const* c, size_t len,
                             chacon_extraction** out) {
  return guard([&] {
    need(a, "a");
    need(out, "out");
    if (len == 0) throw chacon::InputError("empty series");
    auto e = std::make_unique<chacon_extraction>();
    for (size_t i = 0; i < len; ++i) {
      need(a[i], "a[i]");
      e->a.push_back(parse_rational(a[i]));
    }
    if (b) {
      for (size_t i = 0; i < len; ++i) e->b.push_back(i == 0 && !b[0] ? mpq_class(0) : parse_rational(b[i] ? b[i] : ""));
    } else {
      e->b = chacon::running_cesaro(e->a);
    }
    if (c) {
      for (size_t i = 0; i < len; ++i) e->c.push_back(parse_rational(c[i] ? c[i] : ""));
    } else {
      for (size_t i = 0; i < len; ++i) e->c.emplace_back(1.0 / std::log(static_cast<double>(i) + 2.0));
    }
    e->r = chacon::extract_exceptional(e->a, e->b, e->c);
    *out = e.release();
  });
}

chacon_status chacon_extraction_set(const chacon_extraction* e, chacon_intset** out) {
  return guard([&] {
    need(e, "e");
    need(out, "out");
    chacon::WindowedSet w;
    w.set = e->r.J;
    w.window_hi = static_cast<std::int64_t>(e->a.size()) - 1;
    w.notes.push_back("stop: " + e->r.stop_reason);
    *out = new chacon_intset{std::move(w)};
  });
}

size_t chacon_extraction_threshold_count(const chacon_extraction* e) { return e ? e->r.thresholds.size() : 0; }

int64_t chacon_extraction_threshold(const chacon_extraction* e, size_t i) {
  return e && i < e->r.thresholds.size() ? e->r.thresholds[i] : -1;
}

int chacon_extraction_certified(const chacon_extraction* e) { return e && e->r.window_certified ? 1 : 0; }
const char* chacon_extraction_stop_reason(const chacon_extraction* e) { return e ? e->r.stop_reason.c_str() : ""; }

chacon_status chacon_extraction_check(const chacon_extraction* e, int64_t* violation) {
  return guard([&] {
    need(e, "e");
    need(violation, "violation");
    auto v = chacon::check_extraction(e->a, e->b, e->c, e->r);
    *violation = v ? *v : -1;
  });
}

void chacon_extraction_free(chacon_extraction* e) { delete e; }

const char* chacon_verify_suites(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : chacon::verify::suite_names()) s += (s.empty() ? "" : ",") + n;
    return s;
  }();
  return names.c_str();
}

chacon_status chacon_verify(const char* suite, uint64_t seed, char** json, int* pass) {
  return guard([&] {
    need(suite, "suite");
    need(json, "json");
    auto r = chacon::verify::run(suite, seed);
    *json = dup(r.json);
    if (pass) *pass = r.pass ? 1 : 0;
  });
}

}  // extern "C"
