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

// `chacon` command-line front end. Talks to the library only through the C
// API. Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 resource
// cap.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "chacon/chacon.h"

namespace {

using json = nlohmann::ordered_json;

enum Exit { kOk = 0, kVerifyFailed = 1, kBadInput = 2, kResourceCap = 3 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(chacon_status s) {
  switch (s) {
    case CHACON_OK: return kOk;
    case CHACON_ERR_RESOURCE:
    case CHACON_ERR_DEPTH: return kResourceCap;
    default: return kBadInput;
  }
}

void check(chacon_status s) {
  if (s != CHACON_OK) {
    std::string msg = chacon_last_error();
    if (s == CHACON_ERR_PRECONDITION) msg += " (witness n=" + std::to_string(chacon_last_witness()) + ")";
    throw Failure{exit_code(s), msg};
  }
}

std::string take(char* s) {
  std::string out(s ? s : "");
  chacon_string_free(s);
  return out;
}

struct Rational {
  chacon_rational* r = nullptr;
  ~Rational() { chacon_rational_free(r); }
  std::string num, den, dec;
  void fill() {
    char *n = nullptr, *d = nullptr, *x = nullptr;
    check(chacon_rational_parts(r, &n, &d));
    num = take(n);
    den = take(d);
    check(chacon_rational_decimal(r, 12, &x));
    dec = take(x);
  }
};

struct Range {
  std::int64_t lo = 0, hi = 0;
};

Range parse_range(const std::string& text, const char* what) {
  Range r;
  try {
    auto dots = text.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      r.lo = r.hi = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      r.lo = std::stoll(text.substr(0, dots), &used);
      if (used != dots) throw std::invalid_argument(text);
      std::string rest = text.substr(dots + 2);
      r.hi = std::stoll(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw Failure{kBadInput, std::string("bad ") + what + " range '" + text + "' (want a..b)"};
  }
  if (r.lo > r.hi) throw Failure{kBadInput, std::string("empty ") + what + " range '" + text + "'"};
  return r;
}

std::vector<std::int64_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    Range r = parse_range(item, what);
    for (auto v = r.lo; v <= r.hi; ++v) out.push_back(v);
  }
  return out;
}

struct Config {
  unsigned k = 1;
  std::string l = "0..0";
  std::string n = "0..0";
  unsigned n_max = 8;
  std::string h = "linear";
  std::uint64_t cap_l = 0;
  std::int64_t cap_n = 0;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  // command specific
  std::string suite = "all";
  std::string x;
  std::string in;
  std::string cells_a, cells_b;
  std::string grid;
  std::string bound;
  double C = -1.0;
  double param = 0.0;
  bool whole_j = false;
  unsigned n_lo = 5;
  std::uint64_t l_max = 729;
  unsigned depth = 0;

  chacon_caps caps() const {
    chacon_caps c;
    chacon_caps_default(&c);
    if (cap_l) c.max_l = cap_l;
    if (cap_n) c.max_n = cap_n;
    return c;
  }
};

class Output {
 public:
  explicit Output(const Config& cfg) : cfg_(cfg) {}
  std::ostream& os() { return buf_; }
  void header(const std::string& columns) {
    buf_ << "# seed=" << cfg_.seed << "\n" << columns << "\n";
  }
  void flush() {
    if (cfg_.out.empty()) {
      std::cout << buf_.str();
      std::cout.flush();
      return;
    }
    std::ofstream f(cfg_.out, std::ios::binary);
    if (!f) throw Failure{kBadInput, "cannot write '" + cfg_.out + "'"};
    f << buf_.str();
  }

 private:
  const Config& cfg_;
  std::ostringstream buf_;
};

bool want_json(const Config& c) {
  if (c.format != "csv" && c.format != "json") throw Failure{kBadInput, "format must be csv or json"};
  return c.format == "json";
}

void cap_check(const Config& c, std::int64_t l_hi, std::int64_t n_hi) {
  chacon_caps caps = c.caps();
  if (l_hi >= 0 && static_cast<std::uint64_t>(l_hi) > caps.max_l) {
    throw Failure{kResourceCap, "l=" + std::to_string(l_hi) + " exceeds --cap-l " + std::to_string(caps.max_l)};
  }
  if (n_hi > caps.max_n) {
    throw Failure{kResourceCap, "n=" + std::to_string(n_hi) + " exceeds --cap-n " + std::to_string(caps.max_n)};
  }
}

// ----------------------------------------------------------------- commands

int cmd_dl(const Config& c) {
  Range l = parse_range(c.l, "l");
  if (l.lo < 0) throw Failure{kBadInput, "l must be >= 0"};
  cap_check(c, l.hi, 0);
  chacon_caps caps = c.caps();
  Output out(c);
  bool js = want_json(c);
  json rows = json::array();
  if (!js) out.header("l,n,num,den,decimal");
  for (auto li = l.lo; li <= l.hi; ++li) {
    chacon_distribution* d = nullptr;
    if (c.depth) {
      check(chacon_dl_brute(c.k, static_cast<std::uint64_t>(li), c.depth, &d));
    } else {
      check(chacon_dl(c.k, static_cast<std::uint64_t>(li), &caps, &d));
    }
    std::unique_ptr<chacon_distribution, void (*)(chacon_distribution*)> hold(d, chacon_distribution_free);
    for (size_t i = 0; i < chacon_distribution_size(d); ++i) {
      Rational m;
      check(chacon_distribution_mass(d, i, &m.r));
      if (chacon_rational_sign(m.r) == 0) continue;
      m.fill();
      std::int64_t n = chacon_distribution_start(d) + static_cast<std::int64_t>(i);
      if (js) {
        rows.push_back({{"l", li}, {"n", n}, {"num", m.num}, {"den", m.den}, {"decimal", m.dec}});
      } else {
        out.os() << li << ',' << n << ',' << m.num << ',' << m.den << ',' << m.dec << '\n';
      }
    }
  }
  if (js) out.os() << json{{"seed", c.seed}, {"k", c.k}, {"rows", rows}}.dump(2) << '\n';
  out.flush();
  return kOk;
}

int cmd_series(const Config& c, bool cesaro_mode) {
  Range n = parse_range(c.n, cesaro_mode ? "N" : "n");
  cap_check(c, -1, std::max(std::abs(n.lo), std::abs(n.hi)));
  chacon_caps caps = c.caps();
  std::vector<std::int64_t> a = parse_list(c.cells_a, "cell"), b = parse_list(c.cells_b, "cell");
  bool cells = !a.empty() || !b.empty();
  if (cells && (a.empty() || b.empty())) throw Failure{kBadInput, "--cells-a and --cells-b go together"};
  Output out(c);
  bool js = want_json(c);
  const char* var = cesaro_mode ? "N" : "n";
  json rows = json::array();
  if (!js) out.header(std::string(var) + ",num,den,decimal");
  for (auto v = n.lo; v <= n.hi; ++v) {
    Rational r;
    if (cesaro_mode) {
      if (cells) {
        check(chacon_cell_cesaro(c.k, a.data(), a.size(), b.data(), b.size(), v, &caps, &r.r));
      } else {
        check(chacon_cesaro(c.k, v, &caps, &r.r));
      }
    } else if (cells) {
      check(chacon_cell_correlation(c.k, a.data(), a.size(), b.data(), b.size(), v, &caps, &r.r));
    } else {
      check(chacon_autocorrelation(c.k, v, &caps, &r.r));
    }
    r.fill();
    if (js) {
      rows.push_back({{var, v}, {"num", r.num}, {"den", r.den}, {"decimal", r.dec}});
    } else {
      out.os() << v << ',' << r.num << ',' << r.den << ',' << r.dec << '\n';
    }
  }
  if (js) out.os() << json{{"seed", c.seed}, {"k", c.k}, {"rows", rows}}.dump(2) << '\n';
  out.flush();
  return kOk;
}

int emit_set(const Config& c, chacon_intset* s, const std::string& what) {
  std::unique_ptr<chacon_intset, void (*)(chacon_intset*)> hold(s, chacon_intset_free);
  std::vector<std::int64_t> grid = parse_list(c.grid, "grid");
  Output out(c);
  int rc = kOk;
  if (!c.bound.empty()) {
    int pass = 0;
    char* js = nullptr;
    check(chacon_count_report(s, c.bound.c_str(), c.C, c.param, c.h.c_str(), grid.data(), grid.size(), &js, &pass));
    json report = json::parse(take(js));
    json wrapped;
    wrapped["seed"] = c.seed;
    wrapped["set"] = what;
    for (auto& [key, v] : report.items()) wrapped[key] = v;
    out.os() << wrapped.dump(2) << '\n';
    out.flush();
    return pass ? kOk : kVerifyFailed;
  }
  if (want_json(c)) {
    json iv = json::array();
    for (size_t i = 0; i < chacon_intset_interval_count(s); ++i) {
      std::int64_t lo, hi;
      check(chacon_intset_interval(s, i, &lo, &hi));
      iv.push_back({lo, hi});
    }
    json counts = json::array();
    for (auto n : grid) counts.push_back({{"n", n}, {"count", chacon_intset_count(s, n)}});
    json notes = json::array();
    for (size_t i = 0; i < chacon_intset_note_count(s); ++i) notes.push_back(chacon_intset_note(s, i));
    out.os() << json{{"seed", c.seed}, {"set", what}, {"window", chacon_intset_window(s)}, {"intervals", iv},
                     {"counts", counts}, {"notes", notes}}
                    .dump(2)
             << '\n';
  } else {
    out.os() << "# seed=" << c.seed << "\n# set=" << what << "\n# window=" << chacon_intset_window(s) << "\n";
    for (size_t i = 0; i < chacon_intset_note_count(s); ++i) out.os() << "# note: " << chacon_intset_note(s, i) << "\n";
    if (grid.empty()) {
      out.os() << "lo,hi\n";
      for (size_t i = 0; i < chacon_intset_interval_count(s); ++i) {
        std::int64_t lo, hi;
        check(chacon_intset_interval(s, i, &lo, &hi));
        out.os() << lo << ',' << hi << '\n';
      }
    } else {
      out.os() << "n,count\n";
      for (auto n : grid) out.os() << n << ',' << chacon_intset_count(s, n) << '\n';
    }
  }
  out.flush();
  return rc;
}

int cmd_jset(const Config& c) {
  chacon_intset* s = nullptr;
  std::string what;
  if (c.whole_j) {
    check(chacon_build_j(c.k, c.h.c_str(), c.n_max, &s));
    what = "J k_max=" + std::to_string(c.k) + " h=" + c.h + " N_max=" + std::to_string(c.n_max);
  } else {
    check(chacon_build_jk(c.k, c.h.c_str(), c.n_max, &s));
    what = "J_k k=" + std::to_string(c.k) + " h=" + c.h + " N_max=" + std::to_string(c.n_max);
  }
  return emit_set(c, s, what);
}

int cmd_eset(const Config& c) {
  cap_check(c, static_cast<std::int64_t>(c.l_max), 0);
  chacon_intset* s = nullptr;
  check(chacon_enumerate_ek(c.k, c.l_max, &s));
  return emit_set(c, s, "E_k k=" + std::to_string(c.k) + " l_max=" + std::to_string(c.l_max));
}

int cmd_convergence(const Config& c) {
  char* csv = nullptr;
  chacon_caps caps = c.caps();
  check(chacon_convergence_csv(c.k, c.h.c_str(), c.n_lo, c.n_max, &caps, &csv));
  Output out(c);
  out.os() << "# seed=" << c.seed << "\n" << take(csv);
  out.flush();
  return kOk;
}

// CSV with header: n,a[,b[,c]]; b_0 may be blank.
int cmd_extract(const Config& c) {
  if (c.in.empty()) throw Failure{kBadInput, "extract needs --in <series.csv>"};
  std::ifstream f(c.in);
  if (!f) throw Failure{kBadInput, "cannot read '" + c.in + "'"};
  std::vector<std::vector<std::string>> cols(3);
  std::string line;
  bool header = true;
  std::int64_t expect = 0;
  std::size_t width = 0;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() < 2 || cells.size() > 4) throw Failure{kBadInput, "bad row '" + line + "'"};
    if (width == 0) width = cells.size();
    if (cells.size() != width) throw Failure{kBadInput, "ragged row '" + line + "'"};
    if (cells[0] != std::to_string(expect)) throw Failure{kBadInput, "rows must be n = 0, 1, 2, ...; got '" + cells[0] + "'"};
    ++expect;
    for (std::size_t i = 1; i < cells.size(); ++i) cols[i - 1].push_back(cells[i]);
  }
  if (expect == 0) throw Failure{kBadInput, "no data rows"};
  auto ptrs = [](const std::vector<std::string>& v) {
    std::vector<const char*> p;
    for (std::size_t i = 0; i < v.size(); ++i) p.push_back(i == 0 && v[i].empty() ? nullptr : v[i].c_str());
    return p;
  };
  auto pa = ptrs(cols[0]), pb = ptrs(cols[1]), pc = ptrs(cols[2]);
  chacon_extraction* e = nullptr;
  check(chacon_extract(pa.data(), width >= 3 ? pb.data() : nullptr, width >= 4 ? pc.data() : nullptr, pa.size(), &e));
  std::unique_ptr<chacon_extraction, void (*)(chacon_extraction*)> hold(e, chacon_extraction_free);
  std::int64_t violation = -1;
  check(chacon_extraction_check(e, &violation));
  chacon_intset* s = nullptr;
  check(chacon_extraction_set(e, &s));
  std::unique_ptr<chacon_intset, void (*)(chacon_intset*)> hs(s, chacon_intset_free);

  json th = json::array();
  for (size_t i = 0; i < chacon_extraction_threshold_count(e); ++i) th.push_back(chacon_extraction_threshold(e, i));
  json iv = json::array();
  for (size_t i = 0; i < chacon_intset_interval_count(s); ++i) {
    std::int64_t lo, hi;
    check(chacon_intset_interval(s, i, &lo, &hi));
    iv.push_back({lo, hi});
  }
  Output out(c);
  if (want_json(c)) {
    out.os() << json{{"seed", c.seed},
                     {"window", expect - 1},
                     {"J", iv},
                     {"thresholds", th},
                     {"window_certified", chacon_extraction_certified(e) == 1},
                     {"stop_reason", chacon_extraction_stop_reason(e)},
                     {"contract_holds", violation < 0}}
                    .dump(2)
             << '\n';
  } else {
    out.os() << "# seed=" << c.seed << "\n# window=" << expect - 1 << "\n# thresholds=";
    for (size_t i = 0; i < th.size(); ++i) out.os() << (i ? " " : "") << th[i].get<std::int64_t>();
    out.os() << "\n# stop=" << chacon_extraction_stop_reason(e) << "\n# contract=" << (violation < 0 ? "holds" : "violated")
             << "\nlo,hi\n";
    for (const auto& p : iv) out.os() << p[0].get<std::int64_t>() << ',' << p[1].get<std::int64_t>() << '\n';
  }
  out.flush();
  return violation < 0 ? kOk : kVerifyFailed;
}

int cmd_verify(const Config& c) {
  char* js = nullptr;
  int pass = 0;
  check(chacon_verify(c.suite.c_str(), c.seed, &js, &pass));
  Output out(c);
  out.os() << take(js);
  out.flush();
  return pass ? kOk : kVerifyFailed;
}

int cmd_apply_t(const Config& c) {
  Range n = parse_range(c.n, "n");
  Output out(c);
  out.header("n,x");
  for (auto v = n.lo; v <= n.hi; ++v) {
    char* y = nullptr;
    check(chacon_apply_t(c.x.c_str(), v, &y));
    out.os() << v << ',' << take(y) << '\n';
  }
  out.flush();
  return kOk;
}

int cmd_locate(const Config& c) {
  char* a = nullptr;
  check(chacon_locate(c.x.c_str(), c.k, &a));
  Output out(c);
  out.os() << take(a) << '\n';
  out.flush();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chacon: exact computations for the Chacon transformation"};
  app.set_help_flag("--help", "print help");  // -h would clash with --h
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* s) {
    s->add_option("--k", cfg.k, "stage k (k_max for jset --whole)")->check(CLI::Range(0u, 40u));
    s->add_option("--format", cfg.format, "csv or json");
    s->add_option("--out", cfg.out, "output path (default stdout)");
    s->add_option("--seed", cfg.seed, "seed, recorded in every output");
    s->add_option("--cap-l", cfg.cap_l, "cap on l");
    s->add_option("--cap-n", cfg.cap_n, "cap on |n|");
    return s;
  };

  auto* dl = common(app.add_subcommand("dl", "normalized return distributions d_l'"));
  dl->add_option("--l", cfg.l, "l range a..b");
  dl->add_option("--depth", cfg.depth, "use the brute-force oracle with this initial prefix length");
  auto* corr = common(app.add_subcommand("corr", "autocorrelations c_k(n) or cell-set correlations"));
  corr->add_option("--n", cfg.n, "n range a..b");
  corr->add_option("--cells-a", cfg.cells_a, "levels of A, e.g. 0,2..3");
  corr->add_option("--cells-b", cfg.cells_b, "levels of B");
  auto* ces = common(app.add_subcommand("cesaro", "Cesaro averages of |c(n) - mu(A)mu(B)|"));
  ces->add_option("--n,--N", cfg.n, "N range a..b");
  ces->add_option("--cells-a", cfg.cells_a, "levels of A");
  ces->add_option("--cells-b", cfg.cells_b, "levels of B");
  auto* js = common(app.add_subcommand("jset", "the sets J_k, or J with --whole"));
  auto* es = common(app.add_subcommand("eset", "the zero-correlation set E_k"));
  for (auto* s : {js, es}) {
    s->add_option("--grid", cfg.grid, "n values for counts, e.g. 243,729");
    s->add_option("--bound", cfg.bound, "upper, upper-h, lower, power-rate, log-rate, binomial-log3");
    s->add_option("--C", cfg.C, "bound constant (negative: frozen C*)");
    s->add_option("--param", cfg.param, "t, alpha, a or j");
    s->add_option("--h", cfg.h, "linear | log | loglog | power:<a> | table:<path>");
  }
  js->add_option("--N-max", cfg.n_max, "largest layer N");
  js->add_flag("--whole", cfg.whole_j, "build J over k <= --k");
  es->add_option("--l-max", cfg.l_max, "gaps for l < l_max");
  auto* cv = common(app.add_subcommand("convergence", "block maxima of |c_k(n) - mu^2| off J_k"));
  cv->add_option("--h", cfg.h, "h function");
  cv->add_option("--N-lo", cfg.n_lo, "first block");
  cv->add_option("--N-max", cfg.n_max, "last block");
  auto* ex = common(app.add_subcommand("extract", "exceptional set of a supplied series"));
  ex->add_option("--in", cfg.in, "CSV with columns n,a[,b[,c]]")->required();
  auto* ve = common(app.add_subcommand("verify", "run the property suites"));
  ve->add_option("--suite", cfg.suite, std::string("all or one of: ") + chacon_verify_suites());
  auto* at = common(app.add_subcommand("apply-t", "T^n x for n in a range"));
  at->add_option("--x", cfg.x, "point, e.g. 1/3 or 0.0212")->required();
  at->add_option("--n", cfg.n, "power range a..b");
  auto* lo = common(app.add_subcommand("locate", "stage-k tower address of x"));
  lo->add_option("--x", cfg.x, "point")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (dl->parsed()) return cmd_dl(cfg);
    if (corr->parsed()) return cmd_series(cfg, false);
    if (ces->parsed()) return cmd_series(cfg, true);
    if (js->parsed()) return cmd_jset(cfg);
    if (es->parsed()) return cmd_eset(cfg);
    if (cv->parsed()) return cmd_convergence(cfg);
    if (ex->parsed()) return cmd_extract(cfg);
    if (ve->parsed()) return cmd_verify(cfg);
    if (at->parsed()) return cmd_apply_t(cfg);
    if (lo->parsed()) return cmd_locate(cfg);
  } catch (const Failure& f) {
    std::cerr << "chacon: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "chacon: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}
