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


// Acceptance driver: `acceptance N` prints one line for criterion N and
// exits nonzero when it fails; with no argument every criterion is run.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <string>

#include <json.hpp>

#include "chacon/chacon.h"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  Run r;
  std::string cmd = std::string(CHACON_CLI_PATH) + " " + args;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Outcome table() {
  const std::string expect =
      "# seed=0\n"
      "l,n,num,den,decimal\n"
      "0,0,1,1,1\n"
      "1,4,1,2,0.5\n"
      "1,5,1,2,0.5\n"
      "2,8,1,6,0.166666666667\n"
      "2,9,2,3,0.666666666667\n"
      "2,10,1,6,0.166666666667\n"
      "3,13,1,2,0.5\n"
      "3,14,1,2,0.5\n";
  Run r = run_cli("dl --k 1 --l 0..3");
  if (r.code != 0) return {false, "exit " + std::to_string(r.code)};
  if (r.out != expect) return {false, "table differs:\n" + r.out};
  return {true, "d_0..d_3 exact"};
}

Outcome suite(const char* name) {
  char* js = nullptr;
  int pass = 0;
  chacon_status s = chacon_verify(name, 7, &js, &pass);
  if (s != CHACON_OK) return {false, chacon_last_error()};
  std::string report(js);
  chacon_string_free(js);
  const auto doc = nlohmann::json::parse(report);
  std::string detail = std::string("suite ") + name + ", " + std::to_string(doc["checks"].size()) + " checks";
  if (pass) return {true, detail};
  for (const auto& c : doc["checks"]) {
    if (!c["pass"].get<bool>()) {
      detail += "; failed: " + c["name"].get<std::string>() + " -- " + c["detail"].get<std::string>();
    }
  }
  return {false, detail};
}

Outcome determinism() {
  Run a = run_cli("verify --suite all --seed 7");
  Run b = run_cli("verify --suite all --seed 7");
  if (a.out.empty()) return {false, "no output"};
  if (a.out != b.out) return {false, "outputs differ"};
  return {true, std::to_string(a.out.size()) + " identical bytes (exit " + std::to_string(a.code) + ")"};
}

const std::map<int, const char*> kSuites = {
    {2, "oracle"},       {3, "shape"},        {4, "ternary"}, {5, "counting"}, {6, "pn"},
    {7, "constants"},    {8, "majorization"}, {9, "convergence"}, {10, "upper"}, {11, "lower"},
    {12, "extractor"},
};

Outcome criterion(int n) {
  if (n == 1) return table();
  if (n == 13) return determinism();
  return suite(kSuites.at(n));
}

}  // namespace

int main(int argc, char** argv) {
  int lo = 1, hi = 13;
  if (argc > 1) {
    lo = hi = std::atoi(argv[1]);
    if (lo < 1 || lo > 13) {
      std::fprintf(stderr, "usage: acceptance [1-13]\n");
      return 2;
    }
  }
  bool all = true;
  for (int n = lo; n <= hi; ++n) {
    Outcome o = criterion(n);
    all = all && o.pass;
    std::printf("criterion %d: %s %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
