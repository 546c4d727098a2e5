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


// Runs the chacon executable as a subprocess.

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  std::string cmd = std::string(CHACON_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("dl table") {
    Run r = run("dl --k 1 --l 1..2 --seed 3");
    CHECK(r.code == 0);
    CHECK(r.out ==
          "# seed=3\n"
          "l,n,num,den,decimal\n"
          "1,4,1,2,0.5\n"
          "1,5,1,2,0.5\n"
          "2,8,1,6,0.166666666667\n"
          "2,9,2,3,0.666666666667\n"
          "2,10,1,6,0.166666666667\n");
    Run brute = run("dl --k 1 --l 1..2 --seed 3 --depth 6");
    CHECK(brute.out == r.out);
  }

  TEST_CASE("json output") {
    Run r = run("dl --k 1 --l 0 --format json");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"num\"") != std::string::npos);
    CHECK(run("dl --k 1 --l 0 --format xml").code == 2);
  }

  TEST_CASE("correlations") {
    Run r = run("corr --k 1 --n 0..0");
    CHECK(r.code == 0);
    CHECK(r.out.find("0,2,9,") != std::string::npos);
    Run c = run("corr --k 1 --n 3 --cells-a 1 --cells-b 0");
    CHECK(c.code == 0);
    CHECK(c.out.find("3,1,9,") != std::string::npos);  // mu/2 at n = h - 1
  }

  TEST_CASE("exit codes") {
    CHECK(run("dl --k 1 --l 5..2").code == 2);
    CHECK(run("dl --k 1 --l abc").code == 2);
    CHECK(run("dl --k 1 --l 0..20 --cap-l 10").code == 3);
    CHECK(run("corr --k 1 --n 0..100 --cap-n 50").code == 3);
    CHECK(run("apply-t --x 1 --n 1").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("verify --suite nope").code == 2);
    CHECK(run("extract --in /nonexistent/file.csv").code == 2);
  }

  TEST_CASE("sets") {
    Run e = run("eset --k 1 --l-max 10");
    CHECK(e.code == 0);
    CHECK(e.out.rfind("# seed=0\n", 0) == 0);
    Run j = run("jset --k 2 --whole --h log --grid 243,729 --bound upper-h");
    CHECK(j.code == 0);
  }

  TEST_CASE("extract from file") {
    const char* path = "cli_extract_input.csv";
    {
      std::ofstream f(path);
      f << "n,a\n0,0\n1,1\n2,0\n3,0\n4,0\n5,0\n";
    }
    Run r = run(std::string("extract --in ") + path);
    CHECK(r.code == 0);
    std::remove(path);
  }

  TEST_CASE("verify is reproducible") {
    Run a = run("verify --suite table --seed 11");
    Run b = run("verify --suite table --seed 11");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"seed\": 11") != std::string::npos);
  }
}
