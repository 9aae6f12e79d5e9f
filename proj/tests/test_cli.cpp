// Copyright 2026 The sslnet Authors
//
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

// Drives the built command-line tool through the shell.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string("\"") + SSLNET_CLI_PATH + "\" " + args + " 2>&1";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("sslnet_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(cli("").status == 2);
  CHECK(cli("no-such-command").status == 2);
  CHECK(cli("run --set no.such.key=1").status == 2);
  CHECK(cli("run --set sim.window").status == 2);
  CHECK(cli("--config /nonexistent.cfg run").status == 2);
}

TEST_CASE("list keys") {
  const Result r = cli("--list-keys");
  CHECK(r.status == 0);
  CHECK(r.out.find("computer.send_interval_us") != std::string::npos);
}

TEST_CASE("sweeps write byte-identical CSV for the same seed") {
  TempDir dir;
  const auto a = dir.path / "a.csv";
  const auto b = dir.path / "b.csv";
  const std::string args = " --repeat 2 --seed 4 interval-sweep --intervals 500,1900";
  REQUIRE(cli("--out " + a.string() + args).status == 0);
  REQUIRE(cli(args + " --out " + b.string()).status == 0);
  const std::string text = slurp(a);
  CHECK(text == slurp(b));
  CHECK(text.find("# sslnet interval-sweep") == 0);
  CHECK(text.find("\nexperiment,param,robot_id") != std::string::npos);
  CHECK(text.find("interval-sweep,1900.00,0,500,1900.00,") != std::string::npos);
}

TEST_CASE("flags beat the config file") {
  TempDir dir;
  const auto cfg = dir.path / "s.cfg";
  std::ofstream(cfg) << "computer.send_interval_us = 1000\nsim.seed = 3\n";
  const auto out = dir.path / "r.csv";
  REQUIRE(cli("--config " + cfg.string() + " --set computer.send_interval_us=1900 --out " + out.string() + " run")
              .status == 0);
  const std::string text = slurp(out);
  CHECK(text.find("# computer.send_interval_us=1900") != std::string::npos);
  CHECK(text.find("# sim.seed=3") != std::string::npos);
  CHECK(text.find("run,0.00,0,500,1900.00,") != std::string::npos);
}

TEST_CASE("unsatisfied window exits 1") {
  CHECK(cli("--set sim.max_time_ms=5 run").status == 1);
}

TEST_CASE("trace goes to a file for run") {
  TempDir dir;
  const auto t = dir.path / "trace.txt";
  REQUIRE(cli("--set sim.window=10 --trace " + t.string() + " run").status == 0);
  const std::string text = slurp(t);
  CHECK(text.find(" COMPUTER_SEND\n") != std::string::npos);
  const Result other = cli("--repeat 1 --trace interval-sweep --intervals 1900");
  CHECK(other.status == 0);
  CHECK(other.out.find("--trace applies to the `run` subcommand only") != std::string::npos);
}

TEST_CASE("other sweeps run") {
  CHECK(cli("telemetry-sweep --sampling-ms 50 --telemetry-robots 2").status == 0);
  CHECK(cli("distance-sweep --distances 0.4,5").status == 0);
  const Result m = cli("multi-robot --counts 1,2");
  CHECK(m.status == 0);
  CHECK(m.out.find("2 robots") != std::string::npos);
}

TEST_CASE("serve for a fixed duration prints counters") {
  const Result r = cli("--set live.control_port=0 serve --duration-ms 100");
  CHECK(r.status == 0);
  CHECK(r.out.find("serving control on 127.0.0.1:") != std::string::npos);
  CHECK(r.out.find("ingress 0") != std::string::npos);
}
