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

// sslnet: run the delivery-time experiments or serve the live UDP bridge.
// Exit status: 0 when every measurement window filled, 1 when one did not,
// 2 on usage or configuration errors.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sslnet/config.hpp"
#include "sslnet/experiments.hpp"
#include "sslnet/live_bridge.hpp"

namespace {

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted = true; }

struct GlobalOptions {
  std::string config_path;
  std::int64_t seed = -1;
  std::string out;
  std::int64_t repeat = -1;
  std::string trace;
  bool trace_requested = false;
  std::vector<std::string> overrides;
};

sslnet::ScenarioConfig build_config(const GlobalOptions& g) {
  sslnet::ScenarioConfig cfg;
  if (!g.config_path.empty()) cfg.load_file(g.config_path);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sslnet::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed >= 0) cfg.seed = static_cast<std::uint64_t>(g.seed);
  if (g.repeat >= 0) cfg.set("sim.repeat", std::to_string(g.repeat));
  cfg.validate();
  return cfg;
}

int report(const sslnet::ExperimentResult& r, const sslnet::ScenarioConfig& cfg, const GlobalOptions& g) {
  sslnet::print_summary(std::cout, r.rows);
  std::cout << '\n';
  for (const auto& line : r.summary) std::cout << line << '\n';
  if (!g.out.empty()) {
    sslnet::write_csv(g.out, r.rows, sslnet::config_comments(cfg, r.name));
    std::cout << "wrote " << g.out << '\n';
  }
  if (!r.all_satisfied) {
    std::cerr << "warning: at least one run ended before its measurement window filled\n";
    return 1;
  }
  return 0;
}

void print_live_counters(const sslnet::LiveCounters& c) {
  std::printf(
      "ingress %llu  malformed %llu  oversized %llu  fifo_drops %llu\n"
      "broadcast %llu  robot_receptions %llu\n"
      "telemetry generated %llu  lost %llu  forwarded %llu\n"
      "egress sent %llu  failed %llu  no_peer %llu\n",
      static_cast<unsigned long long>(c.ingress), static_cast<unsigned long long>(c.malformed),
      static_cast<unsigned long long>(c.oversized), static_cast<unsigned long long>(c.fifo_drops),
      static_cast<unsigned long long>(c.broadcast), static_cast<unsigned long long>(c.robot_receptions),
      static_cast<unsigned long long>(c.telemetry_generated), static_cast<unsigned long long>(c.telemetry_lost),
      static_cast<unsigned long long>(c.telemetry_forwarded), static_cast<unsigned long long>(c.egress_sent),
      static_cast<unsigned long long>(c.egress_failed), static_cast<unsigned long long>(c.egress_no_peer));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sslnet: robot radio network simulator and live UDP bridge"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Scenario file of key = value lines")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Base seed (overrides sim.seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "CSV output path");
  app.add_option("--repeat", g.repeat, "Seeds per interval-sweep point (overrides sim.repeat)")
      ->check(CLI::PositiveNumber);
  app.add_option("--trace", g.trace, "Event trace for `run`; '-' or no value writes to stdout")
      ->expected(0, 1)
      ->default_str("-");
  app.add_option("--set", g.overrides, "Override one config key (key=value); repeatable")
      ->type_size(1)
      ->allow_extra_args(false);
  bool list_keys = false;
  app.add_flag("--list-keys", list_keys, "Print every config key and exit");

  std::vector<double> intervals{250, 500, 1000, 1900};
  auto* interval = app.add_subcommand("interval-sweep", "Single robot, varying computer send interval");
  interval->add_option("--intervals", intervals, "Send intervals in us")->delimiter(',');

  std::vector<double> sampling{10, 50, 200};
  std::size_t telemetry_robots = 6;
  auto* telemetry = app.add_subcommand("telemetry-sweep", "Control delivery interval under telemetry load");
  telemetry->add_option("--sampling-ms", sampling, "Telemetry sampling intervals in ms")->delimiter(',');
  telemetry->add_option("--telemetry-robots", telemetry_robots, "Robots sending telemetry")
      ->check(CLI::Range(1, 16));

  std::vector<double> distances{0.4, 2.5, 5.0};
  auto* distance = app.add_subcommand("distance-sweep", "Delivery interval against robot distance");
  distance->add_option("--distances", distances, "Distances in metres")->delimiter(',');

  std::vector<std::size_t> counts{1, 2, 6};
  auto* multi = app.add_subcommand("multi-robot", "Round-robin control to N robots");
  multi->add_option("--counts", counts, "Robot counts")->delimiter(',');

  auto* run = app.add_subcommand("run", "One scenario exactly as configured");

  std::int64_t duration_ms = 0;
  auto* serve = app.add_subcommand("serve", "Expose the base station as a UDP service");
  serve->add_option("--duration-ms", duration_ms, "Stop after this long (0 = until interrupted)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (list_keys) {
    for (const auto& k : sslnet::config_keys()) std::printf("%-40s %s\n", k.name, k.doc);
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  g.trace_requested = app.get_option("--trace")->count() > 0;

  try {
    const sslnet::ScenarioConfig cfg = build_config(g);
    if (g.trace_requested && !run->parsed()) {
      std::cerr << "note: --trace applies to the `run` subcommand only\n";
    }

    if (interval->parsed()) return report(sslnet::interval_sweep(cfg, intervals), cfg, g);
    if (telemetry->parsed()) return report(sslnet::telemetry_sweep(cfg, sampling, telemetry_robots), cfg, g);
    if (distance->parsed()) return report(sslnet::distance_sweep(cfg, distances), cfg, g);
    if (multi->parsed()) return report(sslnet::multi_robot(cfg, counts), cfg, g);
    if (run->parsed()) {
      std::ofstream trace_file;
      std::ostream* trace = nullptr;
      if (g.trace_requested) {
        if (g.trace.empty() || g.trace == "-") {
          trace = &std::cout;
        } else {
          trace_file.open(g.trace, std::ios::binary | std::ios::trunc);
          if (!trace_file) throw std::runtime_error("cannot open " + g.trace);
          trace = &trace_file;
        }
      }
      return report(sslnet::single_run(cfg, trace), cfg, g);
    }
    if (serve->parsed()) {
      sslnet::LiveBridge bridge(sslnet::live_bridge_config(cfg));
      std::signal(SIGINT, on_sigint);
      std::signal(SIGTERM, on_sigint);
      bridge.start();
      std::printf("serving control on %s:%u, telemetry to <sender>:%u\n", cfg.live_bind.c_str(),
                  bridge.control_port(), cfg.telemetry_port);
      std::fflush(stdout);
      const auto until = std::chrono::steady_clock::now() + std::chrono::milliseconds(duration_ms);
      while (!g_interrupted && (duration_ms == 0 || std::chrono::steady_clock::now() < until)) {
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
      }
      bridge.stop();
      print_live_counters(bridge.counters());
      return 0;
    }
  } catch (const sslnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
