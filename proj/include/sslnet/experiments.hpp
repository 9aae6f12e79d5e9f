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

// The delivery-time experiments. Each sweep point is an independent
// simulation; points run in parallel and rows are assembled in a fixed order.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sslnet/config.hpp"
#include "sslnet/metrics.hpp"
#include "sslnet/nodes.hpp"

namespace sslnet {

struct RunResult {
  /// One entry per controlled robot, by robot id.
  std::vector<DeliveryStats> stats;
  std::vector<FrameCounters> counters;
  TelemetryCounters telemetry;
  std::uint64_t telemetry_received_by_computer = 0;
  /// Every controlled robot filled warmup + window + 1 arrivals.
  bool window_satisfied = false;
  std::uint64_t trace_hash = 0;
  std::uint64_t events = 0;
  SimTime end_time = 0;
};

/// One simulation of `cfg` with the given seed. `trace` receives one line
/// per dispatched event when non-null.
RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, std::ostream* trace = nullptr);
inline RunResult run_scenario(const ScenarioConfig& cfg) { return run_scenario(cfg, cfg.seed); }

struct ExperimentResult {
  std::string name;
  std::vector<StatsRow> rows;
  bool all_satisfied = true;
  /// Human-readable lines printed after the table.
  std::vector<std::string> summary;
};

/// Single robot; `repeat` seeds per interval. param = send interval (us).
ExperimentResult interval_sweep(const ScenarioConfig& cfg, const std::vector<double>& intervals_us);

struct TelemetryPoint {
  double sampling_ms = 0.0;  // 0 = telemetry off
  double mean_us = 0.0;
  double stddev_us = 0.0;
  double increase_pct = 0.0;  // mean vs. the off baseline
};

/// `telemetry_robots` robots send telemetry; control goes to robot 0 only.
/// param = sampling interval in ms, 0 for the baseline.
ExperimentResult telemetry_sweep(const ScenarioConfig& cfg, const std::vector<double>& sampling_ms,
                                 std::size_t telemetry_robots, std::vector<TelemetryPoint>* points = nullptr);

/// One run per distance (every robot at that distance). param = metres.
ExperimentResult distance_sweep(const ScenarioConfig& cfg, const std::vector<double>& distances_m);

/// One run per robot count, control to every robot. param = N.
ExperimentResult multi_robot(const ScenarioConfig& cfg, const std::vector<std::size_t>& counts);

/// Rows for every controlled robot of one run.
ExperimentResult single_run(const ScenarioConfig& cfg, std::ostream* trace = nullptr);

/// Effective configuration as CSV comment lines.
std::vector<std::string> config_comments(const ScenarioConfig& cfg, const std::string& experiment);

}  // namespace sslnet
