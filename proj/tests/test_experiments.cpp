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

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "sslnet/experiments.hpp"

using namespace sslnet;

namespace {

std::string csv(const ExperimentResult& r, const ScenarioConfig& cfg) {
  std::ostringstream os;
  write_csv(os, r.rows, config_comments(cfg, r.name));
  return os.str();
}

}  // namespace

TEST_CASE("default run") {
  ScenarioConfig cfg;
  const RunResult r = run_scenario(cfg);
  REQUIRE(r.window_satisfied);
  REQUIRE(r.stats.size() == 1);
  CHECK(r.stats[0].n_intervals == 500);
  CHECK(r.stats[0].mean == 722.0);
  CHECK(r.stats[0].stddev == 0.0);
  CHECK(r.counters[0].sent == r.counters[0].accounted());
}

TEST_CASE("unsatisfied window is reported, not thrown") {
  ScenarioConfig cfg;
  cfg.max_time_ms = 5;
  const RunResult r = run_scenario(cfg);
  CHECK_FALSE(r.window_satisfied);
  const ExperimentResult e = single_run(cfg);
  CHECK_FALSE(e.all_satisfied);
}

TEST_CASE("identical config and seed give identical CSV and trace") {
  ScenarioConfig cfg;
  cfg.repeat = 2;
  cfg.control_channel.p_loss = 0.1;
  cfg.robot_count = 3;
  cfg.telemetry_interval_ms = 10;
  CHECK(csv(interval_sweep(cfg, {500, 1000}), cfg) == csv(interval_sweep(cfg, {500, 1000}), cfg));
  CHECK(csv(multi_robot(cfg, {1, 3}), cfg) == csv(multi_robot(cfg, {1, 3}), cfg));
  std::ostringstream a;
  std::ostringstream b;
  const RunResult ra = run_scenario(cfg, 5, &a);
  const RunResult rb = run_scenario(cfg, 5, &b);
  CHECK(a.str() == b.str());
  CHECK(ra.trace_hash == rb.trace_hash);
  CHECK(ra.events == rb.events);
  CHECK(run_scenario(cfg, 6).trace_hash != ra.trace_hash);
}

TEST_CASE("interval sweep rows and seeds") {
  ScenarioConfig cfg;
  cfg.repeat = 3;
  cfg.seed = 10;
  const ExperimentResult r = interval_sweep(cfg, {250, 1900});
  REQUIRE(r.rows.size() == 6);
  CHECK(r.rows[0].param == 250.0);
  CHECK(r.rows[0].seed == 10);
  CHECK(r.rows[2].seed == 12);
  CHECK(r.rows[0].stats.mean == 722.0);
  CHECK(r.rows[3].stats.mean == 1900.0);
  CHECK(r.summary.size() == 2);
  CHECK_THROWS_AS(interval_sweep(cfg, {}), std::invalid_argument);
}

TEST_CASE("serial uplink corrupts below its drain time only") {
  ScenarioConfig cfg;
  cfg.repeat = 1;
  cfg.base_station.uplink.kind = UplinkKind::kSerial;
  const ExperimentResult r = interval_sweep(cfg, {800, 1900});
  CHECK(r.rows[0].stats.corrupt_delivered > 0);
  CHECK(r.rows[1].stats.corrupt_delivered == 0);
  CHECK(r.rows[1].stats.mean == doctest::Approx(1900.0));
}

TEST_CASE("telemetry sweep baseline and ordering") {
  ScenarioConfig cfg;
  std::vector<TelemetryPoint> pts;
  const ExperimentResult r = telemetry_sweep(cfg, {10, 50, 200}, 6, &pts);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0].sampling_ms == 0.0);
  CHECK(pts[0].increase_pct == 0.0);
  CHECK(pts[1].increase_pct > pts[2].increase_pct);
  CHECK(pts[2].increase_pct > pts[3].increase_pct);
  CHECK(pts[3].increase_pct > 0.0);
  CHECK(r.rows.size() == 4);  // control goes to robot 0 only

  cfg.base_station.telemetry_busy_blocks_control = false;
  telemetry_sweep(cfg, {50}, 6, &pts);
  CHECK(pts[1].increase_pct == doctest::Approx(0.0));
}

TEST_CASE("distance sweep honours a loss table") {
  ScenarioConfig cfg;
  const ExperimentResult flat = distance_sweep(cfg, {0.4, 2.5, 5.0});
  REQUIRE(flat.rows.size() == 3);
  for (const auto& row : flat.rows) CHECK(row.stats.mean == 722.0);

  cfg.set("channel.loss_table", "0:0,1:0.05,3:0.2");
  const ExperimentResult lossy = distance_sweep(cfg, {0.4, 2.5, 5.0});
  CHECK(lossy.rows[0].stats.lost == 0);
  CHECK(lossy.rows[1].stats.lost > 0);
  CHECK(lossy.rows[2].stats.lost > lossy.rows[1].stats.lost);
  CHECK(distance_sweep(cfg, {1.0}).rows.size() == 1);
}

TEST_CASE("multi-robot rows cover every robot") {
  ScenarioConfig cfg;
  const ExperimentResult r = multi_robot(cfg, {1, 2, 6});
  CHECK(r.rows.size() == 9);
  CHECK(r.all_satisfied);
  CHECK_THROWS_AS(multi_robot(cfg, {17}), std::invalid_argument);
}

TEST_CASE("config comments echo the effective configuration") {
  ScenarioConfig cfg;
  cfg.set("computer.send_interval_us", "1234");
  const auto lines = config_comments(cfg, "run");
  CHECK(lines.front() == "sslnet run");
  CHECK(std::find(lines.begin(), lines.end(), "computer.send_interval_us=1234") != lines.end());
}
