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

#include <set>
#include <sstream>

#include "doctest.h"
#include "sslnet/config.hpp"

using namespace sslnet;

TEST_CASE("defaults") {
  ScenarioConfig c;
  CHECK_NOTHROW(c.validate());
  const NetworkConfig n = c.network();
  CHECK(n.send_interval_us == 500);
  CHECK(n.base_station.control_pipeline_us(kControlFrameBytes) == doctest::Approx(722.0));
  CHECK(n.base_station.tx_fifo_depth == 3);
  CHECK(n.telemetry_interval_us == 0);
  CHECK(c.get("uplink.kind") == "ethernet");
  CHECK(c.get("robots.telemetry_phase") == "spread");
}

TEST_CASE("key table is unique and complete") {
  std::set<std::string> names;
  for (const auto& k : config_keys()) {
    CHECK(names.insert(k.name).second);
    CHECK(std::string(k.doc).size() > 0);
  }
  ScenarioConfig c;
  CHECK(c.describe().size() == names.size());
  for (const auto& n : names) CHECK_NOTHROW(c.get(n));
}

TEST_CASE("describe round-trips through load") {
  ScenarioConfig a;
  a.set("computer.send_interval_us", "1900");
  a.set("uplink.kind", "serial");
  a.set("robots.count", "6");
  a.set("robots.telemetry_interval_ms", "10");
  a.set("robots.telemetry_phase", "random");
  a.set("channel.loss_table", "0:0,2.5:0.05");
  a.set("radio.control_address", "0x1122334455");
  a.set("base_station.telemetry_blocks_control", "false");
  std::stringstream text;
  for (const auto& line : a.describe()) text << line << '\n';
  ScenarioConfig b;
  b.load(text);
  CHECK(a.describe() == b.describe());
  CHECK(b.network().base_station.uplink.kind == UplinkKind::kSerial);
  CHECK(b.network().base_station.control_radio.address == 0x1122334455ULL);
  CHECK_FALSE(b.network().base_station.telemetry_busy_blocks_control);
  CHECK(b.network().control_channel.loss_vs_distance.has_value());
}

TEST_CASE("load handles comments and whitespace") {
  std::istringstream in("# header\n\n  sim.seed =  7  # trailing\nrobots.distance_m=2.5\n");
  ScenarioConfig c;
  c.load(in);
  CHECK(c.seed == 7);
  CHECK(c.distance_m == 2.5);
  CHECK(c.network().control_channel.distance_m == 2.5);
}

TEST_CASE("errors name the key and line") {
  ScenarioConfig c;
  CHECK_THROWS_WITH_AS(c.set("no.such", "1"), doctest::Contains("no.such"), ConfigError);
  CHECK_THROWS_WITH_AS(c.set("sim.window", "ten"), doctest::Contains("sim.window"), ConfigError);
  CHECK_THROWS_AS(c.set("sim.window", "-1"), ConfigError);
  CHECK_THROWS_AS(c.set("uplink.kind", "carrier-pigeon"), ConfigError);
  CHECK_THROWS_AS(c.set("channel.p_loss", "nan"), ConfigError);
  std::istringstream bad("sim.seed = 1\nbogus line\n");
  CHECK_THROWS_WITH_AS(c.load(bad, "f.cfg"), doctest::Contains("f.cfg:2"), ConfigError);
  CHECK_THROWS_AS(c.load_file("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("cross-field validation") {
  ScenarioConfig c;
  c.robot_count = 2;
  c.targets = 3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.targets = 0;
  c.robot_count = 17;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.robot_count = 1;
  c.set("channel.p_loss", "1.5");
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.set("channel.p_loss", "0");
  c.set("base_station.service_jitter_us", "900");
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("telemetry radio shares the control timing") {
  ScenarioConfig c;
  c.set("radio.data_rate_bps", "1000000");
  const auto n = c.network();
  CHECK(n.base_station.telemetry_radio.data_rate_bps == 1000000);
  CHECK(n.base_station.telemetry_radio.frequency_mhz == 2529.0);
}
