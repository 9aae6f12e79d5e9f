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

// Flat dotted-key scenario configuration. Every key has a default; files
// and command-line overrides may only set keys from the table below.
//
//   # comment
//   computer.send_interval_us = 500
//   uplink.kind = serial

#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sslnet/nodes.hpp"

namespace sslnet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  // sim.*
  std::uint64_t seed = 1;
  std::size_t window = 500;
  std::size_t warmup = 20;
  std::size_t repeat = 25;
  std::int64_t max_time_ms = 60'000;

  // computer.*
  std::int64_t send_interval_us = 500;
  std::size_t targets = 0;  // 0 = every robot

  // robots.*
  std::size_t robot_count = 1;
  std::int64_t telemetry_interval_ms = 0;
  TelemetryPhase telemetry_phase = TelemetryPhase::kSpread;
  std::int64_t telemetry_launch_jitter_us = kDefaultTelemetryLaunchJitterUs;
  double distance_m = 0.4;

  // radio.*, uplink.*, base_station.*
  BaseStationConfig base_station;

  // channel.* (control radio) and telemetry_channel.*
  ChannelModel control_channel;
  ChannelModel telemetry_channel;

  // live.*
  std::string live_bind = "127.0.0.1";
  std::uint16_t control_port = 10010;
  std::uint16_t telemetry_port = 10011;

  /// Sets one key from its text form. Throws ConfigError for unknown keys or
  /// unparsable values.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Reads "key = value" lines; '#' starts a comment.
  void load(std::istream& in, const std::string& source = "<config>");
  void load_file(const std::string& path);

  /// "key=value" for every key, in table order.
  std::vector<std::string> describe() const;

  NetworkConfig network(std::uint64_t seed_override) const;
  NetworkConfig network() const { return network(seed); }

  /// Cross-field checks; throws ConfigError.
  void validate() const;
};

struct ConfigKey {
  const char* name;
  const char* doc;
};

/// Every accepted key with a one-line description.
const std::vector<ConfigKey>& config_keys();

}  // namespace sslnet
