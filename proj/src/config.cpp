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

#include "sslnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace sslnet {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw ConfigError("bad value for " + key + ": '" + value + "' (expected " + want + ")");
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(d)) bad_value(key, v, "a finite number");
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v, "a number");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
  const auto n = parse_int(key, v);
  if (n < 0) bad_value(key, v, "a non-negative integer");
  return static_cast<std::size_t>(n);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "true/false");
}

std::uint64_t parse_address(const std::string& key, const std::string& v) {
  std::string_view s = v;
  if (s.starts_with("0x") || s.starts_with("0X")) s.remove_prefix(2);
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out, 16);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) bad_value(key, v, "a hex address");
  return out;
}

std::string fmt_double(double d) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, p);
}

std::string fmt_address(std::uint64_t a) {
  std::ostringstream os;
  os << "0x" << std::uppercase << std::hex << a;
  return os.str();
}

struct Entry {
  ConfigKey key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define SSLNET_NUM(KEY, DOC, FIELD, PARSE)                                                       \
  Entry {                                                                                        \
    {KEY, DOC}, [](ScenarioConfig& c, const std::string& v) { c.FIELD = PARSE(KEY, v); },        \
        [](const ScenarioConfig& c) { return std::to_string(c.FIELD); }                          \
  }
#define SSLNET_REAL(KEY, DOC, FIELD)                                                             \
  Entry {                                                                                        \
    {KEY, DOC}, [](ScenarioConfig& c, const std::string& v) { c.FIELD = parse_double(KEY, v); }, \
        [](const ScenarioConfig& c) { return fmt_double(c.FIELD); }                              \
  }
#define SSLNET_BOOL(KEY, DOC, FIELD)                                                             \
  Entry {                                                                                        \
    {KEY, DOC}, [](ScenarioConfig& c, const std::string& v) { c.FIELD = parse_bool(KEY, v); },   \
        [](const ScenarioConfig& c) { return std::string(c.FIELD ? "true" : "false"); }          \
  }

const std::vector<Entry>& table() {
  static const std::vector<Entry> entries = {
      SSLNET_NUM("sim.seed", "base random seed; sweeps use seed, seed+1, ...", seed,
                 [](const char* k, const std::string& v) { return static_cast<std::uint64_t>(parse_count(k, v)); }),
      SSLNET_NUM("sim.window", "intervals per measurement window", window, parse_count),
      SSLNET_NUM("sim.warmup", "arrivals discarded before the window", warmup, parse_count),
      SSLNET_NUM("sim.repeat", "seeds per interval-sweep point", repeat, parse_count),
      SSLNET_NUM("sim.max_time_ms", "virtual-time cap per run", max_time_ms, parse_int),
      SSLNET_NUM("computer.send_interval_us", "time between control sends", send_interval_us, parse_int),
      SSLNET_NUM("computer.targets", "robots 0..n-1 receive control (0 = all)", targets, parse_count),
      SSLNET_NUM("robots.count", "robot nodes on the network", robot_count, parse_count),
      SSLNET_NUM("robots.telemetry_interval_ms", "telemetry sampling interval (0 = off)", telemetry_interval_ms,
                 parse_int),
      Entry{{"robots.telemetry_phase", "spread | aligned | random telemetry timer start"},
            [](ScenarioConfig& c, const std::string& v) {
              if (v == "spread") c.telemetry_phase = TelemetryPhase::kSpread;
              else if (v == "aligned") c.telemetry_phase = TelemetryPhase::kAligned;
              else if (v == "random") c.telemetry_phase = TelemetryPhase::kRandom;
              else bad_value("robots.telemetry_phase", v, "spread, aligned or random");
            },
            [](const ScenarioConfig& c) { return std::string(to_string(c.telemetry_phase)); }},
      SSLNET_NUM("robots.telemetry_launch_jitter_us", "telemetry send delay after the timer fires, U[0, x)",
                 telemetry_launch_jitter_us, parse_int),
      SSLNET_REAL("robots.distance_m", "distance of every robot from the base station", distance_m),
      SSLNET_REAL("radio.data_rate_bps", "air data rate", base_station.control_radio.data_rate_bps),
      SSLNET_NUM("radio.preamble_bytes", "on-air preamble bytes", base_station.control_radio.preamble_bytes,
                 [](const char* k, const std::string& v) { return static_cast<int>(parse_count(k, v)); }),
      SSLNET_NUM("radio.address_bytes", "on-air address bytes", base_station.control_radio.address_bytes,
                 [](const char* k, const std::string& v) { return static_cast<int>(parse_count(k, v)); }),
      SSLNET_NUM("radio.crc_bytes", "on-air CRC bytes", base_station.control_radio.crc_bytes,
                 [](const char* k, const std::string& v) { return static_cast<int>(parse_count(k, v)); }),
      SSLNET_REAL("radio.spi_rate_bps", "SPI clock between MCU and transceiver",
                  base_station.control_radio.spi_rate_bps),
      SSLNET_REAL("radio.control_frequency_mhz", "control channel frequency", base_station.control_radio.frequency_mhz),
      Entry{{"radio.control_address", "control pipe address (hex)"},
            [](ScenarioConfig& c, const std::string& v) {
              c.base_station.control_radio.address = parse_address("radio.control_address", v);
            },
            [](const ScenarioConfig& c) { return fmt_address(c.base_station.control_radio.address); }},
      SSLNET_REAL("radio.telemetry_frequency_mhz", "telemetry channel frequency",
                  base_station.telemetry_radio.frequency_mhz),
      Entry{{"radio.telemetry_address", "telemetry pipe address (hex)"},
            [](ScenarioConfig& c, const std::string& v) {
              c.base_station.telemetry_radio.address = parse_address("radio.telemetry_address", v);
            },
            [](const ScenarioConfig& c) { return fmt_address(c.base_station.telemetry_radio.address); }},
      SSLNET_REAL("channel.p_loss", "control frame loss probability", control_channel.p_loss),
      SSLNET_REAL("channel.p_bitflip", "control per-bit flip probability", control_channel.p_bitflip),
      Entry{{"channel.loss_table", "distance:p pairs overriding channel.p_loss, e.g. 0:0,2.5:0.1"},
            [](ScenarioConfig& c, const std::string& v) {
              if (v.empty() || v == "none") {
                c.control_channel.loss_vs_distance.reset();
                return;
              }
              try {
                c.control_channel.loss_vs_distance = LossTable::parse(v);
              } catch (const LinkError& e) {
                throw ConfigError(std::string("channel.loss_table: ") + e.what());
              }
            },
            [](const ScenarioConfig& c) {
              return c.control_channel.loss_vs_distance ? c.control_channel.loss_vs_distance->to_string()
                                                        : std::string("none");
            }},
      SSLNET_BOOL("channel.collisions_enabled", "overlapping telemetry transmissions are lost",
                  telemetry_channel.collisions_enabled),
      SSLNET_REAL("telemetry_channel.p_loss", "telemetry frame loss probability", telemetry_channel.p_loss),
      SSLNET_REAL("telemetry_channel.p_bitflip", "telemetry per-bit flip probability", telemetry_channel.p_bitflip),
      Entry{{"uplink.kind", "ethernet | serial"},
            [](ScenarioConfig& c, const std::string& v) {
              if (v == "ethernet") c.base_station.uplink.kind = UplinkKind::kEthernet;
              else if (v == "serial") c.base_station.uplink.kind = UplinkKind::kSerial;
              else bad_value("uplink.kind", v, "ethernet or serial");
            },
            [](const ScenarioConfig& c) {
              return std::string(c.base_station.uplink.kind == UplinkKind::kEthernet ? "ethernet" : "serial");
            }},
      SSLNET_REAL("uplink.latency_us", "Ethernet one-way latency", base_station.uplink.latency_us),
      SSLNET_REAL("uplink.baud", "serial baud rate", base_station.uplink.baud),
      SSLNET_NUM("uplink.bits_per_byte", "serial bits per byte (start+data+stop)", base_station.uplink.bits_per_byte,
                 [](const char* k, const std::string& v) { return static_cast<int>(parse_count(k, v)); }),
      SSLNET_NUM("uplink.buffer_bytes", "serial FIFO capacity", base_station.uplink.buffer_bytes,
                 [](const char* k, const std::string& v) { return static_cast<int>(parse_count(k, v)); }),
      SSLNET_REAL("base_station.service_time_us", "per-packet processing before SPI + air",
                  base_station.service_time_us),
      SSLNET_REAL("base_station.service_jitter_us", "half-width of the uniform service-time variation",
                  base_station.service_jitter_us),
      SSLNET_REAL("base_station.telemetry_forward_time_us", "processor time to forward one telemetry frame",
                  base_station.telemetry_forward_time_us),
      SSLNET_NUM("base_station.tx_fifo_depth", "control TX FIFO slots", base_station.tx_fifo_depth, parse_count),
      SSLNET_BOOL("base_station.telemetry_blocks_control", "telemetry forwarding delays the next control service",
                  base_station.telemetry_busy_blocks_control),
      Entry{{"live.bind_address", "address the live bridge binds"},
            [](ScenarioConfig& c, const std::string& v) { c.live_bind = v; },
            [](const ScenarioConfig& c) { return c.live_bind; }},
      SSLNET_NUM("live.control_port", "UDP port for control datagrams", control_port,
                 [](const char* k, const std::string& v) {
                   const auto n = parse_count(k, v);
                   if (n > 65535) bad_value(k, v, "a port number");
                   return static_cast<std::uint16_t>(n);
                 }),
      SSLNET_NUM("live.telemetry_port", "UDP port telemetry datagrams are sent to", telemetry_port,
                 [](const char* k, const std::string& v) {
                   const auto n = parse_count(k, v);
                   if (n > 65535) bad_value(k, v, "a port number");
                   return static_cast<std::uint16_t>(n);
                 }),
  };
  return entries;
}

#undef SSLNET_NUM
#undef SSLNET_REAL
#undef SSLNET_BOOL

const Entry& find(const std::string& key) {
  for (const auto& e : table()) {
    if (key == e.key.name) return e;
  }
  throw ConfigError("unknown config key: " + key);
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : table()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void ScenarioConfig::set(const std::string& key, const std::string& value) { find(key).set(*this, trim(value)); }

std::string ScenarioConfig::get(const std::string& key) const { return find(key).get(*this); }

void ScenarioConfig::load(std::istream& in, const std::string& source) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void ScenarioConfig::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  load(f, path);
}

std::vector<std::string> ScenarioConfig::describe() const {
  std::vector<std::string> out;
  for (const auto& e : table()) out.push_back(std::string(e.key.name) + "=" + e.get(*this));
  return out;
}

NetworkConfig ScenarioConfig::network(std::uint64_t seed_override) const {
  NetworkConfig n;
  n.send_interval_us = send_interval_us;
  n.robot_count = robot_count;
  n.controlled = targets;
  n.telemetry_interval_us = telemetry_interval_ms * 1000;
  n.telemetry_phase = telemetry_phase;
  n.telemetry_launch_jitter_us = telemetry_launch_jitter_us;
  n.base_station = base_station;
  // The two radios share the transceiver timing parameters; only frequency
  // and address differ.
  RadioConfig& t = n.base_station.telemetry_radio;
  const RadioConfig& c = n.base_station.control_radio;
  t.data_rate_bps = c.data_rate_bps;
  t.preamble_bytes = c.preamble_bytes;
  t.address_bytes = c.address_bytes;
  t.crc_bytes = c.crc_bytes;
  t.spi_rate_bps = c.spi_rate_bps;
  n.control_channel = control_channel;
  n.control_channel.distance_m = distance_m;
  n.telemetry_channel = telemetry_channel;
  n.telemetry_channel.distance_m = distance_m;
  n.seed = seed_override;
  return n;
}

void ScenarioConfig::validate() const {
  if (window == 0) throw ConfigError("sim.window must be >= 1");
  if (repeat == 0) throw ConfigError("sim.repeat must be >= 1");
  if (max_time_ms <= 0) throw ConfigError("sim.max_time_ms must be positive");
  if (send_interval_us <= 0) throw ConfigError("computer.send_interval_us must be positive");
  if (robot_count == 0 || robot_count > 16) throw ConfigError("robots.count must be in [1, 16]");
  if (targets > robot_count) throw ConfigError("computer.targets exceeds robots.count");
  if (telemetry_interval_ms < 0) throw ConfigError("robots.telemetry_interval_ms must be >= 0");
  if (distance_m < 0) throw ConfigError("robots.distance_m must be >= 0");
  try {
    network().validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace sslnet
