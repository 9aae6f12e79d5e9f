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

// Timing and loss models for each hop: radio air interface, SPI, and the
// Ethernet or serial uplink between the team computer and the base station.
// All durations are microseconds as doubles; rounding to the simulator's
// integer tick happens where events are scheduled, never in here.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sslnet/codec.hpp"

namespace sslnet {

class LinkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxRadioPayload = 32;

struct RadioConfig {
  double frequency_mhz = 2504.0;
  std::uint64_t address = 0x753FAD299AULL;  // 5 bytes
  double data_rate_bps = 2'000'000.0;
  int preamble_bytes = 1;
  int address_bytes = 5;
  int crc_bytes = 2;
  double spi_rate_bps = 10'000'000.0;

  static RadioConfig control_defaults();
  static RadioConfig telemetry_defaults();

  /// frequency - 2400 for 2400..2525 MHz; nullopt above the channel table
  /// (the telemetry default 2529 MHz is accepted as-is).
  std::optional<int> channel_index() const;

  /// Throws LinkError on non-positive rates, negative byte counts or an
  /// address wider than address_bytes.
  void validate() const;
};

/// Piecewise-constant distance -> loss probability. Entry i applies from
/// its distance (inclusive) up to the next entry's distance.
class LossTable {
 public:
  LossTable() = default;
  explicit LossTable(double constant_loss);
  /// Entries are sorted by distance; throws LinkError if a probability is
  /// outside [0, 1] or the first entry does not start at 0 m.
  explicit LossTable(std::vector<std::pair<double, double>> entries);

  /// "d0:p0,d1:p1,..." e.g. "0:0,2.5:0.05,5:0.2".
  static LossTable parse(const std::string& text);

  double at(double distance_m) const;
  bool is_constant() const { return entries_.size() <= 1; }
  const std::vector<std::pair<double, double>>& entries() const { return entries_; }
  std::string to_string() const;

 private:
  std::vector<std::pair<double, double>> entries_{{0.0, 0.0}};
};

struct ChannelModel {
  double p_loss = 0.0;
  double p_bitflip = 0.0;
  double distance_m = 0.4;
  /// When set, overrides p_loss with the mapped value at distance_m.
  std::optional<LossTable> loss_vs_distance;
  bool collisions_enabled = true;

  double loss_probability() const;
  void validate() const;
};

enum class UplinkKind { kEthernet, kSerial };

struct UplinkModel {
  UplinkKind kind = UplinkKind::kEthernet;
  double latency_us = 50.0;  // Ethernet one-way
  double baud = 115200.0;    // Serial
  int bits_per_byte = 10;    // start + 8 data + stop
  int buffer_bytes = 64;     // Serial FIFO capacity

  double byte_time_us() const { return bits_per_byte * 1e6 / baud; }
  void validate() const;
};

enum class TransmitResult { kDelivered, kLost, kCorruptDropped, kCorruptDelivered };

const char* to_string(TransmitResult r);

struct TransmitOutcome {
  TransmitResult result = TransmitResult::kDelivered;
  /// Present for kDelivered and kCorruptDelivered.
  std::optional<Bytes> delivered_bytes;
};

/// Seeded 64-bit stream. Uniform draws are built from the top 53 bits so the
/// sequence is identical across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 1) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Mixes a base seed with stream coordinates (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// 8 * (preamble + address + payload + crc) / data_rate, in microseconds.
/// Throws LinkError("oversized radio payload") above 32 bytes.
double air_time(std::size_t payload_len, const RadioConfig& cfg);

/// One command byte plus the payload over SPI.
double spi_time(std::size_t payload_len, const RadioConfig& cfg);

/// Radio hop. Draw order: one loss draw, then one draw per bit in frame
/// order (byte 0 MSB first). Any flipped bit is caught by the CRC.
TransmitOutcome channel_transmit(std::span<const std::uint8_t> frame, const ChannelModel& model,
                                 RandomStream& rng);

struct SerialTransfer {
  double duration_us = 0.0;
  TransmitOutcome outcome;
  /// Bytes that did not fit in the FIFO (0 when delivered intact).
  std::size_t overflow_bytes = 0;
};

/// Serial uplink hop with `queue_depth` bytes already buffered. Bytes that
/// overflow the FIFO corrupt the tail of the frame: the lowest bit of each
/// overflowed byte position is flipped.
SerialTransfer serial_transfer(std::span<const std::uint8_t> frame, const UplinkModel& model,
                               std::size_t queue_depth);

/// Round half up to the integer microsecond tick.
std::int64_t to_ticks(double us);

}  // namespace sslnet
