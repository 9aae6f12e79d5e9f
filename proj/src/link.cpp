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

#include "sslnet/link.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sslnet {

RadioConfig RadioConfig::control_defaults() { return RadioConfig{}; }

RadioConfig RadioConfig::telemetry_defaults() {
  RadioConfig c;
  c.frequency_mhz = 2529.0;
  c.address = 0x753FBD299AULL;
  return c;
}

std::optional<int> RadioConfig::channel_index() const {
  if (frequency_mhz >= 2400.0 && frequency_mhz <= 2525.0) {
    return static_cast<int>(std::lround(frequency_mhz - 2400.0));
  }
  return std::nullopt;
}

void RadioConfig::validate() const {
  if (!(data_rate_bps > 0)) throw LinkError("radio data rate must be positive");
  if (!(spi_rate_bps > 0)) throw LinkError("spi rate must be positive");
  if (preamble_bytes < 0 || address_bytes < 0 || crc_bytes < 0) {
    throw LinkError("radio frame overhead byte counts must be non-negative");
  }
  if (address_bytes < 8 && (address >> (8 * address_bytes)) != 0) {
    throw LinkError("radio address wider than address_bytes");
  }
  if (!(frequency_mhz > 0)) throw LinkError("radio frequency must be positive");
}

LossTable::LossTable(double constant_loss) : LossTable(std::vector<std::pair<double, double>>{{0.0, constant_loss}}) {}

LossTable::LossTable(std::vector<std::pair<double, double>> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw LinkError("loss table needs at least one entry");
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  if (entries_.front().first != 0.0) throw LinkError("loss table must start at distance 0");
  for (const auto& [d, p] : entries_) {
    if (!(p >= 0.0 && p <= 1.0)) throw LinkError("loss probability outside [0, 1]");
    if (!std::isfinite(d)) throw LinkError("loss table distance must be finite");
  }
}

LossTable LossTable::parse(const std::string& text) {
  std::vector<std::pair<double, double>> entries;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw LinkError("loss table entry needs 'distance:probability': " + item);
    try {
      entries.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw LinkError("bad loss table entry: " + item);
    }
  }
  return LossTable(std::move(entries));
}

double LossTable::at(double distance_m) const {
  double p = entries_.front().second;
  for (const auto& [d, prob] : entries_) {
    if (distance_m >= d) p = prob;
    else break;
  }
  return p;
}

std::string LossTable::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i].first << ':' << entries_[i].second;
  }
  return os.str();
}

double ChannelModel::loss_probability() const {
  return loss_vs_distance ? loss_vs_distance->at(distance_m) : p_loss;
}

void ChannelModel::validate() const {
  if (!(p_loss >= 0.0 && p_loss <= 1.0)) throw LinkError("p_loss outside [0, 1]");
  if (!(p_bitflip >= 0.0 && p_bitflip <= 1.0)) throw LinkError("p_bitflip outside [0, 1]");
  if (!(distance_m >= 0.0)) throw LinkError("distance must be >= 0");
}

void UplinkModel::validate() const {
  if (!(latency_us >= 0.0)) throw LinkError("uplink latency must be >= 0");
  if (!(baud > 0.0)) throw LinkError("serial baud must be positive");
  if (bits_per_byte <= 0) throw LinkError("bits_per_byte must be positive");
  if (buffer_bytes <= 0) throw LinkError("serial buffer must be positive");
}

const char* to_string(TransmitResult r) {
  switch (r) {
    case TransmitResult::kDelivered:
      return "DELIVERED";
    case TransmitResult::kLost:
      return "LOST";
    case TransmitResult::kCorruptDropped:
      return "CORRUPT_DROPPED";
    case TransmitResult::kCorruptDelivered:
      return "CORRUPT_DELIVERED";
  }
  return "?";
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0xD6E8FEB86659FD93ULL));
}

double air_time(std::size_t payload_len, const RadioConfig& cfg) {
  if (payload_len > kMaxRadioPayload) throw LinkError("oversized radio payload");
  const auto bytes = static_cast<double>(cfg.preamble_bytes + cfg.address_bytes + cfg.crc_bytes) +
                     static_cast<double>(payload_len);
  return 8.0 * bytes * 1e6 / cfg.data_rate_bps;
}

double spi_time(std::size_t payload_len, const RadioConfig& cfg) {
  return static_cast<double>(payload_len + 1) * 8.0 * 1e6 / cfg.spi_rate_bps;
}

TransmitOutcome channel_transmit(std::span<const std::uint8_t> frame, const ChannelModel& model,
                                 RandomStream& rng) {
  if (rng.bernoulli(model.loss_probability())) return {TransmitResult::kLost, std::nullopt};

  bool flipped = false;
  if (model.p_bitflip > 0.0) {
    // Every bit is drawn even after the first flip so the stream advances by
    // a frame-length-dependent amount only.
    for (std::size_t i = 0; i < frame.size() * 8; ++i) {
      if (rng.bernoulli(model.p_bitflip)) flipped = true;
    }
  }
  if (flipped) return {TransmitResult::kCorruptDropped, std::nullopt};
  return {TransmitResult::kDelivered, Bytes(frame.begin(), frame.end())};
}

SerialTransfer serial_transfer(std::span<const std::uint8_t> frame, const UplinkModel& model,
                               std::size_t queue_depth) {
  SerialTransfer t;
  t.duration_us = static_cast<double>(frame.size()) * model.byte_time_us();
  Bytes out(frame.begin(), frame.end());
  const auto capacity = static_cast<std::size_t>(model.buffer_bytes);
  if (queue_depth + frame.size() > capacity) {
    t.overflow_bytes = std::min(frame.size(), queue_depth + frame.size() - capacity);
    for (std::size_t i = frame.size() - t.overflow_bytes; i < frame.size(); ++i) out[i] ^= 0x01;
    t.outcome = {TransmitResult::kCorruptDelivered, std::move(out)};
  } else {
    t.outcome = {TransmitResult::kDelivered, std::move(out)};
  }
  return t;
}

std::int64_t to_ticks(double us) { return static_cast<std::int64_t>(std::floor(us + 0.5)); }

}  // namespace sslnet
