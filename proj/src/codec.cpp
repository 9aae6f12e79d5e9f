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

#include "sslnet/codec.hpp"

#include <cmath>
#include <numeric>

namespace sslnet {

static_assert(std::accumulate(kControlFieldBits.begin(), kControlFieldBits.end(), 0) ==
              8 * kControlFrameBytes);
static_assert(std::accumulate(kTelemetryFieldBits.begin(), kTelemetryFieldBits.end(), 0) ==
              8 * kTelemetryFrameBytes);

namespace {

// MSB-first bit packing into a fixed-size buffer.
class BitWriter {
 public:
  explicit BitWriter(std::size_t bytes) : out_(bytes, 0) {}

  void put(std::uint32_t value, int bits) {
    for (int i = bits - 1; i >= 0; --i) {
      if ((value >> i) & 1u) out_[pos_ / 8] |= static_cast<std::uint8_t>(0x80u >> (pos_ % 8));
      ++pos_;
    }
  }
  void put_flag(bool b) { put(b ? 1u : 0u, 1); }

  std::size_t bit_position() const { return pos_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint32_t get(int bits) {
    std::uint32_t v = 0;
    for (int i = 0; i < bits; ++i) {
      v = (v << 1) | ((in_[pos_ / 8] >> (7 - pos_ % 8)) & 1u);
      ++pos_;
    }
    return v;
  }
  bool get_flag() { return get(1) != 0; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

void check_width(std::uint32_t value, int bits, const char* field) {
  if (value >> bits) {
    throw CodecError(std::string("field out of range: ") + field + " = " + std::to_string(value) +
                     " does not fit in " + std::to_string(bits) + " bits");
  }
}

template <int Bits, std::int32_t Scale>
std::int32_t quantize_raw(double value) {
  using F = FixedPoint<Bits, Scale>;
  if (!std::isfinite(value)) throw CodecError("non-encodable value");
  // std::round is half away from zero.
  const double scaled = std::round(value * Scale);
  if (scaled >= F::kMaxRaw) return F::kMaxRaw;
  if (scaled <= F::kMinRaw) return F::kMinRaw;
  return static_cast<std::int32_t>(scaled);
}

}  // namespace

std::string MessageType::name() const {
  switch (code_) {
    case kControl:
      return "CONTROL";
    case kTelemetry:
      return "TELEMETRY";
    default:
      return "UNKNOWN(" + std::to_string(code_) + ")";
  }
}

template <int Bits, std::int32_t Scale>
FixedPoint<Bits, Scale> FixedPoint<Bits, Scale>::from_value(double value) {
  FixedPoint f;
  f.raw_ = quantize_raw<Bits, Scale>(value);
  return f;
}

template <int Bits, std::int32_t Scale>
FixedPoint<Bits, Scale> FixedPoint<Bits, Scale>::from_raw(std::int32_t raw) {
  if (raw < kMinRaw || raw > kMaxRaw) {
    throw CodecError("raw value " + std::to_string(raw) + " outside " + std::to_string(Bits) +
                     "-bit range");
  }
  FixedPoint f;
  f.raw_ = raw;
  return f;
}

template class FixedPoint<20, 10000>;
template class FixedPoint<16, 100>;

std::uint32_t quantize20(double value) { return Kinematic20::from_value(value).pattern(); }
double dequantize20(std::uint32_t pattern) { return Kinematic20::from_pattern(pattern).value(); }

std::uint16_t quantize16(double value) {
  return static_cast<std::uint16_t>(MotorSpeed16::from_value(value).pattern());
}
double dequantize16(std::uint16_t pattern) { return MotorSpeed16::from_pattern(pattern).value(); }

EncodedFrame encode_control(const ControlCommand& cmd) {
  check_width(cmd.msg_type.code(), 4, "msg_type");
  check_width(cmd.robot_id.value(), 4, "robot_id");
  check_width(cmd.extra_command, 4, "extra_command");

  BitWriter w(kControlFrameBytes);
  w.put(cmd.msg_type.code(), 4);
  w.put(cmd.robot_id.value(), 4);
  w.put(cmd.vx.pattern(), 20);
  w.put(cmd.vy.pattern(), 20);
  w.put(cmd.omega.pattern(), 20);
  w.put(cmd.theta.pattern(), 20);
  w.put_flag(cmd.kick_front);
  w.put_flag(cmd.kick_chip);
  w.put_flag(cmd.charge_kick);
  w.put(cmd.kick_strength, 8);
  w.put_flag(cmd.dribbler_on);
  w.put(cmd.dribbler_speed, 8);
  w.put(cmd.extra_command, 4);
  return EncodedFrame(w.take());
}

ControlCommand decode_control(std::span<const std::uint8_t> frame) {
  if (frame.size() != kControlFrameBytes) throw CodecError("malformed control frame");
  BitReader r(frame);
  ControlCommand c;
  c.msg_type = MessageType(static_cast<std::uint8_t>(r.get(4)));
  c.robot_id = RobotId(static_cast<std::uint8_t>(r.get(4)));
  c.vx = Kinematic20::from_pattern(r.get(20));
  c.vy = Kinematic20::from_pattern(r.get(20));
  c.omega = Kinematic20::from_pattern(r.get(20));
  c.theta = Kinematic20::from_pattern(r.get(20));
  c.kick_front = r.get_flag();
  c.kick_chip = r.get_flag();
  c.charge_kick = r.get_flag();
  c.kick_strength = static_cast<std::uint8_t>(r.get(8));
  c.dribbler_on = r.get_flag();
  c.dribbler_speed = static_cast<std::uint8_t>(r.get(8));
  c.extra_command = static_cast<std::uint8_t>(r.get(4));
  return c;
}

EncodedFrame encode_telemetry(const TelemetryReport& rep) {
  check_width(rep.msg_type.code(), 4, "msg_type");
  check_width(rep.robot_id.value(), 4, "robot_id");
  check_width(rep.dribbler_speed, 15, "dribbler_speed");

  BitWriter w(kTelemetryFrameBytes);
  w.put(rep.msg_type.code(), 4);
  w.put(rep.robot_id.value(), 4);
  w.put(rep.m1.pattern(), 16);
  w.put(rep.m2.pattern(), 16);
  w.put(rep.m3.pattern(), 16);
  w.put(rep.m4.pattern(), 16);
  w.put(rep.dribbler_speed, 15);
  w.put(rep.kick_capacitor, 8);
  w.put_flag(rep.ball_detected);
  w.put(rep.battery, 8);
  return EncodedFrame(w.take());
}

TelemetryReport decode_telemetry(std::span<const std::uint8_t> frame) {
  if (frame.size() != kTelemetryFrameBytes) throw CodecError("malformed telemetry frame");
  BitReader r(frame);
  TelemetryReport t;
  t.msg_type = MessageType(static_cast<std::uint8_t>(r.get(4)));
  t.robot_id = RobotId(static_cast<std::uint8_t>(r.get(4)));
  t.m1 = MotorSpeed16::from_pattern(r.get(16));
  t.m2 = MotorSpeed16::from_pattern(r.get(16));
  t.m3 = MotorSpeed16::from_pattern(r.get(16));
  t.m4 = MotorSpeed16::from_pattern(r.get(16));
  t.dribbler_speed = static_cast<std::uint16_t>(r.get(15));
  t.kick_capacitor = static_cast<std::uint8_t>(r.get(8));
  t.ball_detected = r.get_flag();
  t.battery = static_cast<std::uint8_t>(r.get(8));
  return t;
}

MessageType peek_type(std::span<const std::uint8_t> frame) {
  if (frame.empty()) throw CodecError("empty frame");
  return MessageType(static_cast<std::uint8_t>(frame[0] >> 4));
}

RobotId peek_robot(std::span<const std::uint8_t> frame) {
  if (frame.empty()) throw CodecError("empty frame");
  return RobotId(static_cast<std::uint8_t>(frame[0] & 0x0F));
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0x0F]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw CodecError("odd-length hex string");
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    throw CodecError(std::string("bad hex digit '") + c + "'");
  };
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
  }
  return out;
}

}  // namespace sslnet
