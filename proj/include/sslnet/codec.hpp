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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sslnet {

using Bytes = std::vector<std::uint8_t>;

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kControlFrameBytes = 14;
inline constexpr std::size_t kTelemetryFrameBytes = 13;

/// 4-bit message type carried in the high nibble of byte 0.
/// 0 and 1 are assigned; 2..15 are carried opaquely.
class MessageType {
 public:
  static constexpr std::uint8_t kControl = 0;
  static constexpr std::uint8_t kTelemetry = 1;

  constexpr MessageType() = default;
  explicit constexpr MessageType(std::uint8_t code) : code_(code) {}

  static constexpr MessageType control() { return MessageType(kControl); }
  static constexpr MessageType telemetry() { return MessageType(kTelemetry); }

  constexpr std::uint8_t code() const { return code_; }
  constexpr bool is_control() const { return code_ == kControl; }
  constexpr bool is_telemetry() const { return code_ == kTelemetry; }
  constexpr bool is_unknown() const { return code_ > kTelemetry; }

  /// "CONTROL", "TELEMETRY" or "UNKNOWN(<code>)".
  std::string name() const;

  constexpr bool operator==(const MessageType&) const = default;

 private:
  std::uint8_t code_ = kControl;
};

/// 4-bit robot address carried in the low nibble of byte 0.
class RobotId {
 public:
  constexpr RobotId() = default;
  explicit constexpr RobotId(std::uint8_t id) : id_(id) {}
  constexpr std::uint8_t value() const { return id_; }
  constexpr bool operator==(const RobotId&) const = default;

 private:
  std::uint8_t id_ = 0;
};

/// Signed two's-complement fixed point of `Bits` width at `Scale` steps per
/// unit. Construction from a real quantizes once (round half away from zero,
/// saturating); the raw step count is what travels on the wire.
template <int Bits, std::int32_t Scale>
class FixedPoint {
 public:
  static_assert(Bits > 1 && Bits < 32);
  static constexpr int kBits = Bits;
  static constexpr std::int32_t kScale = Scale;
  static constexpr std::int32_t kMinRaw = -(std::int32_t{1} << (Bits - 1));
  static constexpr std::int32_t kMaxRaw = (std::int32_t{1} << (Bits - 1)) - 1;
  static constexpr std::uint32_t kMask = (std::uint32_t{1} << Bits) - 1;

  constexpr FixedPoint() = default;

  /// Throws CodecError("non-encodable value") for NaN/inf.
  static FixedPoint from_value(double value);
  /// Throws CodecError if raw is outside [kMinRaw, kMaxRaw].
  static FixedPoint from_raw(std::int32_t raw);
  static constexpr FixedPoint from_pattern(std::uint32_t pattern) {
    pattern &= kMask;
    std::int32_t raw = static_cast<std::int32_t>(pattern);
    if (pattern & (std::uint32_t{1} << (Bits - 1))) raw -= std::int32_t{1} << Bits;
    FixedPoint f;
    f.raw_ = raw;
    return f;
  }

  constexpr std::int32_t raw() const { return raw_; }
  constexpr std::uint32_t pattern() const { return static_cast<std::uint32_t>(raw_) & kMask; }
  constexpr double value() const { return static_cast<double>(raw_) / Scale; }

  constexpr bool operator==(const FixedPoint&) const = default;

 private:
  std::int32_t raw_ = 0;
};

/// Kinematic fields: 20 bits at 1e-4 units per step (range about +-52.43).
using Kinematic20 = FixedPoint<20, 10000>;
/// Wheel motor speeds: 16 bits at 1e-2 rad/s per step (range about +-327.67).
using MotorSpeed16 = FixedPoint<16, 100>;

/// round(value * 1e4) saturated into 20-bit two's complement.
std::uint32_t quantize20(double value);
double dequantize20(std::uint32_t pattern);
/// round(value * 1e2) saturated into 16-bit two's complement.
std::uint16_t quantize16(double value);
double dequantize16(std::uint16_t pattern);

struct ControlCommand {
  MessageType msg_type = MessageType::control();
  RobotId robot_id;
  Kinematic20 vx;     // m/s
  Kinematic20 vy;     // m/s
  Kinematic20 omega;  // rad/s
  Kinematic20 theta;  // rad
  bool kick_front = false;
  bool kick_chip = false;
  bool charge_kick = false;
  std::uint8_t kick_strength = 0;
  bool dribbler_on = false;
  std::uint8_t dribbler_speed = 0;
  std::uint8_t extra_command = 0;  // 4 bits, opaque

  bool operator==(const ControlCommand&) const = default;
};

struct TelemetryReport {
  MessageType msg_type = MessageType::telemetry();
  RobotId robot_id;
  MotorSpeed16 m1;  // rad/s
  MotorSpeed16 m2;
  MotorSpeed16 m3;
  MotorSpeed16 m4;
  std::uint16_t dribbler_speed = 0;  // 15 bits, raw motor units
  std::uint8_t kick_capacitor = 0;
  bool ball_detected = false;
  std::uint8_t battery = 0;  // decivolts

  bool operator==(const TelemetryReport&) const = default;
};

/// Exact on-wire bytes of one frame.
class EncodedFrame {
 public:
  EncodedFrame() = default;
  explicit EncodedFrame(Bytes bytes) : bytes_(std::move(bytes)) {}
  EncodedFrame(std::span<const std::uint8_t> bytes) : bytes_(bytes.begin(), bytes.end()) {}

  const Bytes& bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  std::uint8_t operator[](std::size_t i) const { return bytes_[i]; }

  bool operator==(const EncodedFrame&) const = default;

 private:
  Bytes bytes_;
};

/// Throws CodecError naming the offending field.
EncodedFrame encode_control(const ControlCommand& cmd);
/// Throws CodecError("malformed control frame") unless exactly 14 bytes.
ControlCommand decode_control(std::span<const std::uint8_t> frame);

EncodedFrame encode_telemetry(const TelemetryReport& rep);
/// Throws CodecError("malformed telemetry frame") unless exactly 13 bytes.
TelemetryReport decode_telemetry(std::span<const std::uint8_t> frame);

/// Type nibble of byte 0; the frame must be non-empty.
MessageType peek_type(std::span<const std::uint8_t> frame);
RobotId peek_robot(std::span<const std::uint8_t> frame);

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Accepts an optional 0x prefix; throws CodecError on odd length or bad digit.
Bytes from_hex(std::string_view hex);

// Field widths in wire order; the codec asserts they fill the frames exactly.
inline constexpr std::array<int, 13> kControlFieldBits = {4, 4, 20, 20, 20, 20, 1, 1, 1, 8, 1, 8, 4};
inline constexpr std::array<int, 10> kTelemetryFieldBits = {4, 4, 16, 16, 16, 16, 15, 8, 1, 8};

}  // namespace sslnet
