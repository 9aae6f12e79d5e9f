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

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sslnet/codec.hpp"

using namespace sslnet;

namespace {

ControlCommand random_control(std::mt19937_64& g) {
  auto u = [&](int bits) { return static_cast<std::uint32_t>(g() & ((1u << bits) - 1)); };
  ControlCommand c;
  c.msg_type = MessageType(static_cast<std::uint8_t>(u(4)));
  c.robot_id = RobotId(static_cast<std::uint8_t>(u(4)));
  c.vx = Kinematic20::from_pattern(u(20));
  c.vy = Kinematic20::from_pattern(u(20));
  c.omega = Kinematic20::from_pattern(u(20));
  c.theta = Kinematic20::from_pattern(u(20));
  c.kick_front = u(1);
  c.kick_chip = u(1);
  c.charge_kick = u(1);
  c.kick_strength = static_cast<std::uint8_t>(u(8));
  c.dribbler_on = u(1);
  c.dribbler_speed = static_cast<std::uint8_t>(u(8));
  c.extra_command = static_cast<std::uint8_t>(u(4));
  return c;
}

TelemetryReport random_telemetry(std::mt19937_64& g) {
  auto u = [&](int bits) { return static_cast<std::uint32_t>(g() & ((1u << bits) - 1)); };
  TelemetryReport t;
  t.msg_type = MessageType(static_cast<std::uint8_t>(u(4)));
  t.robot_id = RobotId(static_cast<std::uint8_t>(u(4)));
  t.m1 = MotorSpeed16::from_pattern(u(16));
  t.m2 = MotorSpeed16::from_pattern(u(16));
  t.m3 = MotorSpeed16::from_pattern(u(16));
  t.m4 = MotorSpeed16::from_pattern(u(16));
  t.dribbler_speed = static_cast<std::uint16_t>(u(15));
  t.kick_capacitor = static_cast<std::uint8_t>(u(8));
  t.ball_detected = u(1);
  t.battery = static_cast<std::uint8_t>(u(8));
  return t;
}

std::map<std::string, long> parse_fields(std::istringstream& in) {
  std::map<std::string, long> out;
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    out[tok.substr(0, eq)] = std::stol(tok.substr(eq + 1));
  }
  return out;
}

}  // namespace

TEST_CASE("field tables fill the frames exactly") {
  CHECK(std::accumulate(kControlFieldBits.begin(), kControlFieldBits.end(), 0) == 112);
  CHECK(std::accumulate(kTelemetryFieldBits.begin(), kTelemetryFieldBits.end(), 0) == 104);
}

TEST_CASE("message type names") {
  CHECK(MessageType::control().name() == "CONTROL");
  CHECK(MessageType::telemetry().name() == "TELEMETRY");
  CHECK(MessageType(2).name() == "UNKNOWN(2)");
  CHECK(MessageType(15).name() == "UNKNOWN(15)");
  CHECK(MessageType(9).is_unknown());
}

TEST_CASE("quantize20 examples") {
  CHECK(quantize20(0.0) == 0x00000u);
  CHECK(quantize20(1.0) == 0x02710u);
  CHECK(quantize20(-0.0001) == 0xFFFFFu);
  CHECK(quantize20(60.0) == 0x7FFFFu);
  CHECK(quantize20(-60.0) == 0x80000u);
  CHECK(dequantize20(0x7FFFF) == doctest::Approx(52.4287).epsilon(1e-12));
  CHECK(dequantize20(0x80000) == doctest::Approx(-52.4288).epsilon(1e-12));
  CHECK(dequantize20(0xFFFFF) == doctest::Approx(-0.0001).epsilon(1e-12));
  // Half away from zero.
  CHECK(quantize20(0.00005) == 1u);
  CHECK(quantize20(-0.00005) == 0xFFFFFu);
}

TEST_CASE("quantize16 examples") {
  CHECK(quantize16(0.0) == 0);
  CHECK(quantize16(10.0) == 1000);
  CHECK(quantize16(-10.0) == 0xFC18);
  CHECK(quantize16(400.0) == 0x7FFF);
  CHECK(quantize16(-400.0) == 0x8000);
  CHECK(dequantize16(0x8000) == doctest::Approx(-327.68));
}

TEST_CASE("non-finite values are rejected") {
  for (double v : {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()}) {
    CHECK_THROWS_WITH_AS(quantize20(v), "non-encodable value", CodecError);
    CHECK_THROWS_WITH_AS(quantize16(v), "non-encodable value", CodecError);
    CHECK_THROWS_AS(Kinematic20::from_value(v), CodecError);
  }
}

TEST_CASE("quantizers are monotone and idempotent on saturated values") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> d(-80.0, 80.0);
  for (int i = 0; i < 2000; ++i) {
    double a = d(g), b = d(g);
    if (a > b) std::swap(a, b);
    CHECK(Kinematic20::from_value(a).raw() <= Kinematic20::from_value(b).raw());
    CHECK(MotorSpeed16::from_value(a * 5).raw() <= MotorSpeed16::from_value(b * 5).raw());
  }
  for (double v : {1e9, -1e9, 52.4287, -52.4288}) {
    const auto once = Kinematic20::from_value(v);
    CHECK(Kinematic20::from_value(once.value()) == once);
  }
  for (double v : {1e9, -1e9}) {
    const auto once = MotorSpeed16::from_value(v);
    CHECK(MotorSpeed16::from_value(once.value()) == once);
  }
}

TEST_CASE("from_raw checks the range") {
  CHECK(Kinematic20::from_raw(524287).raw() == 524287);
  CHECK_THROWS_AS(Kinematic20::from_raw(524288), CodecError);
  CHECK_THROWS_AS(MotorSpeed16::from_raw(-32769), CodecError);
}

TEST_CASE("all-zero frames") {
  ControlCommand c;
  const auto f = encode_control(c);
  CHECK(f.bytes() == Bytes(14, 0));
  CHECK(decode_control(Bytes(14, 0)) == c);

  TelemetryReport t;
  t.msg_type = MessageType(0);
  CHECK(encode_telemetry(t).bytes() == Bytes(13, 0));
  CHECK(decode_telemetry(Bytes(13, 0)) == t);
}

TEST_CASE("reference vectors") {
  ControlCommand c;
  c.robot_id = RobotId(3);
  c.vx = Kinematic20::from_value(1.0);
  c.vy = Kinematic20::from_value(-1.0);
  c.kick_strength = 255;
  CHECK(to_hex(encode_control(c).bytes()) == "0302710fd8f000000000001fe000");

  TelemetryReport t;
  t.robot_id = RobotId(7);
  t.m1 = MotorSpeed16::from_value(10.0);
  t.m2 = MotorSpeed16::from_value(-10.0);
  t.ball_detected = true;
  t.battery = 168;
  CHECK(to_hex(encode_telemetry(t).bytes()) == "1703e8fc1800000000000001a8");
}

TEST_CASE("vector file from the bit-string oracle") {
  std::ifstream in(std::string(SSLNET_TEST_DATA) + "/codec_vectors.txt");
  REQUIRE(in);
  std::string line;
  int controls = 0, telemetries = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind, hex;
    ls >> kind >> hex;
    const auto f = parse_fields(ls);
    const Bytes bytes = from_hex(hex);
    CAPTURE(line);
    if (kind == "control") {
      ControlCommand c;
      c.msg_type = MessageType(static_cast<std::uint8_t>(f.at("type")));
      c.robot_id = RobotId(static_cast<std::uint8_t>(f.at("id")));
      c.vx = Kinematic20::from_raw(static_cast<std::int32_t>(f.at("vx")));
      c.vy = Kinematic20::from_raw(static_cast<std::int32_t>(f.at("vy")));
      c.omega = Kinematic20::from_raw(static_cast<std::int32_t>(f.at("omega")));
      c.theta = Kinematic20::from_raw(static_cast<std::int32_t>(f.at("theta")));
      c.kick_front = f.at("kick_front");
      c.kick_chip = f.at("kick_chip");
      c.charge_kick = f.at("charge_kick");
      c.kick_strength = static_cast<std::uint8_t>(f.at("kick_strength"));
      c.dribbler_on = f.at("dribbler_on");
      c.dribbler_speed = static_cast<std::uint8_t>(f.at("dribbler_speed"));
      c.extra_command = static_cast<std::uint8_t>(f.at("extra"));
      CHECK(encode_control(c).bytes() == bytes);
      CHECK(decode_control(bytes) == c);
      ++controls;
    } else {
      REQUIRE(kind == "telemetry");
      TelemetryReport t;
      t.msg_type = MessageType(static_cast<std::uint8_t>(f.at("type")));
      t.robot_id = RobotId(static_cast<std::uint8_t>(f.at("id")));
      t.m1 = MotorSpeed16::from_raw(static_cast<std::int32_t>(f.at("m1")));
      t.m2 = MotorSpeed16::from_raw(static_cast<std::int32_t>(f.at("m2")));
      t.m3 = MotorSpeed16::from_raw(static_cast<std::int32_t>(f.at("m3")));
      t.m4 = MotorSpeed16::from_raw(static_cast<std::int32_t>(f.at("m4")));
      t.dribbler_speed = static_cast<std::uint16_t>(f.at("dribbler_speed"));
      t.kick_capacitor = static_cast<std::uint8_t>(f.at("kick_capacitor"));
      t.ball_detected = f.at("ball_detected");
      t.battery = static_cast<std::uint8_t>(f.at("battery"));
      CHECK(encode_telemetry(t).bytes() == bytes);
      CHECK(decode_telemetry(bytes) == t);
      ++telemetries;
    }
  }
  CHECK(controls >= 20);
  CHECK(telemetries >= 20);
}

TEST_CASE("seeded round trips") {
  std::mt19937_64 g(42);
  for (int i = 0; i < 10000; ++i) {
    const ControlCommand c = random_control(g);
    const EncodedFrame f = encode_control(c);
    REQUIRE(f.size() == kControlFrameBytes);
    REQUIRE((f[0] >> 4) == c.msg_type.code());
    REQUIRE((f[0] & 0x0F) == c.robot_id.value());
    REQUIRE(decode_control(f.bytes()) == c);

    const TelemetryReport t = random_telemetry(g);
    const EncodedFrame ft = encode_telemetry(t);
    REQUIRE(ft.size() == kTelemetryFrameBytes);
    REQUIRE((ft[0] >> 4) == t.msg_type.code());
    REQUIRE(decode_telemetry(ft.bytes()) == t);
  }
}

TEST_CASE("real-valued commands quantize once") {
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> d(-52.0, 52.0);
  for (int i = 0; i < 1000; ++i) {
    ControlCommand c;
    c.vx = Kinematic20::from_value(d(g));
    c.theta = Kinematic20::from_value(d(g));
    const ControlCommand back = decode_control(encode_control(c).bytes());
    CHECK(back == c);
    CHECK(back.vx.value() == c.vx.value());
  }
}

TEST_CASE("wrong lengths are malformed") {
  CHECK_THROWS_WITH_AS(decode_control(Bytes(13, 0)), "malformed control frame", CodecError);
  CHECK_THROWS_WITH_AS(decode_control(Bytes(15, 0)), "malformed control frame", CodecError);
  CHECK_THROWS_WITH_AS(decode_telemetry(Bytes(14, 0)), "malformed telemetry frame", CodecError);
  CHECK_THROWS_AS(decode_telemetry(Bytes{}), CodecError);
}

TEST_CASE("out-of-range fields name the field") {
  ControlCommand c;
  c.robot_id = RobotId(16);
  CHECK_THROWS_AS(encode_control(c), CodecError);
  try {
    encode_control(c);
  } catch (const CodecError& e) {
    CHECK(std::string(e.what()).find("robot_id") != std::string::npos);
  }
  ControlCommand c2;
  c2.extra_command = 16;
  CHECK_THROWS_AS(encode_control(c2), CodecError);
  TelemetryReport t;
  t.dribbler_speed = 0x8000;
  try {
    encode_telemetry(t);
    FAIL("expected CodecError");
  } catch (const CodecError& e) {
    CHECK(std::string(e.what()).find("dribbler_speed") != std::string::npos);
  }
}

TEST_CASE("peek and hex helpers") {
  ControlCommand c;
  c.robot_id = RobotId(9);
  const auto f = encode_control(c);
  CHECK(peek_type(f.bytes()).is_control());
  CHECK(peek_robot(f.bytes()) == RobotId(9));
  CHECK(from_hex("00ff10") == Bytes{0x00, 0xff, 0x10});
  CHECK(to_hex(Bytes{0xab, 0x01}) == "ab01");
  CHECK_THROWS_AS(from_hex("abc"), CodecError);
  CHECK_THROWS_AS(from_hex("zz"), CodecError);
  CHECK(decode_control(from_hex("2000000000000000000000000000")).msg_type.name() == "UNKNOWN(2)");
}
