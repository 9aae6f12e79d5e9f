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

// Node state machines for the star network: one team computer, one base
// station with separate control and telemetry radios, and N robots sharing
// the control channel. The Network type wires them onto a Simulator and owns
// the link models and the per-robot frame accounting.

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "sslnet/codec.hpp"
#include "sslnet/link.hpp"
#include "sslnet/sim.hpp"

namespace sslnet {

inline constexpr SimTime kTelemetryCheckPeriodUs = 1000;

/// Per-packet base-station processing: 622 + SPI(14) 12 + air(14) 88 = 722 us.
inline constexpr double kDefaultServiceTimeUs = 622.0;
inline constexpr double kDefaultTelemetryForwardTimeUs = 250.0;
/// Upper bound of the delay between a robot's telemetry decision and the
/// start of its SPI load.
inline constexpr SimTime kDefaultTelemetryLaunchJitterUs = 100;
/// Half-width of the uniform per-packet service-time variation.
inline constexpr double kDefaultServiceJitterUs = 0.0;

struct BaseStationConfig {
  UplinkModel uplink;
  RadioConfig control_radio = RadioConfig::control_defaults();
  RadioConfig telemetry_radio = RadioConfig::telemetry_defaults();
  double service_time_us = kDefaultServiceTimeUs;
  double telemetry_forward_time_us = kDefaultTelemetryForwardTimeUs;
  /// Each service lasts service_time_us + U(-jitter, +jitter).
  double service_jitter_us = kDefaultServiceJitterUs;
  std::size_t tx_fifo_depth = 3;
  bool telemetry_busy_blocks_control = true;

  /// service + SPI + air for one frame, before tick rounding and jitter.
  double control_pipeline_us(std::size_t frame_len) const;
  /// Throws std::invalid_argument on negative times, a jitter wider than
  /// the service time or a zero-depth FIFO.
  void validate() const;
};

/// Frames the nodes hand to the medium. Implemented by Network; tests may
/// substitute their own.
class Fabric {
 public:
  virtual ~Fabric() = default;
  /// Computer -> base station over the uplink.
  virtual void send_uplink(Bytes frame, RobotId target, SimTime now) = 0;
  /// Base station control radio finished putting `frame` on the air.
  virtual void broadcast_control(const Bytes& frame, std::int64_t frame_id, SimTime now) = 0;
  /// Base station TX FIFO rejected the frame.
  virtual void base_station_drop(std::int64_t frame_id) = 0;
  /// Base station -> computer over the uplink.
  virtual void send_downlink(Bytes frame, SimTime now) = 0;
  /// Robot starts a telemetry transmission (SPI load, then air).
  virtual void transmit_telemetry(RobotId from, Bytes frame, SimTime now) = 0;
};

/// Command for one robot at one send; the default holds a fixed template.
using CommandSource = std::function<ControlCommand(RobotId, std::uint64_t send_index)>;
using TelemetrySource = std::function<TelemetryReport(RobotId, SimTime)>;

ControlCommand default_command(RobotId id, std::uint64_t send_index);
TelemetryReport default_telemetry(RobotId id, SimTime now);

class ComputerNode {
 public:
  ComputerNode(SimTime send_interval_us, std::vector<RobotId> robot_ids,
               CommandSource source = default_command);

  void attach(Simulator& sim, NodeId self, Fabric& fabric);
  /// Schedules the first tick at `at` (no-op without robots).
  void start(SimTime at);
  void stop() { active_ = false; }

  void on_event(const SimEvent& ev);
  /// Encodes and submits one frame, advances the cursor, schedules the next
  /// tick. Returns the addressed robot.
  std::optional<RobotId> tick(SimTime now);

  SimTime send_interval() const { return send_interval_; }
  std::uint64_t sends() const { return sends_; }
  const std::vector<std::pair<SimTime, TelemetryReport>>& received_telemetry() const {
    return received_telemetry_;
  }
  std::uint64_t undecodable_telemetry() const { return undecodable_telemetry_; }

 private:
  SimTime send_interval_;
  std::vector<RobotId> robot_ids_;
  std::size_t cursor_ = 0;
  CommandSource source_;
  bool active_ = true;
  std::uint64_t sends_ = 0;
  std::vector<std::pair<SimTime, TelemetryReport>> received_telemetry_;
  std::uint64_t undecodable_telemetry_ = 0;
  Simulator* sim_ = nullptr;
  NodeId self_ = 0;
  Fabric* fabric_ = nullptr;
};

/// Bounded FIFO; the frame being transmitted stays at the front (and keeps
/// its slot) until its air time ends.
class TxFifo {
 public:
  struct Entry {
    Bytes frame;
    std::int64_t frame_id = -1;
  };

  explicit TxFifo(std::size_t capacity) : capacity_(capacity) {}
  /// False (and the frame is discarded) when full.
  bool push(Entry e);
  const Entry& front() const { return entries_.front(); }
  Entry pop();
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() >= capacity_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }

 private:
  std::size_t capacity_;
  std::deque<Entry> entries_;
};

class BaseStationNode {
 public:
  /// `seed` drives the service-time jitter only.
  explicit BaseStationNode(BaseStationConfig cfg, std::uint64_t seed = 1);

  void attach(Simulator& sim, NodeId self, Fabric& fabric);
  void on_event(const SimEvent& ev);

  /// Queue a frame from the uplink; starts service if the pipeline is free.
  void on_uplink(Bytes frame, std::int64_t frame_id, SimTime now);
  /// A telemetry frame came off the telemetry radio.
  void on_telemetry_rx(Bytes frame, SimTime now);

  const BaseStationConfig& config() const { return cfg_; }
  std::uint64_t fifo_drops() const { return fifo_drops_; }
  std::uint64_t oversized_drops() const { return oversized_drops_; }
  std::uint64_t control_sent() const { return control_sent_; }
  std::uint64_t telemetry_forwarded() const { return telemetry_forwarded_; }
  bool pipeline_busy() const { return busy_; }
  SimTime control_blocked_until() const { return control_blocked_until_; }
  std::size_t queued() const { return fifo_.size(); }

 private:
  void try_start(SimTime now);
  void on_tx_done(SimTime now);

  BaseStationConfig cfg_;
  RandomStream jitter_rng_;
  TxFifo fifo_;
  bool busy_ = false;
  bool resume_pending_ = false;
  SimTime control_blocked_until_ = 0;
  SimTime forward_busy_until_ = 0;
  std::deque<Bytes> forwarding_;
  std::uint64_t fifo_drops_ = 0;
  std::uint64_t oversized_drops_ = 0;
  std::uint64_t control_sent_ = 0;
  std::uint64_t telemetry_forwarded_ = 0;
  Simulator* sim_ = nullptr;
  NodeId self_ = 0;
  Fabric* fabric_ = nullptr;
};

class RobotNode {
 public:
  /// `telemetry_interval_us` 0 disables telemetry. `boot_time` is when the
  /// robot's telemetry timer starts counting.
  RobotNode(RobotId id, SimTime telemetry_interval_us, SimTime boot_time = 0,
            TelemetrySource source = default_telemetry);

  void attach(Simulator& sim, NodeId self, Fabric& fabric);
  /// Schedules the first telemetry check (no-op when telemetry is off).
  void start();
  void stop() { active_ = false; }

  void on_event(const SimEvent& ev);

  /// Logs `now` when the frame decodes as CONTROL addressed to this robot.
  /// Returns whether it was accepted.
  bool on_radio_rx(std::span<const std::uint8_t> frame, SimTime now);
  /// Sends telemetry if the interval has elapsed since the last send.
  bool telemetry_tick(SimTime now);

  RobotId id() const { return id_; }
  const std::vector<SimTime>& arrival_log() const { return arrival_log_; }
  const std::vector<SimTime>& telemetry_log() const { return telemetry_log_; }
  std::uint64_t discarded() const { return discarded_; }
  SimTime telemetry_interval() const { return telemetry_interval_; }

 private:
  RobotId id_;
  SimTime telemetry_interval_;
  SimTime boot_time_;
  SimTime last_telemetry_sent_;
  TelemetrySource source_;
  bool active_ = true;
  std::vector<SimTime> arrival_log_;
  std::vector<SimTime> telemetry_log_;
  std::uint64_t discarded_ = 0;
  Simulator* sim_ = nullptr;
  NodeId self_ = 0;
  Fabric* fabric_ = nullptr;
};

/// Fate of control frames addressed to one robot.
struct FrameCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t lost = 0;
  std::uint64_t corrupt_dropped = 0;
  std::uint64_t corrupt_delivered = 0;
  std::uint64_t bs_drops = 0;

  std::uint64_t accounted() const {
    return delivered + lost + corrupt_dropped + corrupt_delivered + bs_drops;
  }
};

struct TelemetryCounters {
  std::uint64_t sent = 0;
  std::uint64_t collided = 0;
  std::uint64_t lost = 0;
  std::uint64_t corrupt_dropped = 0;
  std::uint64_t received = 0;  // by the base station
};

enum class TelemetryPhase {
  kSpread,   // robot i boots at i * interval / count
  kAligned,  // every robot boots at t = 0
  kRandom,   // robot i boots at a seeded uniform time in [0, interval)
};

const char* to_string(TelemetryPhase p);

struct NetworkConfig {
  SimTime send_interval_us = 500;
  std::size_t robot_count = 1;
  /// Robots 0..controlled-1 receive control frames; 0 means all.
  std::size_t controlled = 0;
  SimTime telemetry_interval_us = 0;
  TelemetryPhase telemetry_phase = TelemetryPhase::kSpread;
  /// A telemetry frame leaves the robot U[0, jitter) us after its timer
  /// check decides to send.
  SimTime telemetry_launch_jitter_us = kDefaultTelemetryLaunchJitterUs;
  BaseStationConfig base_station;
  ChannelModel control_channel;
  ChannelModel telemetry_channel;
  std::uint64_t seed = 1;

  std::size_t controlled_count() const { return controlled == 0 ? robot_count : controlled; }
  /// Throws LinkError / std::invalid_argument on inconsistent parameters.
  void validate() const;
};

class Network final : public Fabric {
 public:
  explicit Network(NetworkConfig cfg, CommandSource commands = default_command,
                   TelemetrySource telemetry = default_telemetry);
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  /// Schedules the computer's first send at t = 0 and the robot timers.
  void start();
  /// Stops new control sends and telemetry; frames in flight still finish.
  void stop_traffic();

  /// Runs until each controlled robot has `arrivals` receptions or
  /// `max_time` passes, then stops traffic and drains. Returns true if the
  /// arrival target was met.
  bool run_for_arrivals(std::size_t arrivals, SimTime max_time, SimTime step = 100'000);

  Simulator& sim() { return sim_; }
  const Simulator& sim() const { return sim_; }
  const NetworkConfig& config() const { return cfg_; }
  ComputerNode& computer() { return computer_; }
  const ComputerNode& computer() const { return computer_; }
  BaseStationNode& base_station() { return base_station_; }
  const BaseStationNode& base_station() const { return base_station_; }
  RobotNode& robot(std::size_t i) { return robots_.at(i); }
  const RobotNode& robot(std::size_t i) const { return robots_.at(i); }
  std::size_t robot_count() const { return robots_.size(); }

  const FrameCounters& counters(std::size_t robot) const { return counters_.at(robot); }
  const TelemetryCounters& telemetry_counters() const { return telemetry_; }
  std::uint64_t uplink_corrupted() const { return uplink_corrupted_; }

  // Fabric
  void send_uplink(Bytes frame, RobotId target, SimTime now) override;
  void broadcast_control(const Bytes& frame, std::int64_t frame_id, SimTime now) override;
  void base_station_drop(std::int64_t frame_id) override;
  void send_downlink(Bytes frame, SimTime now) override;
  void transmit_telemetry(RobotId from, Bytes frame, SimTime now) override;

 private:
  struct FrameInfo {
    std::size_t target = 0;
    bool uplink_corrupt = false;
  };
  struct AirSlot {
    SimTime start = 0;
    SimTime end = 0;
    std::int64_t tx_id = 0;
  };
  struct TelemetryTx {
    std::size_t robot = 0;
    Bytes frame;
    bool collided = false;
  };

  /// Serial line state for one direction.
  struct SerialLine {
    double busy_until_us = 0.0;
  };

  double serial_send(SerialLine& line, Bytes& frame, SimTime now, bool& corrupt);
  void on_telemetry_air_end(const SimEvent& ev);

  NetworkConfig cfg_;
  Simulator sim_;
  ComputerNode computer_;
  BaseStationNode base_station_;
  std::vector<RobotNode> robots_;
  NodeId computer_id_ = 0;
  NodeId base_station_id_ = 0;
  NodeId telemetry_air_id_ = 0;
  std::vector<NodeId> robot_ids_;

  std::vector<ChannelModel> control_links_;
  std::vector<ChannelModel> telemetry_links_;
  std::vector<RandomStream> control_rng_;
  std::vector<RandomStream> telemetry_rng_;
  std::vector<RandomStream> launch_rng_;

  SerialLine serial_down_;
  SerialLine serial_up_;
  std::vector<FrameInfo> frames_;
  std::vector<FrameCounters> counters_;
  std::vector<TelemetryTx> telemetry_tx_;
  std::vector<AirSlot> telemetry_air_;
  TelemetryCounters telemetry_;
  std::uint64_t uplink_corrupted_ = 0;
};

}  // namespace sslnet
