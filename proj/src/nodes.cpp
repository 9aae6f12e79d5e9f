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

#include "sslnet/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sslnet {

double BaseStationConfig::control_pipeline_us(std::size_t frame_len) const {
  return service_time_us + spi_time(frame_len, control_radio) + air_time(frame_len, control_radio);
}

ControlCommand default_command(RobotId id, std::uint64_t send_index) {
  ControlCommand c;
  c.robot_id = id;
  c.vx = Kinematic20::from_value(1.5);
  c.vy = Kinematic20::from_value(-0.25);
  c.omega = Kinematic20::from_value(0.5);
  c.theta = Kinematic20::from_value(0.1 * id.value());
  c.dribbler_on = true;
  c.dribbler_speed = 120;
  c.extra_command = static_cast<std::uint8_t>(send_index & 0x0F);
  return c;
}

TelemetryReport default_telemetry(RobotId id, SimTime /*now*/) {
  TelemetryReport t;
  t.robot_id = id;
  t.m1 = MotorSpeed16::from_value(42.5);
  t.m2 = MotorSpeed16::from_value(-42.5);
  t.m3 = MotorSpeed16::from_value(40.0);
  t.m4 = MotorSpeed16::from_value(-40.0);
  t.dribbler_speed = 12000;
  t.kick_capacitor = 200;
  t.battery = 162;
  return t;
}

// ---------------------------------------------------------------- computer

ComputerNode::ComputerNode(SimTime send_interval_us, std::vector<RobotId> robot_ids,
                           CommandSource source)
    : send_interval_(send_interval_us), robot_ids_(std::move(robot_ids)), source_(std::move(source)) {
  if (send_interval_ <= 0) throw std::invalid_argument("send interval must be positive");
}

void ComputerNode::attach(Simulator& sim, NodeId self, Fabric& fabric) {
  sim_ = &sim;
  self_ = self;
  fabric_ = &fabric;
}

void ComputerNode::start(SimTime at) {
  if (robot_ids_.empty()) return;
  sim_->schedule(at, self_, EventKind::kComputerSend);
}

void ComputerNode::on_event(const SimEvent& ev) {
  switch (ev.kind) {
    case EventKind::kComputerSend:
      tick(ev.time);
      break;
    case EventKind::kComputerRx:
      try {
        received_telemetry_.emplace_back(ev.time, decode_telemetry(ev.payload));
      } catch (const CodecError&) {
        ++undecodable_telemetry_;
      }
      break;
    default:
      break;
  }
}

std::optional<RobotId> ComputerNode::tick(SimTime now) {
  if (!active_ || robot_ids_.empty()) return std::nullopt;
  const RobotId target = robot_ids_[cursor_];
  cursor_ = (cursor_ + 1) % robot_ids_.size();
  EncodedFrame frame = encode_control(source_(target, sends_));
  ++sends_;
  fabric_->send_uplink(frame.bytes(), target, now);
  sim_->schedule(now + send_interval_, self_, EventKind::kComputerSend);
  return target;
}

// ------------------------------------------------------------ base station

bool TxFifo::push(Entry e) {
  if (full()) return false;
  entries_.push_back(std::move(e));
  return true;
}

TxFifo::Entry TxFifo::pop() {
  Entry e = std::move(entries_.front());
  entries_.pop_front();
  return e;
}

void BaseStationConfig::validate() const {
  if (tx_fifo_depth == 0) throw std::invalid_argument("tx fifo depth must be >= 1");
  if (!(service_time_us >= 0)) throw std::invalid_argument("service time must be >= 0");
  if (!(service_jitter_us >= 0 && service_jitter_us <= service_time_us)) {
    throw std::invalid_argument("service jitter must be in [0, service time]");
  }
  if (!(telemetry_forward_time_us >= 0)) throw std::invalid_argument("telemetry forward time must be >= 0");
  uplink.validate();
  control_radio.validate();
  telemetry_radio.validate();
}

BaseStationNode::BaseStationNode(BaseStationConfig cfg, std::uint64_t seed)
    : cfg_(std::move(cfg)), jitter_rng_(seed), fifo_(std::max<std::size_t>(cfg_.tx_fifo_depth, 1)) {
  cfg_.validate();
}

void BaseStationNode::attach(Simulator& sim, NodeId self, Fabric& fabric) {
  sim_ = &sim;
  self_ = self;
  fabric_ = &fabric;
}

void BaseStationNode::on_event(const SimEvent& ev) {
  switch (ev.kind) {
    case EventKind::kUplinkArrival:
      on_uplink(ev.payload, ev.frame_id, ev.time);
      break;
    case EventKind::kPipelineResume:
      resume_pending_ = false;
      try_start(ev.time);
      break;
    case EventKind::kRadioTxDone:
      on_tx_done(ev.time);
      break;
    case EventKind::kTelemetryForwarded:
      if (!forwarding_.empty()) {
        fabric_->send_downlink(std::move(forwarding_.front()), ev.time);
        forwarding_.pop_front();
        ++telemetry_forwarded_;
      }
      break;
    default:
      break;
  }
}

void BaseStationNode::on_uplink(Bytes frame, std::int64_t frame_id, SimTime now) {
  // Content is never inspected; only the length matters for the radio.
  if (frame.size() > kMaxRadioPayload) {
    ++oversized_drops_;
    fabric_->base_station_drop(frame_id);
    return;
  }
  if (!fifo_.push({std::move(frame), frame_id})) {
    ++fifo_drops_;
    fabric_->base_station_drop(frame_id);
    return;
  }
  try_start(now);
}

void BaseStationNode::try_start(SimTime now) {
  if (busy_ || fifo_.empty()) return;
  if (now < control_blocked_until_) {
    if (!resume_pending_) {
      sim_->schedule(control_blocked_until_, self_, EventKind::kPipelineResume);
      resume_pending_ = true;
    }
    return;
  }
  busy_ = true;
  const auto& head = fifo_.front();
  double pipeline = cfg_.control_pipeline_us(head.frame.size());
  if (cfg_.service_jitter_us > 0) pipeline += cfg_.service_jitter_us * (2.0 * jitter_rng_.uniform() - 1.0);
  const SimTime done = now + to_ticks(pipeline);
  sim_->schedule(done, self_, EventKind::kRadioTxDone, {}, head.frame_id);
}

void BaseStationNode::on_tx_done(SimTime now) {
  TxFifo::Entry e = fifo_.pop();
  busy_ = false;
  ++control_sent_;
  fabric_->broadcast_control(e.frame, e.frame_id, now);
  try_start(now);
}

void BaseStationNode::on_telemetry_rx(Bytes frame, SimTime now) {
  // Forwarding shares the processor: one frame at a time, and the next
  // control service cannot start before the forward completes.
  const SimTime start = std::max(now, forward_busy_until_);
  const SimTime done = start + to_ticks(cfg_.telemetry_forward_time_us);
  forward_busy_until_ = done;
  if (cfg_.telemetry_busy_blocks_control) {
    control_blocked_until_ = std::max(control_blocked_until_, done);
  }
  forwarding_.push_back(std::move(frame));
  sim_->schedule(done, self_, EventKind::kTelemetryForwarded);
}

// ------------------------------------------------------------------- robot

RobotNode::RobotNode(RobotId id, SimTime telemetry_interval_us, SimTime boot_time,
                     TelemetrySource source)
    : id_(id),
      telemetry_interval_(telemetry_interval_us),
      boot_time_(boot_time),
      last_telemetry_sent_(boot_time),
      source_(std::move(source)) {
  if (telemetry_interval_ < 0) throw std::invalid_argument("telemetry interval must be >= 0");
}

void RobotNode::attach(Simulator& sim, NodeId self, Fabric& fabric) {
  sim_ = &sim;
  self_ = self;
  fabric_ = &fabric;
}

void RobotNode::start() {
  if (telemetry_interval_ <= 0) return;
  sim_->schedule(std::max(boot_time_, sim_->now()) + kTelemetryCheckPeriodUs, self_,
                 EventKind::kTelemetryTimer);
}

void RobotNode::on_event(const SimEvent& ev) {
  switch (ev.kind) {
    case EventKind::kRadioRx:
      on_radio_rx(ev.payload, ev.time);
      break;
    case EventKind::kTelemetryTimer:
      if (!active_) return;
      telemetry_tick(ev.time);
      sim_->schedule(ev.time + kTelemetryCheckPeriodUs, self_, EventKind::kTelemetryTimer);
      break;
    default:
      break;
  }
}

bool RobotNode::on_radio_rx(std::span<const std::uint8_t> frame, SimTime now) {
  if (frame.size() == kControlFrameBytes) {
    const ControlCommand cmd = decode_control(frame);
    if (cmd.msg_type.is_control() && cmd.robot_id == id_) {
      arrival_log_.push_back(now);
      return true;
    }
  }
  ++discarded_;
  return false;
}

bool RobotNode::telemetry_tick(SimTime now) {
  if (telemetry_interval_ <= 0) return false;
  if (now - last_telemetry_sent_ < telemetry_interval_) return false;
  EncodedFrame frame = encode_telemetry(source_(id_, now));
  last_telemetry_sent_ = now;
  telemetry_log_.push_back(now);
  fabric_->transmit_telemetry(id_, frame.bytes(), now);
  return true;
}

// ----------------------------------------------------------------- network

const char* to_string(TelemetryPhase p) {
  switch (p) {
    case TelemetryPhase::kSpread:
      return "spread";
    case TelemetryPhase::kAligned:
      return "aligned";
    case TelemetryPhase::kRandom:
      return "random";
  }
  return "?";
}

void NetworkConfig::validate() const {
  if (robot_count > 16) throw std::invalid_argument("at most 16 robots fit the 4-bit robot id");
  if (controlled > robot_count) throw std::invalid_argument("controlled robots exceed robot count");
  if (send_interval_us <= 0) throw std::invalid_argument("send interval must be positive");
  if (telemetry_interval_us < 0) throw std::invalid_argument("telemetry interval must be >= 0");
  if (telemetry_launch_jitter_us < 0) throw std::invalid_argument("telemetry launch jitter must be >= 0");
  base_station.validate();
  control_channel.validate();
  telemetry_channel.validate();
}

namespace {

std::vector<RobotId> controlled_ids(const NetworkConfig& cfg) {
  std::vector<RobotId> ids;
  for (std::size_t i = 0; i < cfg.controlled_count(); ++i) ids.emplace_back(static_cast<std::uint8_t>(i));
  return ids;
}

const NetworkConfig& validated(const NetworkConfig& cfg) {
  cfg.validate();
  return cfg;
}

constexpr std::uint64_t kControlStream = 1;
constexpr std::uint64_t kTelemetryStream = 2;
constexpr std::uint64_t kBaseStationStream = 3;
constexpr std::uint64_t kLaunchStream = 4;
constexpr std::uint64_t kPhaseStream = 5;

}  // namespace

Network::Network(NetworkConfig cfg, CommandSource commands, TelemetrySource telemetry)
    : cfg_(validated(cfg)),
      computer_(cfg_.send_interval_us, controlled_ids(cfg_), std::move(commands)),
      base_station_(cfg_.base_station, derive_seed(cfg_.seed, kBaseStationStream)) {
  computer_id_ = sim_.add_node("computer", [this](const SimEvent& ev) { computer_.on_event(ev); });
  base_station_id_ =
      sim_.add_node("base_station", [this](const SimEvent& ev) { base_station_.on_event(ev); });
  telemetry_air_id_ =
      sim_.add_node("telemetry_air", [this](const SimEvent& ev) { on_telemetry_air_end(ev); });

  const auto n = cfg_.robot_count;
  robots_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SimTime boot = 0;
    if (cfg_.telemetry_phase == TelemetryPhase::kSpread && n > 0) {
      boot = cfg_.telemetry_interval_us * static_cast<SimTime>(i) / static_cast<SimTime>(n);
    } else if (cfg_.telemetry_phase == TelemetryPhase::kRandom && cfg_.telemetry_interval_us > 0) {
      RandomStream phase(derive_seed(cfg_.seed, kPhaseStream, i));
      boot = static_cast<SimTime>(phase.next() % static_cast<std::uint64_t>(cfg_.telemetry_interval_us));
    }
    robots_.emplace_back(RobotId(static_cast<std::uint8_t>(i)), cfg_.telemetry_interval_us, boot, telemetry);
  }
  for (std::size_t i = 0; i < n; ++i) {
    robot_ids_.push_back(sim_.add_node("robot" + std::to_string(i),
                                       [this, i](const SimEvent& ev) { robots_[i].on_event(ev); }));
    control_links_.push_back(cfg_.control_channel);
    telemetry_links_.push_back(cfg_.telemetry_channel);
    control_rng_.emplace_back(derive_seed(cfg_.seed, kControlStream, i));
    telemetry_rng_.emplace_back(derive_seed(cfg_.seed, kTelemetryStream, i));
    launch_rng_.emplace_back(derive_seed(cfg_.seed, kLaunchStream, i));
  }
  counters_.resize(n);

  computer_.attach(sim_, computer_id_, *this);
  base_station_.attach(sim_, base_station_id_, *this);
  for (std::size_t i = 0; i < n; ++i) robots_[i].attach(sim_, robot_ids_[i], *this);
}

void Network::start() {
  computer_.start(0);
  for (auto& r : robots_) r.start();
}

void Network::stop_traffic() {
  computer_.stop();
  for (auto& r : robots_) r.stop();
}

bool Network::run_for_arrivals(std::size_t arrivals, SimTime max_time, SimTime step) {
  auto satisfied = [&] {
    for (std::size_t i = 0; i < cfg_.controlled_count(); ++i) {
      if (robots_[i].arrival_log().size() < arrivals) return false;
    }
    return true;
  };
  bool met = satisfied();
  while (!met && sim_.now() < max_time) {
    sim_.run_until(std::min(max_time, sim_.now() + step));
    met = satisfied();
  }
  stop_traffic();
  sim_.run_until_idle();
  return met;
}

double Network::serial_send(SerialLine& line, Bytes& frame, SimTime now, bool& corrupt) {
  const UplinkModel& m = cfg_.base_station.uplink;
  const double byte_us = m.byte_time_us();
  const double t = static_cast<double>(now);
  const double pending = std::max(0.0, line.busy_until_us - t) / byte_us;
  const auto depth = static_cast<std::size_t>(std::ceil(pending - 1e-9));
  SerialTransfer xfer = serial_transfer(frame, m, depth);
  corrupt = xfer.outcome.result == TransmitResult::kCorruptDelivered;
  frame = std::move(*xfer.outcome.delivered_bytes);
  // Overflowed bytes never enter the FIFO, so the line only carries the rest.
  const double accepted = static_cast<double>(frame.size() - xfer.overflow_bytes);
  const double start = std::max(t, line.busy_until_us);
  line.busy_until_us = start + accepted * byte_us;
  return line.busy_until_us;
}

void Network::send_uplink(Bytes frame, RobotId target, SimTime now) {
  const auto frame_id = static_cast<std::int64_t>(frames_.size());
  const std::size_t robot = target.value();
  frames_.push_back({robot, false});
  if (robot < counters_.size()) ++counters_[robot].sent;

  if (cfg_.base_station.uplink.kind == UplinkKind::kEthernet) {
    sim_.schedule(now + to_ticks(cfg_.base_station.uplink.latency_us), base_station_id_,
                  EventKind::kUplinkArrival, std::move(frame), frame_id);
    return;
  }
  bool corrupt = false;
  const double arrival = serial_send(serial_down_, frame, now, corrupt);
  if (corrupt) {
    frames_[frame_id].uplink_corrupt = true;
    ++uplink_corrupted_;
  }
  sim_.schedule(std::max(now, to_ticks(arrival)), base_station_id_, EventKind::kUplinkArrival,
                std::move(frame), frame_id);
}

void Network::broadcast_control(const Bytes& frame, std::int64_t frame_id, SimTime now) {
  const FrameInfo* info =
      frame_id >= 0 && static_cast<std::size_t>(frame_id) < frames_.size() ? &frames_[frame_id] : nullptr;
  for (std::size_t i = 0; i < robots_.size(); ++i) {
    TransmitOutcome out = channel_transmit(frame, control_links_[i], control_rng_[i]);
    if (info && info->target == i) {
      FrameCounters& c = counters_[i];
      switch (out.result) {
        case TransmitResult::kDelivered:
          ++(info->uplink_corrupt ? c.corrupt_delivered : c.delivered);
          break;
        case TransmitResult::kLost:
          ++c.lost;
          break;
        case TransmitResult::kCorruptDropped:
          ++c.corrupt_dropped;
          break;
        case TransmitResult::kCorruptDelivered:
          ++c.corrupt_delivered;
          break;
      }
    }
    if (out.result == TransmitResult::kDelivered) {
      sim_.schedule(now, robot_ids_[i], EventKind::kRadioRx, std::move(*out.delivered_bytes), frame_id);
    }
  }
}

void Network::base_station_drop(std::int64_t frame_id) {
  if (frame_id < 0 || static_cast<std::size_t>(frame_id) >= frames_.size()) return;
  const std::size_t robot = frames_[frame_id].target;
  if (robot < counters_.size()) ++counters_[robot].bs_drops;
}

void Network::send_downlink(Bytes frame, SimTime now) {
  const UplinkModel& m = cfg_.base_station.uplink;
  SimTime arrival = now + to_ticks(m.latency_us);
  if (m.kind == UplinkKind::kSerial) {
    bool corrupt = false;
    arrival = std::max(now, to_ticks(serial_send(serial_up_, frame, now, corrupt)));
  }
  sim_.schedule(arrival, computer_id_, EventKind::kComputerRx, std::move(frame));
}

void Network::transmit_telemetry(RobotId from, Bytes frame, SimTime now) {
  const RadioConfig& radio = cfg_.base_station.telemetry_radio;
  const double load = spi_time(frame.size(), radio);
  SimTime launch = now;
  if (cfg_.telemetry_launch_jitter_us > 0) {
    launch += static_cast<SimTime>(launch_rng_[from.value()].next() %
                                   static_cast<std::uint64_t>(cfg_.telemetry_launch_jitter_us));
  }
  const SimTime start = launch + to_ticks(load);
  const SimTime end = launch + to_ticks(load + air_time(frame.size(), radio));
  const auto tx_id = static_cast<std::int64_t>(telemetry_tx_.size());
  telemetry_tx_.push_back({from.value(), std::move(frame), false});
  ++telemetry_.sent;

  std::erase_if(telemetry_air_, [now](const AirSlot& s) { return s.end <= now; });
  if (cfg_.telemetry_channel.collisions_enabled) {
    for (const AirSlot& s : telemetry_air_) {
      if (s.start < end && start < s.end) {
        telemetry_tx_[s.tx_id].collided = true;
        telemetry_tx_[tx_id].collided = true;
      }
    }
  }
  telemetry_air_.push_back({start, end, tx_id});
  sim_.schedule(end, telemetry_air_id_, EventKind::kTelemetryRx, {}, tx_id);
}

void Network::on_telemetry_air_end(const SimEvent& ev) {
  TelemetryTx& tx = telemetry_tx_.at(static_cast<std::size_t>(ev.frame_id));
  if (tx.collided) {
    ++telemetry_.collided;
    return;
  }
  TransmitOutcome out = channel_transmit(tx.frame, telemetry_links_[tx.robot], telemetry_rng_[tx.robot]);
  switch (out.result) {
    case TransmitResult::kDelivered:
      ++telemetry_.received;
      base_station_.on_telemetry_rx(std::move(*out.delivered_bytes), ev.time);
      break;
    case TransmitResult::kLost:
      ++telemetry_.lost;
      break;
    default:
      ++telemetry_.corrupt_dropped;
      break;
  }
  tx.frame.clear();
}

}  // namespace sslnet
