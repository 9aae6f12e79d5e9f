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

// The base station as a real UDP service. Control datagrams (one frame
// each) go through a wall-clock version of the base-station pipeline into
// simulated robots; their telemetry comes back as datagrams addressed to the
// most recent control sender on `telemetry_port`.
//
// Threads: ingress (socket read + FIFO admission), control pipeline,
// telemetry timer, telemetry forwarder, egress. Only the pipeline and the
// forwarder share state (`blocked_until`), so a stalled telemetry peer can
// never hold up control ingress.

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <netinet/in.h>

#include "sslnet/config.hpp"
#include "sslnet/link.hpp"
#include "sslnet/nodes.hpp"
#include "sslnet/sim.hpp"

namespace sslnet {

struct LiveBridgeConfig {
  std::string bind_address = "127.0.0.1";
  /// 0 binds an ephemeral port; see LiveBridge::control_port().
  std::uint16_t control_port = 10010;
  std::uint16_t telemetry_port = 10011;
  BaseStationConfig base_station;
  ChannelModel control_channel;
  ChannelModel telemetry_channel;
  std::size_t robot_count = 1;
  SimTime telemetry_interval_us = 0;
  std::uint64_t seed = 1;
};

LiveBridgeConfig live_bridge_config(const ScenarioConfig& cfg);

struct LiveCounters {
  std::uint64_t ingress = 0;    // datagrams read
  std::uint64_t malformed = 0;  // shorter than a control frame
  std::uint64_t oversized = 0;  // longer than a radio payload
  std::uint64_t fifo_drops = 0;
  std::uint64_t broadcast = 0;  // frames put on the simulated air
  std::uint64_t robot_receptions = 0;
  std::uint64_t telemetry_generated = 0;
  std::uint64_t telemetry_lost = 0;
  std::uint64_t telemetry_forwarded = 0;
  std::uint64_t egress_sent = 0;
  std::uint64_t egress_failed = 0;
  std::uint64_t egress_no_peer = 0;
};

class LiveBridge {
 public:
  explicit LiveBridge(LiveBridgeConfig cfg);
  ~LiveBridge();
  LiveBridge(const LiveBridge&) = delete;
  LiveBridge& operator=(const LiveBridge&) = delete;

  /// Binds the control socket and starts every thread. Throws
  /// std::system_error when the socket cannot be bound.
  void start();
  void stop();
  bool running() const { return running_; }

  std::uint16_t control_port() const { return bound_port_; }
  LiveCounters counters() const;
  /// Reception times (us since start) of robot `i`.
  std::vector<SimTime> arrivals(std::size_t i) const;
  const LiveBridgeConfig& config() const { return cfg_; }

 private:
  class TelemetryFabric final : public Fabric {
   public:
    explicit TelemetryFabric(LiveBridge& owner) : owner_(owner) {}
    void send_uplink(Bytes, RobotId, SimTime) override {}
    void broadcast_control(const Bytes&, std::int64_t, SimTime) override {}
    void base_station_drop(std::int64_t) override {}
    void send_downlink(Bytes, SimTime) override {}
    void transmit_telemetry(RobotId from, Bytes frame, SimTime now) override;

   private:
    LiveBridge& owner_;
  };

  SimTime now_us() const;
  void sleep_until_us(SimTime t) const;

  void ingress_loop();
  void pipeline_loop();
  void telemetry_loop();
  void forward_loop();
  void egress_loop();

  LiveBridgeConfig cfg_;
  std::atomic<bool> running_{false};
  std::chrono::steady_clock::time_point epoch_;
  int control_fd_ = -1;
  int egress_fd_ = -1;
  std::uint16_t bound_port_ = 0;

  std::mutex peer_mu_;
  bool have_peer_ = false;
  sockaddr_in peer_{};

  // Control FIFO; the front entry is the frame in service.
  std::mutex fifo_mu_;
  std::condition_variable fifo_cv_;
  std::deque<Bytes> fifo_;

  std::atomic<SimTime> blocked_until_{0};

  mutable std::mutex robots_mu_;
  Simulator unused_sim_;
  TelemetryFabric fabric_{*this};
  std::vector<RobotNode> robots_;
  std::vector<RandomStream> control_rng_;
  std::vector<RandomStream> telemetry_rng_;
  RandomStream jitter_rng_;  // pipeline thread only

  std::mutex forward_mu_;
  std::condition_variable forward_cv_;
  std::deque<Bytes> forward_q_;

  std::mutex egress_mu_;
  std::condition_variable egress_cv_;
  std::deque<Bytes> egress_q_;

  struct AtomicCounters {
    std::atomic<std::uint64_t> ingress{0}, malformed{0}, oversized{0}, fifo_drops{0}, broadcast{0},
        robot_receptions{0}, telemetry_generated{0}, telemetry_lost{0}, telemetry_forwarded{0}, egress_sent{0},
        egress_failed{0}, egress_no_peer{0};
  } n_;

  std::vector<std::thread> threads_;
};

}  // namespace sslnet
