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

#include "sslnet/live_bridge.hpp"

#include <arpa/inet.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <system_error>

namespace sslnet {

namespace {

constexpr std::size_t kMaxDatagram = 2048;
constexpr int kPollTimeoutMs = 20;
constexpr std::uint64_t kLiveControlStream = 11;
constexpr std::uint64_t kLiveTelemetryStream = 12;
constexpr std::uint64_t kLiveJitterStream = 13;

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

LiveBridgeConfig live_bridge_config(const ScenarioConfig& cfg) {
  const NetworkConfig net = cfg.network();
  LiveBridgeConfig out;
  out.bind_address = cfg.live_bind;
  out.control_port = cfg.control_port;
  out.telemetry_port = cfg.telemetry_port;
  out.base_station = net.base_station;
  out.control_channel = net.control_channel;
  out.telemetry_channel = net.telemetry_channel;
  out.robot_count = net.robot_count;
  out.telemetry_interval_us = net.telemetry_interval_us;
  out.seed = net.seed;
  return out;
}

LiveBridge::LiveBridge(LiveBridgeConfig cfg)
    : cfg_(std::move(cfg)), jitter_rng_(derive_seed(cfg_.seed, kLiveJitterStream)) {
  if (cfg_.robot_count < 1 || cfg_.robot_count > 16) throw std::invalid_argument("robot count must be in [1, 16]");
  if (cfg_.telemetry_interval_us < 0) throw std::invalid_argument("telemetry interval must be >= 0");
  cfg_.base_station.validate();
  cfg_.control_channel.validate();
  cfg_.telemetry_channel.validate();
  const auto n = cfg_.robot_count;
  robots_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SimTime boot = cfg_.telemetry_interval_us * static_cast<SimTime>(i) / static_cast<SimTime>(n);
    robots_.emplace_back(RobotId(static_cast<std::uint8_t>(i)), cfg_.telemetry_interval_us, boot);
    robots_.back().attach(unused_sim_, 0, fabric_);
    control_rng_.emplace_back(derive_seed(cfg_.seed, kLiveControlStream, i));
    telemetry_rng_.emplace_back(derive_seed(cfg_.seed, kLiveTelemetryStream, i));
  }
}

LiveBridge::~LiveBridge() { stop(); }

SimTime LiveBridge::now_us() const {
  return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - epoch_).count();
}

void LiveBridge::sleep_until_us(SimTime t) const {
  std::this_thread::sleep_until(epoch_ + std::chrono::microseconds(t));
}

void LiveBridge::start() {
  if (running_) return;
  control_fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (control_fd_ < 0) throw_errno("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(cfg_.control_port);
  if (::inet_pton(AF_INET, cfg_.bind_address.c_str(), &addr.sin_addr) != 1) {
    ::close(control_fd_);
    control_fd_ = -1;
    throw std::system_error(EINVAL, std::generic_category(), "bad bind address " + cfg_.bind_address);
  }
  if (::bind(control_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    const int err = errno;
    ::close(control_fd_);
    control_fd_ = -1;
    throw std::system_error(err, std::generic_category(),
                            "bind " + cfg_.bind_address + ":" + std::to_string(cfg_.control_port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(control_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  bound_port_ = ntohs(addr.sin_port);

  egress_fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
  if (egress_fd_ < 0) {
    ::close(control_fd_);
    control_fd_ = -1;
    throw_errno("socket");
  }

  epoch_ = std::chrono::steady_clock::now();
  blocked_until_ = 0;
  running_ = true;
  threads_.emplace_back(&LiveBridge::ingress_loop, this);
  threads_.emplace_back(&LiveBridge::pipeline_loop, this);
  threads_.emplace_back(&LiveBridge::forward_loop, this);
  threads_.emplace_back(&LiveBridge::egress_loop, this);
  if (cfg_.telemetry_interval_us > 0) threads_.emplace_back(&LiveBridge::telemetry_loop, this);
}

void LiveBridge::stop() {
  if (!running_.exchange(false)) return;
  fifo_cv_.notify_all();
  forward_cv_.notify_all();
  egress_cv_.notify_all();
  for (auto& t : threads_) t.join();
  threads_.clear();
  ::close(control_fd_);
  ::close(egress_fd_);
  control_fd_ = egress_fd_ = -1;
}

LiveCounters LiveBridge::counters() const {
  LiveCounters c;
  c.ingress = n_.ingress;
  c.malformed = n_.malformed;
  c.oversized = n_.oversized;
  c.fifo_drops = n_.fifo_drops;
  c.broadcast = n_.broadcast;
  c.robot_receptions = n_.robot_receptions;
  c.telemetry_generated = n_.telemetry_generated;
  c.telemetry_lost = n_.telemetry_lost;
  c.telemetry_forwarded = n_.telemetry_forwarded;
  c.egress_sent = n_.egress_sent;
  c.egress_failed = n_.egress_failed;
  c.egress_no_peer = n_.egress_no_peer;
  return c;
}

std::vector<SimTime> LiveBridge::arrivals(std::size_t i) const {
  std::lock_guard lk(robots_mu_);
  return robots_.at(i).arrival_log();
}

void LiveBridge::ingress_loop() {
  std::vector<std::uint8_t> buf(kMaxDatagram);
  pollfd pfd{control_fd_, POLLIN, 0};
  while (running_) {
    if (::poll(&pfd, 1, kPollTimeoutMs) <= 0) continue;
    sockaddr_in from{};
    socklen_t flen = sizeof from;
    const ssize_t got =
        ::recvfrom(control_fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&from), &flen);
    if (got < 0) continue;
    ++n_.ingress;
    {
      std::lock_guard lk(peer_mu_);
      peer_ = from;
      have_peer_ = true;
    }
    const auto size = static_cast<std::size_t>(got);
    if (size < kControlFrameBytes) {
      ++n_.malformed;
      continue;
    }
    if (size > kMaxRadioPayload) {
      ++n_.oversized;
      continue;
    }
    {
      std::lock_guard lk(fifo_mu_);
      if (fifo_.size() >= cfg_.base_station.tx_fifo_depth) {
        ++n_.fifo_drops;
        continue;
      }
      fifo_.emplace_back(buf.begin(), buf.begin() + got);
    }
    fifo_cv_.notify_one();
  }
}

void LiveBridge::pipeline_loop() {
  while (running_) {
    Bytes frame;
    {
      std::unique_lock lk(fifo_mu_);
      fifo_cv_.wait(lk, [&] { return !fifo_.empty() || !running_; });
      if (!running_) return;
      frame = fifo_.front();
    }
    // A forward that starts while we wait extends the block.
    for (SimTime b = blocked_until_; now_us() < b; b = blocked_until_) sleep_until_us(b);
    const SimTime start = now_us();
    double pipeline = cfg_.base_station.control_pipeline_us(frame.size());
    if (cfg_.base_station.service_jitter_us > 0) {
      pipeline += cfg_.base_station.service_jitter_us * (2.0 * jitter_rng_.uniform() - 1.0);
    }
    sleep_until_us(start + to_ticks(pipeline));
    {
      std::lock_guard lk(fifo_mu_);
      fifo_.pop_front();
    }
    ++n_.broadcast;
    std::lock_guard lk(robots_mu_);
    const SimTime now = now_us();
    for (std::size_t i = 0; i < robots_.size(); ++i) {
      const TransmitOutcome out = channel_transmit(frame, cfg_.control_channel, control_rng_[i]);
      if (out.result == TransmitResult::kDelivered && robots_[i].on_radio_rx(*out.delivered_bytes, now)) {
        ++n_.robot_receptions;
      }
    }
  }
}

void LiveBridge::telemetry_loop() {
  SimTime next = 0;
  while (running_) {
    next += kTelemetryCheckPeriodUs;
    sleep_until_us(next);
    // Robots see the nominal tick time, so a late wake-up does not push
    // their next send back by a whole check period.
    std::lock_guard lk(robots_mu_);
    for (auto& r : robots_) r.telemetry_tick(next);
  }
}

void LiveBridge::TelemetryFabric::transmit_telemetry(RobotId from, Bytes frame, SimTime) {
  LiveBridge& b = owner_;
  ++b.n_.telemetry_generated;
  const TransmitOutcome out = channel_transmit(frame, b.cfg_.telemetry_channel, b.telemetry_rng_[from.value()]);
  if (out.result != TransmitResult::kDelivered) {
    ++b.n_.telemetry_lost;
    return;
  }
  {
    std::lock_guard lk(b.forward_mu_);
    b.forward_q_.push_back(*out.delivered_bytes);
  }
  b.forward_cv_.notify_one();
}

void LiveBridge::forward_loop() {
  const SimTime forward = to_ticks(cfg_.base_station.telemetry_forward_time_us);
  while (running_) {
    Bytes frame;
    {
      std::unique_lock lk(forward_mu_);
      forward_cv_.wait(lk, [&] { return !forward_q_.empty() || !running_; });
      if (!running_) return;
      frame = std::move(forward_q_.front());
      forward_q_.pop_front();
    }
    const SimTime done = now_us() + forward;
    if (cfg_.base_station.telemetry_busy_blocks_control) {
      SimTime cur = blocked_until_;
      while (cur < done && !blocked_until_.compare_exchange_weak(cur, done)) {
      }
    }
    sleep_until_us(done);
    ++n_.telemetry_forwarded;
    {
      std::lock_guard lk(egress_mu_);
      egress_q_.push_back(std::move(frame));
    }
    egress_cv_.notify_one();
  }
}

void LiveBridge::egress_loop() {
  while (running_) {
    Bytes frame;
    {
      std::unique_lock lk(egress_mu_);
      egress_cv_.wait(lk, [&] { return !egress_q_.empty() || !running_; });
      if (!running_) return;
      frame = std::move(egress_q_.front());
      egress_q_.pop_front();
    }
    sockaddr_in to{};
    {
      std::lock_guard lk(peer_mu_);
      if (!have_peer_) {
        ++n_.egress_no_peer;
        continue;
      }
      to = peer_;
    }
    to.sin_port = htons(cfg_.telemetry_port);
    const ssize_t sent =
        ::sendto(egress_fd_, frame.data(), frame.size(), MSG_DONTWAIT, reinterpret_cast<sockaddr*>(&to), sizeof to);
    if (sent == static_cast<ssize_t>(frame.size())) {
      ++n_.egress_sent;
    } else {
      ++n_.egress_failed;
    }
  }
}

}  // namespace sslnet
