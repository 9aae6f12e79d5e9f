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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "sslnet/codec.hpp"

namespace sslnet {

/// Virtual time in integer microseconds.
using SimTime = std::int64_t;
using NodeId = std::uint32_t;

class CausalityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class EventKind : std::uint8_t {
  kComputerSend,
  kUplinkArrival,
  kPipelineResume,
  kRadioTxDone,
  kRadioRx,
  kTelemetryTimer,
  kTelemetryRx,
  kTelemetryForwarded,
  kComputerRx,
  kUser,
};

const char* to_string(EventKind kind);

struct SimEvent {
  SimTime time = 0;
  std::uint64_t sequence = 0;  // assigned by the simulator
  NodeId target = 0;
  EventKind kind = EventKind::kUser;
  Bytes payload;
  /// Simulation-side bookkeeping handle; never part of the wire bytes.
  std::int64_t frame_id = -1;
};

/// Min-heap on (time, sequence).
class EventQueue {
 public:
  void push(SimEvent ev) { heap_.push(std::move(ev)); }
  const SimEvent& top() const { return heap_.top(); }
  SimEvent pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
};

class Simulator {
 public:
  using Handler = std::function<void(const SimEvent&)>;

  /// Registers a handler and returns its node id (dense, from 0).
  NodeId add_node(std::string name, Handler handler);

  /// Assigns the next sequence number and enqueues. Throws
  /// CausalityError("causality violation") if ev.time < now().
  void schedule(SimEvent ev);
  void schedule(SimTime at, NodeId target, EventKind kind, Bytes payload = {},
                std::int64_t frame_id = -1);

  /// Dispatches every event with time <= t_end; the clock ends at t_end.
  void run_until(SimTime t_end);
  /// Dispatches until the queue is empty; the clock ends at the last event.
  void run_until_idle();

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }
  const std::string& node_name(NodeId id) const { return names_.at(id); }

  /// FNV-1a over the dispatched trace lines "time seq target kind".
  std::uint64_t trace_hash() const { return trace_hash_; }
  /// Mirrors each trace line to `os` (nullptr disables).
  void set_trace_sink(std::ostream* os) { trace_sink_ = os; }

 private:
  void dispatch(const SimEvent& ev);

  EventQueue queue_;
  std::vector<Handler> handlers_;
  std::vector<std::string> names_;
  SimTime now_ = 0;
  std::uint64_t next_sequence_ = 0;
  std::uint64_t dispatched_ = 0;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
  std::ostream* trace_sink_ = nullptr;
};

}  // namespace sslnet
