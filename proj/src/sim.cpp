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

#include "sslnet/sim.hpp"

#include <ostream>

namespace sslnet {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kComputerSend:
      return "COMPUTER_SEND";
    case EventKind::kUplinkArrival:
      return "UPLINK_ARRIVAL";
    case EventKind::kPipelineResume:
      return "PIPELINE_RESUME";
    case EventKind::kRadioTxDone:
      return "RADIO_TX_DONE";
    case EventKind::kRadioRx:
      return "RADIO_RX";
    case EventKind::kTelemetryTimer:
      return "TELEMETRY_TIMER";
    case EventKind::kTelemetryRx:
      return "TELEMETRY_RX";
    case EventKind::kTelemetryForwarded:
      return "TELEMETRY_FORWARDED";
    case EventKind::kComputerRx:
      return "COMPUTER_RX";
    case EventKind::kUser:
      return "USER";
  }
  return "?";
}

SimEvent EventQueue::pop() {
  // priority_queue::top is const; the copy is cheap for <= 14 byte payloads.
  SimEvent ev = heap_.top();
  heap_.pop();
  return ev;
}

NodeId Simulator::add_node(std::string name, Handler handler) {
  handlers_.push_back(std::move(handler));
  names_.push_back(std::move(name));
  return static_cast<NodeId>(handlers_.size() - 1);
}

void Simulator::schedule(SimEvent ev) {
  if (ev.time < now_) throw CausalityError("causality violation");
  ev.sequence = next_sequence_++;
  queue_.push(std::move(ev));
}

void Simulator::schedule(SimTime at, NodeId target, EventKind kind, Bytes payload,
                         std::int64_t frame_id) {
  SimEvent ev;
  ev.time = at;
  ev.target = target;
  ev.kind = kind;
  ev.payload = std::move(payload);
  ev.frame_id = frame_id;
  schedule(std::move(ev));
}

void Simulator::run_until(SimTime t_end) {
  if (t_end < now_) throw CausalityError("causality violation");
  while (!queue_.empty() && queue_.top().time <= t_end) {
    SimEvent ev = queue_.pop();
    now_ = ev.time;
    dispatch(ev);
  }
  now_ = t_end;
}

void Simulator::run_until_idle() {
  while (!queue_.empty()) {
    SimEvent ev = queue_.pop();
    now_ = ev.time;
    dispatch(ev);
  }
}

void Simulator::dispatch(const SimEvent& ev) {
  ++dispatched_;
  const std::string line = std::to_string(ev.time) + ' ' + std::to_string(ev.sequence) + ' ' +
                           std::to_string(ev.target) + ' ' + to_string(ev.kind);
  for (unsigned char c : line) {
    trace_hash_ ^= c;
    trace_hash_ *= 0x100000001b3ULL;
  }
  trace_hash_ ^= '\n';
  trace_hash_ *= 0x100000001b3ULL;
  if (trace_sink_) *trace_sink_ << line << '\n';

  if (ev.target < handlers_.size() && handlers_[ev.target]) handlers_[ev.target](ev);
}

}  // namespace sslnet
