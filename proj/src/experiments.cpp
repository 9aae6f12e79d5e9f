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

#include "sslnet/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <stdexcept>
#include <thread>

namespace sslnet {

RunResult run_scenario(const ScenarioConfig& cfg, std::uint64_t seed, std::ostream* trace) {
  cfg.validate();
  Network net(cfg.network(seed));
  if (trace) net.sim().set_trace_sink(trace);
  net.start();

  RunResult r;
  const std::size_t needed = cfg.warmup + cfg.window + 1;
  r.window_satisfied = net.run_for_arrivals(needed, cfg.max_time_ms * 1000);

  const std::size_t controlled = net.config().controlled_count();
  for (std::size_t i = 0; i < controlled; ++i) {
    const auto& log = net.robot(i).arrival_log();
    DeliveryStats s;
    try {
      s = compute_stats(log, cfg.window, cfg.warmup);
    } catch (const WindowError&) {
      r.window_satisfied = false;
    }
    s.robot_id = static_cast<int>(i);
    const FrameCounters& c = net.counters(i);
    s.lost = c.lost;
    s.corrupt_dropped = c.corrupt_dropped;
    s.corrupt_delivered = c.corrupt_delivered;
    s.base_station_drops = c.bs_drops;
    r.stats.push_back(s);
  }
  for (std::size_t i = 0; i < net.robot_count(); ++i) r.counters.push_back(net.counters(i));
  r.telemetry = net.telemetry_counters();
  r.telemetry_received_by_computer = net.computer().received_telemetry().size();
  r.trace_hash = net.sim().trace_hash();
  r.events = net.sim().dispatched();
  r.end_time = net.sim().now();
  return r;
}

namespace {

struct Job {
  ScenarioConfig cfg;
  std::uint64_t seed = 0;
  double param = 0.0;
};

// Runs jobs on up to hardware_concurrency threads; results keep job order.
std::vector<RunResult> run_all(const std::vector<Job>& jobs) {
  std::vector<RunResult> results(jobs.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(jobs.size(), std::thread::hardware_concurrency()));
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        results[i] = run_scenario(jobs[i].cfg, jobs[i].seed);
      }
    }));
  }
  for (auto& f : pool) f.get();
  return results;
}

void collect(ExperimentResult& out, const Job& job, const RunResult& r) {
  out.all_satisfied = out.all_satisfied && r.window_satisfied;
  for (const auto& s : r.stats) out.rows.push_back({out.name, job.param, job.seed, s});
}

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double mean_of(const std::vector<RunResult>& rs, std::size_t from, std::size_t count) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = from; i < from + count; ++i) {
    for (const auto& s : rs[i].stats) {
      sum += s.mean;
      ++n;
    }
  }
  return n ? sum / static_cast<double>(n) : 0.0;
}

}  // namespace

ExperimentResult interval_sweep(const ScenarioConfig& cfg, const std::vector<double>& intervals_us) {
  if (intervals_us.empty()) throw std::invalid_argument("interval sweep needs at least one interval");
  ExperimentResult out{"interval-sweep", {}, true, {}};
  std::vector<Job> jobs;
  for (double iv : intervals_us) {
    if (!(iv >= 1.0)) throw std::invalid_argument("send interval must be >= 1 us");
    for (std::size_t k = 0; k < cfg.repeat; ++k) {
      Job j{cfg, cfg.seed + k, iv};
      j.cfg.send_interval_us = static_cast<std::int64_t>(iv);
      j.cfg.robot_count = 1;
      j.cfg.targets = 0;
      jobs.push_back(std::move(j));
    }
  }
  const auto results = run_all(jobs);
  for (std::size_t i = 0; i < jobs.size(); ++i) collect(out, jobs[i], results[i]);
  for (std::size_t p = 0; p < intervals_us.size(); ++p) {
    std::uint64_t corrupt = 0;
    for (std::size_t k = 0; k < cfg.repeat; ++k) corrupt += results[p * cfg.repeat + k].stats[0].corrupt_delivered;
    out.summary.push_back(format("interval %8.1f us: mean of %zu means %9.2f us, corrupt_delivered %llu",
                                 intervals_us[p], cfg.repeat, mean_of(results, p * cfg.repeat, cfg.repeat),
                                 static_cast<unsigned long long>(corrupt)));
  }
  return out;
}

ExperimentResult telemetry_sweep(const ScenarioConfig& cfg, const std::vector<double>& sampling_ms,
                                 std::size_t telemetry_robots, std::vector<TelemetryPoint>* points) {
  if (telemetry_robots == 0 || telemetry_robots > 16) {
    throw std::invalid_argument("telemetry robots must be in [1, 16]");
  }
  ExperimentResult out{"telemetry-sweep", {}, true, {}};
  std::vector<double> params{0.0};
  for (double s : sampling_ms) {
    if (!(s >= 1.0)) throw std::invalid_argument("telemetry sampling must be >= 1 ms");
    params.push_back(s);
  }
  std::vector<Job> jobs;
  for (double p : params) {
    Job j{cfg, cfg.seed, p};
    j.cfg.robot_count = telemetry_robots;
    j.cfg.targets = 1;
    j.cfg.telemetry_interval_ms = static_cast<std::int64_t>(p);
    jobs.push_back(std::move(j));
  }
  const auto results = run_all(jobs);
  for (std::size_t i = 0; i < jobs.size(); ++i) collect(out, jobs[i], results[i]);

  const double base = results[0].stats[0].mean;
  std::vector<TelemetryPoint> pts;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const DeliveryStats& s = results[i].stats[0];
    TelemetryPoint tp{params[i], s.mean, s.stddev, base > 0 ? 100.0 * (s.mean / base - 1.0) : 0.0};
    if (i == 0) tp.increase_pct = 0.0;
    pts.push_back(tp);
    out.summary.push_back(
        params[i] == 0.0
            ? format("telemetry off      : mean %9.2f us  stddev %8.2f us", s.mean, s.stddev)
            : format("telemetry %6.0f ms: mean %9.2f us  stddev %8.2f us  increase %+6.2f%%  (%llu telemetry frames)",
                     params[i], s.mean, s.stddev, tp.increase_pct,
                     static_cast<unsigned long long>(results[i].telemetry.received)));
  }
  if (points) *points = std::move(pts);
  return out;
}

ExperimentResult distance_sweep(const ScenarioConfig& cfg, const std::vector<double>& distances_m) {
  if (distances_m.empty()) throw std::invalid_argument("distance sweep needs at least one distance");
  ExperimentResult out{"distance-sweep", {}, true, {}};
  std::vector<Job> jobs;
  for (double d : distances_m) {
    if (!(d >= 0.0)) throw std::invalid_argument("distance must be >= 0");
    Job j{cfg, cfg.seed, d};
    j.cfg.distance_m = d;
    jobs.push_back(std::move(j));
  }
  const auto results = run_all(jobs);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    collect(out, jobs[i], results[i]);
    out.summary.push_back(format("distance %5.2f m: mean %9.2f us", distances_m[i], mean_of(results, i, 1)));
  }
  return out;
}

ExperimentResult multi_robot(const ScenarioConfig& cfg, const std::vector<std::size_t>& counts) {
  if (counts.empty()) throw std::invalid_argument("multi-robot needs at least one count");
  ExperimentResult out{"multi-robot", {}, true, {}};
  std::vector<Job> jobs;
  for (std::size_t n : counts) {
    if (n < 1 || n > 16) throw std::invalid_argument("robot count must be in [1, 16]");
    Job j{cfg, cfg.seed, static_cast<double>(n)};
    j.cfg.robot_count = n;
    j.cfg.targets = 0;
    jobs.push_back(std::move(j));
  }
  const auto results = run_all(jobs);
  const double one = mean_of(results, 0, 1);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    collect(out, jobs[i], results[i]);
    const double m = mean_of(results, i, 1);
    out.summary.push_back(format("%2zu robots: mean per-robot interval %9.2f us (x%.3f of first count)", counts[i], m,
                                 one > 0 ? m / one : 0.0));
  }
  return out;
}

ExperimentResult single_run(const ScenarioConfig& cfg, std::ostream* trace) {
  ExperimentResult out{"run", {}, true, {}};
  const RunResult r = run_scenario(cfg, cfg.seed, trace);
  collect(out, Job{cfg, cfg.seed, 0.0}, r);
  out.summary.push_back(format("events %llu, end time %lld us, trace hash %016llx",
                               static_cast<unsigned long long>(r.events), static_cast<long long>(r.end_time),
                               static_cast<unsigned long long>(r.trace_hash)));
  out.summary.push_back(format("telemetry: sent %llu, collided %llu, received %llu, at computer %llu",
                               static_cast<unsigned long long>(r.telemetry.sent),
                               static_cast<unsigned long long>(r.telemetry.collided),
                               static_cast<unsigned long long>(r.telemetry.received),
                               static_cast<unsigned long long>(r.telemetry_received_by_computer)));
  return out;
}

std::vector<std::string> config_comments(const ScenarioConfig& cfg, const std::string& experiment) {
  std::vector<std::string> out{"sslnet " + experiment};
  for (auto& kv : cfg.describe()) out.push_back(kv);
  return out;
}

}  // namespace sslnet
