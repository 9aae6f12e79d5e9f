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

#include "sslnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace sslnet {

DeliveryStats compute_stats(std::span<const SimTime> arrival_log, std::size_t window, std::size_t warmup) {
  if (arrival_log.size() < warmup + 2) throw WindowError(arrival_log.size(), warmup + 2);
  const auto take = std::min(window + 1, arrival_log.size() - warmup);
  const auto span = arrival_log.subspan(warmup, take);

  DeliveryStats s;
  s.n_intervals = take - 1;
  // Integer sums keep the telescoping identity exact.
  const SimTime total = span.back() - span.front();
  s.mean = static_cast<double>(total) / static_cast<double>(s.n_intervals);
  SimTime lo = span[1] - span[0];
  SimTime hi = lo;
  double sq = 0.0;
  for (std::size_t i = 1; i < span.size(); ++i) {
    const SimTime d = span[i] - span[i - 1];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    const double dev = static_cast<double>(d) - s.mean;
    sq += dev * dev;
  }
  s.stddev = std::sqrt(sq / static_cast<double>(s.n_intervals));
  s.min = static_cast<double>(lo);
  s.max = static_cast<double>(hi);
  return s;
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  // "-0.00" and "0.00" must not differ between otherwise identical runs.
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

void sort_rows(std::vector<StatsRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const StatsRow& a, const StatsRow& b) {
    if (a.param != b.param) return a.param < b.param;
    if (a.stats.robot_id != b.stats.robot_id) return a.stats.robot_id < b.stats.robot_id;
    return a.seed < b.seed;
  });
}

}  // namespace

void write_csv(std::ostream& os, std::vector<StatsRow> rows, const std::vector<std::string>& comments) {
  if (rows.empty()) throw std::invalid_argument("no stats to write");
  sort_rows(rows);
  for (const auto& c : comments) os << "# " << c << '\n';
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    const DeliveryStats& s = r.stats;
    os << r.experiment << ',' << fixed2(r.param) << ',' << s.robot_id << ',' << s.n_intervals << ','
       << fixed2(s.mean) << ',' << fixed2(s.stddev) << ',' << fixed2(s.min) << ',' << fixed2(s.max) << ','
       << s.lost << ',' << s.corrupt_dropped << ',' << s.corrupt_delivered << ',' << s.base_station_drops
       << ',' << r.seed << '\n';
  }
}

void write_csv(const std::string& path, std::vector<StatsRow> rows, const std::vector<std::string>& comments) {
  if (rows.empty()) throw std::invalid_argument("no stats to write");
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(f, std::move(rows), comments);
  f.flush();
  if (!f) throw std::runtime_error("failed writing " + path);
}

void print_summary(std::ostream& os, const std::vector<StatsRow>& rows) {
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %10s %5s %6s %10s %10s %9s %9s %6s %6s %6s %7s\n", "experiment",
                "param", "robot", "n", "mean_us", "stddev_us", "min_us", "max_us", "lost", "c_drop", "c_dlv",
                "bs_drop");
  os << line;
  for (const auto& r : rows) {
    const DeliveryStats& s = r.stats;
    std::snprintf(line, sizeof line, "%-16s %10.2f %5d %6zu %10.2f %10.2f %9.2f %9.2f %6llu %6llu %6llu %7llu\n",
                  r.experiment.c_str(), r.param, s.robot_id, s.n_intervals, s.mean, s.stddev, s.min, s.max,
                  static_cast<unsigned long long>(s.lost), static_cast<unsigned long long>(s.corrupt_dropped),
                  static_cast<unsigned long long>(s.corrupt_delivered),
                  static_cast<unsigned long long>(s.base_station_drops));
    os << line;
  }
}

}  // namespace sslnet
