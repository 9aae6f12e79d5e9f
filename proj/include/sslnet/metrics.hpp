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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sslnet/sim.hpp"

namespace sslnet {

inline constexpr std::size_t kDefaultWindow = 500;
inline constexpr std::size_t kDefaultWarmup = 20;

class WindowError : public std::runtime_error {
 public:
  WindowError(std::size_t obtained, std::size_t required)
      : std::runtime_error("window unsatisfied: " + std::to_string(obtained) + " arrivals, need at least " +
                           std::to_string(required)),
        obtained_(obtained) {}
  std::size_t obtained() const { return obtained_; }

 private:
  std::size_t obtained_;
};

/// Reception-interval statistics for one robot. Times are microseconds;
/// stddev is the population standard deviation.
struct DeliveryStats {
  int robot_id = 0;
  std::size_t n_intervals = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::uint64_t lost = 0;
  std::uint64_t corrupt_dropped = 0;
  std::uint64_t corrupt_delivered = 0;
  std::uint64_t base_station_drops = 0;
};

/// Drops the first `warmup` arrivals, then takes up to window + 1 arrivals.
/// Throws WindowError with fewer than warmup + 2 arrivals.
DeliveryStats compute_stats(std::span<const SimTime> arrival_log, std::size_t window = kDefaultWindow,
                            std::size_t warmup = kDefaultWarmup);

/// One CSV data row: the stats plus where they came from.
struct StatsRow {
  std::string experiment;
  double param = 0.0;
  std::uint64_t seed = 0;
  DeliveryStats stats;
};

inline constexpr const char* kCsvHeader =
    "experiment,param,robot_id,n_intervals,mean_us,stddev_us,min_us,max_us,lost,corrupt_dropped,"
    "corrupt_delivered,bs_drops,seed";

/// Header plus one line per row, sorted by (param, robot_id, seed). Real
/// fields use two decimals. `comments` are emitted first, each prefixed "# ".
/// Throws std::invalid_argument on an empty row list.
void write_csv(std::ostream& os, std::vector<StatsRow> rows, const std::vector<std::string>& comments = {});
/// Throws std::runtime_error if the file cannot be written.
void write_csv(const std::string& path, std::vector<StatsRow> rows,
               const std::vector<std::string>& comments = {});

/// Fixed-width table for humans.
void print_summary(std::ostream& os, const std::vector<StatsRow>& rows);

}  // namespace sslnet
