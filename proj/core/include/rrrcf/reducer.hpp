/*
 * Copyright 2026 The rrrcf Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Offline reduction: build a forest on a random initial subset, then sweep
// the remaining points once, keeping only those whose insertion raises the
// model complexity at least to a rolling threshold. The kept ("featured")
// points outline the training distribution; the largest displacement seen
// among them becomes the detection threshold.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rrrcf/forest.hpp"
#include "rrrcf/point.hpp"

namespace rrrcf {

struct ReductionConfig {
  std::size_t z_size = 1000;
  std::size_t num_trees = 100;
  std::uint64_t master_seed = 0;
  // Accepted points between recomputations of the rolling mean.
  std::size_t threshold_refresh_interval = 1;
  // Reject zero-displacement (exact duplicate) points even when the rolling
  // threshold is 0.
  bool duplicate_guard = true;
  // Sweep the non-initial points in a seeded random order instead of input order.
  bool shuffle_sweep = false;
  Aggregation aggregation = Aggregation::kMean;
};

struct DispLogEntry {
  std::size_t point_id = 0;  // index into the input data
  double displacement = 0.0;
  bool accepted = false;
  bool initial_subset = false;
  // Rolling threshold the point was compared against; empty for initial
  // subset members, which are accepted unconditionally.
  std::optional<double> threshold;
};

struct ReductionStats {
  std::size_t total = 0;
  std::size_t featured = 0;
  std::size_t rejected = 0;
  double reduction_percentage = 0.0;
};

struct ReductionResult {
  Forest forest;
  std::vector<Point> featured;
  std::vector<std::size_t> featured_ids;
  double detection_threshold = 0.0;
  // Rolling threshold after the last refresh.
  double final_rolling_threshold = 0.0;
  std::vector<DispLogEntry> disp_log;
  ReductionStats stats;
};

// Mean of the logged displacements. Throws ConfigError on an empty log.
double rolling_threshold_update(std::span<const double> log);

// Tracks the accepted-displacement log and refreshes the mean threshold
// every `interval` acceptances.
class RollingThreshold {
 public:
  RollingThreshold(std::span<const double> initial, std::size_t interval);

  double value() const noexcept { return value_; }
  double max() const noexcept { return max_; }
  std::size_t count() const noexcept { return count_; }

  // Records an accepted displacement; returns true if the threshold was
  // recomputed.
  bool record(double displacement);

 private:
  std::size_t interval_;
  std::size_t since_refresh_ = 0;
  std::size_t count_ = 0;
  double sum_ = 0.0;
  double max_ = 0.0;
  double value_ = 0.0;
};

// Throws ConfigError when the configuration is out of range or
// z_size > data.size(); propagates point validation errors.
ReductionResult reduce(std::span<const Point> data, const ReductionConfig& config);

}  // namespace rrrcf
