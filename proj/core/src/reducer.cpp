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

#include "rrrcf/reducer.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "rrrcf/errors.hpp"

namespace rrrcf {

namespace {
constexpr std::uint64_t kSubsetStream = 0xfeed5eedULL;
constexpr std::uint64_t kShuffleStream = 0x5bf1e5eedULL;
}  // namespace

double rolling_threshold_update(std::span<const double> log) {
  if (log.empty()) throw ConfigError("cannot take the mean of an empty displacement log");
  double sum = 0.0;
  for (double v : log) sum += v;
  return sum / static_cast<double>(log.size());
}

RollingThreshold::RollingThreshold(std::span<const double> initial, std::size_t interval)
    : interval_(interval), max_(-std::numeric_limits<double>::infinity()) {
  if (interval_ == 0) throw ConfigError("threshold_refresh_interval must be >= 1");
  for (double v : initial) {
    sum_ += v;
    max_ = std::max(max_, v);
    ++count_;
  }
  value_ = rolling_threshold_update(initial);
}

bool RollingThreshold::record(double displacement) {
  sum_ += displacement;
  max_ = std::max(max_, displacement);
  ++count_;
  if (++since_refresh_ < interval_) return false;
  since_refresh_ = 0;
  value_ = sum_ / static_cast<double>(count_);
  return true;
}

ReductionResult reduce(std::span<const Point> data, const ReductionConfig& config) {
  if (config.z_size == 0) throw ConfigError("z_size must be >= 1");
  if (config.z_size > data.size()) {
    throw ConfigError("z_size " + std::to_string(config.z_size) + " exceeds dataset size " +
                      std::to_string(data.size()));
  }
  if (config.num_trees == 0) throw ConfigError("num_trees must be >= 1");
  if (config.threshold_refresh_interval == 0) throw ConfigError("threshold_refresh_interval must be >= 1");

  const std::size_t dim = data.front().size();
  for (std::size_t i = 0; i < data.size(); ++i) validate_point(data[i], dim, "row " + std::to_string(i));

  // Initial subset: partial Fisher-Yates, uniform without replacement.
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng pick(derive_seed(config.master_seed, kSubsetStream));
  for (std::size_t k = 0; k < config.z_size; ++k) {
    const auto j = k + static_cast<std::size_t>(uniform_index(pick, data.size() - k));
    std::swap(order[k], order[j]);
  }
  std::vector<std::size_t> subset(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(config.z_size));
  std::sort(subset.begin(), subset.end());

  std::vector<bool> in_subset(data.size(), false);
  std::vector<Point> subset_points;
  subset_points.reserve(subset.size());
  for (std::size_t id : subset) {
    in_subset[id] = true;
    subset_points.push_back(data[id]);
  }

  ForestConfig fc;
  fc.num_trees = config.num_trees;
  fc.master_seed = config.master_seed;
  fc.dim = dim;
  fc.aggregation = config.aggregation;

  ReductionResult result{Forest::create(subset_points, fc), {}, {}, 0.0, 0.0, {}, {}};
  Forest& forest = result.forest;

  std::vector<double> subset_disp;
  subset_disp.reserve(subset.size());
  for (std::size_t id : subset) {
    const double disp = forest.member_displacement(data[id]);
    subset_disp.push_back(disp);
    result.disp_log.push_back({id, disp, true, true, std::nullopt});
    result.featured.push_back(data[id]);
    result.featured_ids.push_back(id);
  }
  RollingThreshold rolling(subset_disp, config.threshold_refresh_interval);

  std::vector<std::size_t> sweep;
  sweep.reserve(data.size() - subset.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!in_subset[i]) sweep.push_back(i);
  }
  if (config.shuffle_sweep) {
    Rng shuffle(derive_seed(config.master_seed, kShuffleStream));
    for (std::size_t k = sweep.size(); k > 1; --k) {
      std::swap(sweep[k - 1], sweep[static_cast<std::size_t>(uniform_index(shuffle, k))]);
    }
  }

  std::vector<double> per_tree(forest.num_trees());
  for (std::size_t id : sweep) {
    const Point& x = data[id];
    const auto receipts = forest.insert_into_all(x);
    for (std::size_t t = 0; t < receipts.size(); ++t) {
      per_tree[t] = static_cast<double>(receipts[t].displacement);
    }
    const double disp = forest.aggregate(per_tree);
    const double threshold = rolling.value();
    const bool accept = disp >= threshold && !(config.duplicate_guard && disp == 0.0);
    result.disp_log.push_back({id, disp, accept, false, threshold});
    if (accept) {
      rolling.record(disp);
      result.featured.push_back(x);
      result.featured_ids.push_back(id);
    } else {
      forest.delete_from_all(x);
    }
  }

  result.detection_threshold = rolling.max();
  result.final_rolling_threshold = rolling.value();
  result.stats.total = data.size();
  result.stats.featured = result.featured.size();
  result.stats.rejected = data.size() - result.featured.size();
  result.stats.reduction_percentage =
      100.0 * (1.0 - static_cast<double>(result.featured.size()) / static_cast<double>(data.size()));
  return result;
}

}  // namespace rrrcf
