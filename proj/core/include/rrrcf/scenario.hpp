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

// Synthetic experiment generators.
//
// braking3d: a car detects an obstacle and brakes toward a stop a few
//   meters short of it. Each frame is the state tuple {d, v, mu}: distance
//   to the obstacle (m), speed (mph) and road friction. Training rollouts
//   start at a speed drawn uniformly from [speed_min, speed_max]. Streams:
//   "rollout1" (same setting as training), "rollout2" (obstacle walking
//   toward the car, so the state drifts off the training manifold) and
//   "rollout3" (initial speed ood_speed, outside the training range).
// cluster_outlier: a uniform cluster in the unit box plus a "probes" stream
//   of in-distribution points followed by far outliers.
// stream_mix: the same cluster, and a "mix" stream of in-distribution
//   frames with OOD bursts planted at the given positions.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rrrcf/dataset.hpp"

namespace rrrcf {

enum class ScenarioKind { kBraking3d, kClusterOutlier, kStreamMix };

ScenarioKind parse_scenario_kind(std::string_view name);
std::string_view scenario_kind_name(ScenarioKind kind) noexcept;

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kClusterOutlier;
  std::uint64_t seed = 0;

  // braking3d
  std::size_t train_points = 50000;
  double speed_min = 40.0;  // mph
  double speed_max = 70.0;
  double ood_speed = 75.0;
  double obstacle_distance = 100.0;  // m
  double stop_margin = 7.5;          // target stopping distance short of the obstacle
  double friction = 0.7;
  double walker_speed_min = 0.1;  // m/s
  double walker_speed_max = 2.0;
  double time_step = 0.1;  // s

  // cluster_outlier, stream_mix
  std::size_t dim = 3;
  std::size_t cluster_points = 500;
  std::size_t in_probes = 100;
  std::size_t outlier_count = 10;
  // Outlier distance from the cluster center in units of the box diagonal.
  double outlier_magnitude = 50.0;

  // stream_mix
  std::size_t stream_length = 200;
  std::vector<std::size_t> burst_starts{125};
  std::size_t burst_length = 5;
};

struct LabeledStream {
  std::string name;
  Dataset data;
  std::vector<std::size_t> ood_indices;  // ascending
};

struct Scenario {
  Dataset train;
  std::vector<LabeledStream> streams;
  // braking3d: initial speed of every training rollout, then of rollouts 1-3.
  std::vector<double> train_initial_speeds;
  std::vector<double> stream_initial_speeds;

  const LabeledStream& stream(std::string_view name) const;
};

// Throws ConfigError for parameters outside their ranges.
void validate_scenario(const ScenarioSpec& spec);
Scenario generate_scenario(const ScenarioSpec& spec);

}  // namespace rrrcf
