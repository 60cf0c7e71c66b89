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

#include "rrrcf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rrrcf/errors.hpp"
#include "rrrcf/random.hpp"

namespace rrrcf {

namespace {

constexpr double kMphToMs = 0.44704;
constexpr double kGravity = 9.81;
constexpr std::size_t kMaxFrames = 100000;

struct Rollout {
  std::vector<Point> frames;
  std::vector<std::size_t> off_manifold;  // frames needing more braking than any training rollout
};

double required_decel(double v_ms, double gap) { return v_ms * v_ms / (2.0 * gap); }

// Constant-deceleration kinematics are integrated exactly, so against a
// stationary obstacle the required deceleration v^2 / 2(d - margin) stays at
// its initial value for the whole rollout.
Rollout simulate(const ScenarioSpec& spec, double v0_mph, double walker_ms) {
  Rollout out;
  const double a_cap = spec.friction * kGravity;
  const double v_max = spec.speed_max * kMphToMs;
  const double a_train_max = required_decel(v_max, spec.obstacle_distance - spec.stop_margin);
  double d = spec.obstacle_distance;
  double v = v0_mph * kMphToMs;
  for (std::size_t frame = 0; frame < kMaxFrames; ++frame) {
    const double gap = d - spec.stop_margin;
    const double a_req = gap > 1e-9 ? required_decel(v, gap) : a_cap;
    if (v > 0.0 && (gap <= 1e-9 || a_req > a_train_max * (1.0 + 1e-9))) out.off_manifold.push_back(frame);
    out.frames.push_back({d, v / kMphToMs, spec.friction});
    if (v <= 0.0 || d <= 0.0) break;

    const double a = std::min(a_req, a_cap);
    double v_next = v - a * spec.time_step;
    double dt = spec.time_step;
    if (v_next <= 0.0) {
      dt = v / a;
      v_next = 0.0;
    }
    d -= 0.5 * (v + v_next) * dt + walker_ms * dt;
    v = v_next;
  }
  return out;
}

Point uniform_in_box(Rng& rng, std::size_t dim) {
  Point p(dim);
  for (double& c : p) c = unit_uniform(rng);
  return p;
}

Point random_direction(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  Point u(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& c : u) {
      c = normal(rng);
      norm += c * c;
    }
  } while (norm < 1e-12);
  norm = std::sqrt(norm);
  for (double& c : u) c /= norm;
  return u;
}

// Center of the unit box pushed `magnitude` box diagonals along `direction`.
Point far_point(std::span<const double> direction, double magnitude) {
  const double reach = magnitude * std::sqrt(static_cast<double>(direction.size()));
  Point p(direction.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.5 + reach * direction[i];
  return p;
}

Dataset make_dataset(std::vector<Point> points, std::string source, std::size_t dim) {
  Dataset ds;
  ds.points = std::move(points);
  ds.source = std::move(source);
  ds.dim = dim;
  return ds;
}

Scenario braking3d(const ScenarioSpec& spec) {
  Scenario sc;
  Rng rng(derive_seed(spec.seed, 1));
  auto draw_speed = [&] { return spec.speed_min + (spec.speed_max - spec.speed_min) * unit_uniform(rng); };

  std::vector<Point> train;
  train.reserve(spec.train_points);
  while (train.size() < spec.train_points) {
    const double v0 = draw_speed();
    sc.train_initial_speeds.push_back(v0);
    Rollout r = simulate(spec, v0, 0.0);
    for (Point& f : r.frames) {
      if (train.size() == spec.train_points) break;
      train.push_back(std::move(f));
    }
  }
  sc.train = make_dataset(std::move(train), "braking3d:train", 3);

  const double v1 = draw_speed();
  const double v2 = draw_speed();
  const double walker =
      spec.walker_speed_min + (spec.walker_speed_max - spec.walker_speed_min) * unit_uniform(rng);
  sc.stream_initial_speeds = {v1, v2, spec.ood_speed};

  Rollout r1 = simulate(spec, v1, 0.0);
  Rollout r2 = simulate(spec, v2, walker);
  Rollout r3 = simulate(spec, spec.ood_speed, 0.0);
  // Rollout 1 shares the training setting, so nothing in it is labeled.
  sc.streams.push_back({"rollout1", make_dataset(std::move(r1.frames), "braking3d:rollout1", 3), {}});
  sc.streams.push_back({"rollout2", make_dataset(std::move(r2.frames), "braking3d:rollout2", 3),
                        std::move(r2.off_manifold)});
  std::vector<std::size_t> all(r3.frames.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  sc.streams.push_back({"rollout3", make_dataset(std::move(r3.frames), "braking3d:rollout3", 3), std::move(all)});
  return sc;
}

Scenario cluster_scenario(const ScenarioSpec& spec) {
  Scenario sc;
  Rng rng(derive_seed(spec.seed, 2));
  std::vector<Point> train;
  train.reserve(spec.cluster_points);
  for (std::size_t i = 0; i < spec.cluster_points; ++i) train.push_back(uniform_in_box(rng, spec.dim));
  sc.train = make_dataset(std::move(train), std::string(scenario_kind_name(spec.kind)) + ":train", spec.dim);

  if (spec.kind == ScenarioKind::kClusterOutlier) {
    std::vector<Point> probes;
    std::vector<std::size_t> labels;
    for (std::size_t i = 0; i < spec.in_probes; ++i) probes.push_back(uniform_in_box(rng, spec.dim));
    for (std::size_t i = 0; i < spec.outlier_count; ++i) {
      labels.push_back(probes.size());
      probes.push_back(far_point(random_direction(rng, spec.dim), spec.outlier_magnitude));
    }
    sc.streams.push_back({"probes", make_dataset(std::move(probes), "cluster_outlier:probes", spec.dim),
                          std::move(labels)});
    return sc;
  }

  std::vector<Point> mix;
  mix.reserve(spec.stream_length);
  for (std::size_t i = 0; i < spec.stream_length; ++i) mix.push_back(uniform_in_box(rng, spec.dim));
  std::vector<std::size_t> labels;
  for (std::size_t start : spec.burst_starts) {
    const Point center = far_point(random_direction(rng, spec.dim), spec.outlier_magnitude);
    for (std::size_t k = start; k < start + spec.burst_length; ++k) {
      Point p = center;
      for (double& c : p) c += unit_uniform(rng) - 0.5;
      mix[k] = std::move(p);
      labels.push_back(k);
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  sc.streams.push_back({"mix", make_dataset(std::move(mix), "stream_mix:mix", spec.dim), std::move(labels)});
  return sc;
}

}  // namespace

ScenarioKind parse_scenario_kind(std::string_view name) {
  if (name == "braking3d") return ScenarioKind::kBraking3d;
  if (name == "cluster_outlier") return ScenarioKind::kClusterOutlier;
  if (name == "stream_mix") return ScenarioKind::kStreamMix;
  throw ConfigError("unknown scenario kind '" + std::string(name) + "'");
}

std::string_view scenario_kind_name(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::kBraking3d:
      return "braking3d";
    case ScenarioKind::kClusterOutlier:
      return "cluster_outlier";
    case ScenarioKind::kStreamMix:
      return "stream_mix";
  }
  return "unknown";
}

const LabeledStream& Scenario::stream(std::string_view name) const {
  for (const LabeledStream& s : streams) {
    if (s.name == name) return s;
  }
  throw ConfigError("scenario has no stream named '" + std::string(name) + "'");
}

void validate_scenario(const ScenarioSpec& spec) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  switch (spec.kind) {
    case ScenarioKind::kBraking3d:
      require(spec.train_points >= 1, "train_points must be >= 1");
      require(spec.speed_min > 0.0 && spec.speed_min < spec.speed_max, "speed range must satisfy 0 < min < max");
      require(spec.ood_speed > 0.0, "ood_speed must be positive");
      require(spec.stop_margin > 0.0 && spec.obstacle_distance > spec.stop_margin,
              "obstacle_distance must exceed stop_margin > 0");
      require(spec.friction > 0.0, "friction must be positive");
      require(spec.walker_speed_min >= 0.0 && spec.walker_speed_min <= spec.walker_speed_max,
              "walker speed range must satisfy 0 <= min <= max");
      require(spec.time_step > 0.0, "time_step must be positive");
      break;
    case ScenarioKind::kClusterOutlier:
    case ScenarioKind::kStreamMix:
      require(spec.dim >= 1, "dim must be >= 1");
      require(spec.cluster_points >= 1, "cluster_points must be >= 1");
      require(spec.outlier_magnitude > 0.0 && std::isfinite(spec.outlier_magnitude),
              "outlier_magnitude must be positive");
      if (spec.kind == ScenarioKind::kStreamMix) {
        require(spec.burst_length >= 1, "burst_length must be >= 1");
        for (std::size_t s : spec.burst_starts) {
          require(s + spec.burst_length <= spec.stream_length, "burst extends past the end of the stream");
        }
      }
      break;
  }
}

Scenario generate_scenario(const ScenarioSpec& spec) {
  validate_scenario(spec);
  return spec.kind == ScenarioKind::kBraking3d ? braking3d(spec) : cluster_scenario(spec);
}

}  // namespace rrrcf
