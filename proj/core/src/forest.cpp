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

#include "rrrcf/forest.hpp"

#include <algorithm>
#include <numeric>

#include "rrrcf/errors.hpp"

namespace rrrcf {

namespace {
constexpr std::uint64_t kSubsampleSalt = 0x5ab5a3b1e0000000ULL;
constexpr std::uint64_t kProbeSalt = 0x9b0be5eed0000000ULL;
}  // namespace

std::uint64_t tree_seed(std::uint64_t master_seed, std::size_t index) noexcept {
  return derive_seed(master_seed, index);
}

std::uint64_t probe_seed(std::uint64_t master_seed, std::size_t index, std::uint64_t nonce) noexcept {
  return derive_seed(derive_seed(master_seed ^ kProbeSalt, index), nonce);
}

Forest::Forest(std::vector<Tree> trees, ForestConfig config)
    : trees_(std::move(trees)), config_(config) {}

Forest Forest::create(std::span<const Point> points, ForestConfig config) {
  if (config.num_trees == 0) throw ConfigError("num_trees must be >= 1");
  if (config.dim == 0) {
    if (points.empty()) throw ConfigError("forest dimension unknown: no points and dim = 0");
    config.dim = points.front().size();
  }
  std::vector<Tree> trees;
  trees.reserve(config.num_trees);
  const bool subsample = config.subsample_size != 0 && config.subsample_size < points.size();
  std::vector<std::size_t> order;
  std::vector<Point> sample;
  for (std::size_t t = 0; t < config.num_trees; ++t) {
    if (!subsample) {
      trees.push_back(Tree::create(points, tree_seed(config.master_seed, t), config.dim));
      continue;
    }
    order.resize(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng pick(derive_seed(config.master_seed ^ kSubsampleSalt, t));
    sample.clear();
    for (std::size_t k = 0; k < config.subsample_size; ++k) {
      const auto j = k + static_cast<std::size_t>(uniform_index(pick, order.size() - k));
      std::swap(order[k], order[j]);
      sample.push_back(points[order[k]]);
    }
    trees.push_back(Tree::create(sample, tree_seed(config.master_seed, t), config.dim));
  }
  return Forest(std::move(trees), config);
}

Forest Forest::from_trees(std::vector<Tree> trees, ForestConfig config) {
  if (trees.empty()) throw ConfigError("a forest needs at least one tree");
  config.num_trees = trees.size();
  for (const Tree& t : trees) {
    if (t.dim() != trees.front().dim()) throw DimensionError("trees disagree on dimension");
  }
  if (config.dim == 0) config.dim = trees.front().dim();
  if (trees.front().dim() != 0 && trees.front().dim() != config.dim) {
    throw DimensionError("trees disagree with the configured dimension");
  }
  return Forest(std::move(trees), config);
}

void Forest::check_point(PointView point) const { validate_point(point, config_.dim); }

bool Forest::contains(PointView point) const {
  check_point(point);
  return std::all_of(trees_.begin(), trees_.end(), [&](const Tree& t) { return t.contains(point); });
}

double Forest::aggregate(std::span<const double> per_tree) const {
  if (per_tree.empty()) return 0.0;
  if (config_.aggregation == Aggregation::kMedian) {
    std::vector<double> v(per_tree.begin(), per_tree.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double upper = v[mid];
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
  }
  double sum = 0.0;
  for (double x : per_tree) sum += x;
  return sum / static_cast<double>(per_tree.size());
}

double Forest::displacement(PointView point) {
  check_point(point);
  std::vector<double> values;
  values.reserve(trees_.size());
  for (Tree& t : trees_) values.push_back(t.displacement_on_insert(point));
  return aggregate(values);
}

double Forest::member_displacement(PointView point) const {
  check_point(point);
  std::vector<double> values;
  values.reserve(trees_.size());
  for (const Tree& t : trees_) values.push_back(t.displacement_of_member(point));
  return aggregate(values);
}

std::vector<InsertReceipt> Forest::insert_into_all(PointView point) {
  check_point(point);
  std::vector<InsertReceipt> receipts;
  receipts.reserve(trees_.size());
  try {
    for (Tree& t : trees_) receipts.push_back(t.insert_point(point));
  } catch (...) {
    for (std::size_t i = 0; i < receipts.size(); ++i) trees_[i].delete_point(point);
    throw;
  }
  return receipts;
}

std::vector<DeleteReceipt> Forest::delete_from_all(PointView point) {
  check_point(point);
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    if (!trees_[t].contains(point)) {
      throw PointNotFoundError("point " + format_point(point) + " is not in tree " + std::to_string(t));
    }
  }
  // Past the membership check a per-tree delete does not throw.
  std::vector<DeleteReceipt> receipts;
  receipts.reserve(trees_.size());
  for (Tree& t : trees_) receipts.push_back(t.delete_point(point));
  return receipts;
}

std::vector<ProbeRecord> Forest::probe(PointView point, std::uint64_t nonce) {
  check_point(point);
  std::vector<ProbeRecord> records;
  records.reserve(trees_.size());
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    Tree& tree = trees_[t];
    Rng rng(probe_seed(config_.master_seed, t, nonce));
    ProbeRecord rec;
    rec.mc_before = tree.model_complexity();
    tree.insert_point(point, rng);
    rec.mc_inserted = tree.model_complexity();
    tree.delete_point(point);
    rec.mc_deleted = tree.model_complexity();
    records.push_back(rec);
  }
  return records;
}

bool operator==(const Forest& a, const Forest& b) {
  const ForestConfig& ca = a.config_;
  const ForestConfig& cb = b.config_;
  if (ca.num_trees != cb.num_trees || ca.master_seed != cb.master_seed || ca.dim != cb.dim ||
      ca.aggregation != cb.aggregation || ca.subsample_size != cb.subsample_size) {
    return false;
  }
  return a.trees_ == b.trees_;
}

}  // namespace rrrcf
