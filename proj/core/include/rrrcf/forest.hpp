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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rrrcf/point.hpp"
#include "rrrcf/tree.hpp"

namespace rrrcf {

enum class Aggregation { kMean, kMedian };

struct ForestConfig {
  std::size_t num_trees = 100;
  std::uint64_t master_seed = 0;
  // 0 means "take it from the points".
  std::size_t dim = 0;
  Aggregation aggregation = Aggregation::kMean;
  // When non-zero, each tree is built on its own seeded sample of this many
  // points (without replacement). Trees then hold different point sets.
  std::size_t subsample_size = 0;
};

// Seed of tree `index` in a forest with the given master seed.
std::uint64_t tree_seed(std::uint64_t master_seed, std::size_t index) noexcept;

// Seed of the engine tree `index` uses for the `nonce`-th detection probe.
std::uint64_t probe_seed(std::uint64_t master_seed, std::size_t index, std::uint64_t nonce) noexcept;

// Model complexity of one tree at each stage of an insert/delete probe.
struct ProbeRecord {
  std::uint64_t mc_before = 0;
  std::uint64_t mc_inserted = 0;
  std::uint64_t mc_deleted = 0;
};

class Forest {
 public:
  // Builds config.num_trees trees, tree t seeded with
  // tree_seed(config.master_seed, t). Throws ConfigError for
  // num_trees == 0 and propagates point validation errors.
  static Forest create(std::span<const Point> points, ForestConfig config);

  // Wraps existing trees, e.g. after loading an archive.
  static Forest from_trees(std::vector<Tree> trees, ForestConfig config);

  const ForestConfig& config() const noexcept { return config_; }
  std::size_t dim() const noexcept { return config_.dim; }
  std::size_t num_trees() const noexcept { return trees_.size(); }
  std::span<const Tree> trees() const noexcept { return trees_; }
  const Tree& tree(std::size_t index) const { return trees_.at(index); }

  // Distinct points held by tree 0.
  std::size_t size() const noexcept { return trees_.front().size(); }
  bool contains(PointView point) const;

  // Applies the configured aggregation over per-tree values.
  double aggregate(std::span<const double> per_tree) const;

  // Aggregate of each tree's displacement_on_insert. Every tree is rolled
  // back; only generator states advance.
  double displacement(PointView point);

  // Aggregate of each tree's displacement_of_member.
  double member_displacement(PointView point) const;

  // Insert into (delete from) every tree or none. Validation happens before
  // any tree is touched; if a tree still fails, trees already mutated are
  // rolled back before the error propagates.
  std::vector<InsertReceipt> insert_into_all(PointView point);
  std::vector<DeleteReceipt> delete_from_all(PointView point);

  // Inserts then deletes `point` in every tree using per-call engines
  // seeded by probe_seed(master_seed, t, nonce), recording model complexity
  // at each stage. The forest is structurally unchanged afterwards and the
  // trees' own generators are not consumed.
  std::vector<ProbeRecord> probe(PointView point, std::uint64_t nonce);

  friend bool operator==(const Forest& a, const Forest& b);

 private:
  Forest(std::vector<Tree> trees, ForestConfig config);
  void check_point(PointView point) const;

  std::vector<Tree> trees_;
  ForestConfig config_;
};

inline Forest create_forest(std::span<const Point> points, const ForestConfig& config) {
  return Forest::create(points, config);
}

}  // namespace rrrcf
