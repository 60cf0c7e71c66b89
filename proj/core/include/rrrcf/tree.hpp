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

// Robust Random Cut Tree with dynamic insertion and deletion.
//
// Cuts pick dimension i with probability proportional to the side length
// r_i of the node's bounding box and a cut value uniform on [min_i, max_i).
// Points with coordinate <= cut go left, the rest go right. Exact duplicate
// points share one leaf that carries a multiplicity.
//
// Model complexity is the sum of depths of the distinct leaves (root depth
// 0). The tree keeps it up to date on every mutation, so inserting or
// deleting a point reports its displacement (the change in model
// complexity) without a traversal.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rrrcf/point.hpp"
#include "rrrcf/random.hpp"

namespace rrrcf {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

class Node {
 public:
  bool is_leaf() const noexcept { return left_ == kNoNode; }

  NodeId parent() const noexcept { return parent_; }
  NodeId left() const noexcept { return left_; }
  NodeId right() const noexcept { return right_; }

  // Internal nodes only.
  std::uint32_t cut_dim() const noexcept { return cut_dim_; }
  double cut_value() const noexcept { return cut_value_; }

  // Number of distinct leaves in the subtree; 1 for a leaf.
  std::size_t leaf_count() const noexcept { return leaf_count_; }

  // Leaves only.
  std::uint64_t multiplicity() const noexcept { return multiplicity_; }
  PointView point() const noexcept { return lo_; }

  // A leaf's box is degenerate at its point.
  PointView box_min() const noexcept { return lo_; }
  PointView box_max() const noexcept { return is_leaf() ? PointView(lo_) : PointView(hi_); }

 private:
  friend class Tree;

  NodeId parent_ = kNoNode;
  NodeId left_ = kNoNode;
  NodeId right_ = kNoNode;
  std::uint32_t cut_dim_ = 0;
  double cut_value_ = 0.0;
  std::size_t leaf_count_ = 0;
  std::uint64_t multiplicity_ = 0;
  std::vector<double> lo_;  // leaf point, or box min
  std::vector<double> hi_;  // box max, unused for leaves
};

struct InsertReceipt {
  NodeId leaf = kNoNode;
  std::size_t depth = 0;                 // depth of the (possibly existing) leaf
  std::size_t displaced_leaf_count = 0;  // distinct leaves pushed one level down
  std::uint64_t displacement = 0;        // MC(after) - MC(before)
  bool duplicate = false;                // multiplicity incremented, no new leaf
};

struct DeleteReceipt {
  std::uint64_t displacement = 0;  // MC(before) - MC(after)
  bool removed = false;            // leaf spliced out (false: multiplicity decremented)
};

// One node of a pre-order dump. Internal records carry the cut and the box,
// leaf records the point and its multiplicity.
struct NodeRecord {
  bool leaf = false;
  std::uint32_t cut_dim = 0;
  double cut_value = 0.0;
  Point box_min;
  Point box_max;
  Point point;
  std::uint64_t multiplicity = 0;
};

class Tree {
 public:
  // An empty tree. `dim == 0` leaves the dimension unbound until the first
  // insertion.
  explicit Tree(std::size_t dim = 0, std::uint64_t seed = 0);

  // Builds a tree over `points` (duplicates allowed). Throws DimensionError
  // on mixed dimensions or when a non-zero `dim` disagrees with the points,
  // InvalidPointError on non-finite coordinates.
  static Tree create(std::span<const Point> points, std::uint64_t seed, std::size_t dim = 0);

  // Rebuilds a tree from a pre-order dump, recomputing counts and checking
  // every structural invariant. Throws FormatError on inconsistent input.
  static Tree from_preorder(std::size_t dim, std::span<const NodeRecord> records);

  std::size_t dim() const noexcept { return dim_; }
  bool empty() const noexcept { return root_ == kNoNode; }
  NodeId root() const noexcept { return root_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }

  // Distinct points held.
  std::size_t size() const noexcept { return index_.size(); }
  // Total points including multiplicities.
  std::uint64_t total_points() const noexcept { return total_points_; }

  std::uint64_t model_complexity() const noexcept { return model_complexity_; }

  std::size_t depth(NodeId id) const;

  // Expected O(1) exact-match lookup.
  std::optional<NodeId> find_leaf(PointView point) const;
  bool contains(PointView point) const { return find_leaf(point).has_value(); }

  // Cut-regeneration insertion. The overload without an engine draws from
  // the tree's own generator. On error the tree is unchanged.
  InsertReceipt insert_point(PointView point);
  InsertReceipt insert_point(PointView point, Rng& rng);

  // Removes one copy of `point`. Throws PointNotFoundError if absent.
  DeleteReceipt delete_point(PointView point);

  // MC(T + x) - MC(T) for one random insertion, rolled back afterwards. The
  // structure is restored exactly; only the generator state advances.
  double displacement_on_insert(PointView point);
  double displacement_on_insert(PointView point, Rng& rng);

  // MC(T) - MC(T - x) for a stored point: its depth plus the distinct-leaf
  // count of its sibling. Throws PointNotFoundError if absent.
  double displacement_of_member(PointView point) const;

  std::vector<NodeRecord> preorder() const;

  std::string rng_state() const;
  void set_rng_state(const std::string& state);
  Rng& rng() noexcept { return rng_; }

  // Throws Error naming the first violated structural invariant.
  void check_invariants() const;

  // Structural equality: cuts, boxes, counts and leaves compared bit for bit.
  // Generator state and node ids are not compared.
  friend bool operator==(const Tree& a, const Tree& b);

 private:
  NodeId allocate();
  void release(NodeId id);
  NodeId make_leaf(PointView point, std::uint64_t multiplicity);
  void bind_dim(PointView point);
  void replace_child(NodeId parent, NodeId old_child, NodeId new_child);

  std::size_t dim_ = 0;
  NodeId root_ = kNoNode;
  std::vector<Node> nodes_;
  std::vector<NodeId> free_;
  std::unordered_map<Point, NodeId, PointHash, PointEqual> index_;
  std::uint64_t model_complexity_ = 0;
  std::uint64_t total_points_ = 0;
  Rng rng_;
  // Per-insert working buffers for the enlarged box.
  std::vector<double> scratch_lo_;
  std::vector<double> scratch_hi_;
};

inline Tree create_tree(std::span<const Point> points, std::uint64_t seed, std::size_t dim = 0) {
  return Tree::create(points, seed, dim);
}

}  // namespace rrrcf
