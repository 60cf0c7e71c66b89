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

// Test-only oracles. Everything here walks the public node API directly and
// never uses the tree's maintained counters or closed forms.

#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <variant>
#include <vector>

#include "rrrcf/tree.hpp"

namespace rrrcf::testing {

// Sum of distinct-leaf depths by full traversal.
inline std::uint64_t mc_by_traversal(const Tree& tree) {
  if (tree.empty()) return 0;
  std::uint64_t total = 0;
  std::vector<std::pair<NodeId, std::uint64_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [id, depth] = stack.back();
    stack.pop_back();
    const Node& n = tree.node(id);
    if (n.is_leaf()) {
      total += depth;
    } else {
      stack.emplace_back(n.left(), depth + 1);
      stack.emplace_back(n.right(), depth + 1);
    }
  }
  return total;
}

inline std::size_t leaves_below(const Tree& tree, NodeId id) {
  std::size_t count = 0;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const Node& n = tree.node(stack.back());
    stack.pop_back();
    if (n.is_leaf()) {
      ++count;
    } else {
      stack.push_back(n.left());
      stack.push_back(n.right());
    }
  }
  return count;
}

inline std::size_t depth_by_walk(const Tree& tree, NodeId id) {
  std::size_t d = 0;
  while (tree.node(id).parent() != kNoNode) {
    id = tree.node(id).parent();
    ++d;
  }
  return d;
}

// All leaf points of the subtree, collected by traversal.
inline std::vector<Point> leaf_points(const Tree& tree, NodeId id) {
  std::vector<Point> out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const Node& n = tree.node(stack.back());
    stack.pop_back();
    if (n.is_leaf()) {
      out.emplace_back(n.point().begin(), n.point().end());
    } else {
      stack.push_back(n.left());
      stack.push_back(n.right());
    }
  }
  return out;
}

// Partition soundness and box tightness against the leaves themselves.
inline bool partition_and_boxes_sound(const Tree& tree) {
  if (tree.empty()) return true;
  std::vector<NodeId> stack{tree.root()};
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    const Node& n = tree.node(id);
    const auto pts = leaf_points(tree, id);
    for (std::size_t i = 0; i < tree.dim(); ++i) {
      double lo = pts[0][i], hi = pts[0][i];
      for (const Point& p : pts) {
        lo = std::min(lo, p[i]);
        hi = std::max(hi, p[i]);
      }
      if (n.box_min()[i] != lo || n.box_max()[i] != hi) return false;
    }
    if (n.is_leaf()) continue;
    for (const Point& p : leaf_points(tree, n.left())) {
      if (!(p[n.cut_dim()] <= n.cut_value())) return false;
    }
    for (const Point& p : leaf_points(tree, n.right())) {
      if (!(p[n.cut_dim()] > n.cut_value())) return false;
    }
    stack.push_back(n.left());
    stack.push_back(n.right());
  }
  return true;
}

// Hand-built 1-D shapes: a leaf holds a value, a split holds two subtrees
// whose values are all ordered left < right.
struct Shape {
  std::variant<double, std::pair<std::unique_ptr<Shape>, std::unique_ptr<Shape>>> v;
};

inline Shape leaf(double x) { return Shape{x}; }
inline Shape split(Shape l, Shape r) {
  return Shape{std::make_pair(std::make_unique<Shape>(std::move(l)), std::make_unique<Shape>(std::move(r)))};
}

inline std::pair<double, double> shape_range(const Shape& s) {
  if (auto* x = std::get_if<double>(&s.v)) return {*x, *x};
  const auto& kids = std::get<1>(s.v);
  return {shape_range(*kids.first).first, shape_range(*kids.second).second};
}

inline void shape_records(const Shape& s, std::vector<NodeRecord>& out) {
  if (auto* x = std::get_if<double>(&s.v)) {
    NodeRecord rec;
    rec.leaf = true;
    rec.point = {*x};
    rec.multiplicity = 1;
    out.push_back(rec);
    return;
  }
  const auto& kids = std::get<1>(s.v);
  const auto [lo, hi] = shape_range(s);
  NodeRecord rec;
  rec.cut_dim = 0;
  rec.cut_value = shape_range(*kids.first).second;
  rec.box_min = {lo};
  rec.box_max = {hi};
  out.push_back(rec);
  shape_records(*kids.first, out);
  shape_records(*kids.second, out);
}

inline Tree build_shape(const Shape& s) {
  std::vector<NodeRecord> recs;
  shape_records(s, recs);
  return Tree::from_preorder(1, recs);
}

// Random point sets: continuous coordinates, or a small integer grid that
// produces duplicates, ties and degenerate dimensions.
inline std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, std::size_t dim, bool grid) {
  std::uniform_real_distribution<double> real(-10.0, 10.0);
  std::uniform_int_distribution<int> cell(0, 4);
  std::vector<Point> pts(n, Point(dim));
  for (Point& p : pts) {
    for (double& c : p) c = grid ? static_cast<double>(cell(rng)) : real(rng);
  }
  return pts;
}

}  // namespace rrrcf::testing
