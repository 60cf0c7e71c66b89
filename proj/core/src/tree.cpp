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

#include "rrrcf/tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "rrrcf/errors.hpp"

namespace rrrcf {

namespace {

struct Cut {
  std::uint32_t dim = 0;
  double value = 0.0;
};

// Draws dimension i with probability (hi_i - lo_i) / sum(hi - lo) and a value
// uniform on [lo_i, hi_i), using a single uniform draw over the summed
// ranges. Requires at least one positive range.
Cut sample_cut(std::span<const double> lo, std::span<const double> hi, Rng& rng) {
  double total = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) total += hi[i] - lo[i];
  double r = unit_uniform(rng) * total;

  std::size_t last_positive = lo.size();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double width = hi[i] - lo[i];
    if (width <= 0.0) continue;
    last_positive = i;
    if (r < width) {
      double v = lo[i] + r;
      if (v >= hi[i]) v = std::nextafter(hi[i], lo[i]);
      return {static_cast<std::uint32_t>(i), std::max(v, lo[i])};
    }
    r -= width;
  }
  // Rounding pushed r past the last range.
  const std::size_t i = last_positive;
  return {static_cast<std::uint32_t>(i), std::nextafter(hi[i], lo[i])};
}

bool same_bits(double a, double b) noexcept {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool same_bits(PointView a, PointView b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_bits(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace

Tree::Tree(std::size_t dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

NodeId Tree::allocate() {
  if (!free_.empty()) {
    NodeId id = free_.back();
    free_.pop_back();
    return id;
  }
  if (nodes_.size() >= static_cast<std::size_t>(kNoNode)) throw Error("tree node capacity exhausted");
  nodes_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Tree::release(NodeId id) {
  Node& n = nodes_[id];
  // Box buffers keep their capacity for reuse.
  n.parent_ = n.left_ = n.right_ = kNoNode;
  n.cut_dim_ = 0;
  n.cut_value_ = 0.0;
  n.leaf_count_ = 0;
  n.multiplicity_ = 0;
  free_.push_back(id);
}

NodeId Tree::make_leaf(PointView point, std::uint64_t multiplicity) {
  NodeId id = allocate();
  Node& n = nodes_[id];
  n.lo_.assign(point.begin(), point.end());
  n.hi_.clear();
  n.leaf_count_ = 1;
  n.multiplicity_ = multiplicity;
  return id;
}

void Tree::bind_dim(PointView point) {
  if (dim_ == 0) {
    if (point.empty()) throw DimensionError("points must have dimension >= 1");
    dim_ = point.size();
  }
  validate_point(point, dim_);
}

void Tree::replace_child(NodeId parent, NodeId old_child, NodeId new_child) {
  if (parent == kNoNode) {
    root_ = new_child;
  } else if (nodes_[parent].left_ == old_child) {
    nodes_[parent].left_ = new_child;
  } else {
    nodes_[parent].right_ = new_child;
  }
  nodes_[new_child].parent_ = parent;
}

Tree Tree::create(std::span<const Point> points, std::uint64_t seed, std::size_t dim) {
  Tree tree(dim, seed);
  if (points.empty()) return tree;

  // Collapse duplicates, keeping first-occurrence order.
  std::unordered_map<PointView, std::size_t, PointHash, PointEqual> slot;
  std::vector<std::size_t> distinct;
  std::vector<std::uint64_t> mult;
  for (std::size_t i = 0; i < points.size(); ++i) {
    tree.bind_dim(points[i]);
    auto [it, inserted] = slot.try_emplace(PointView(points[i]), distinct.size());
    if (inserted) {
      distinct.push_back(i);
      mult.push_back(1);
    } else {
      ++mult[it->second];
    }
  }
  std::vector<std::uint64_t> mult_of(points.size(), 0);
  for (std::size_t k = 0; k < distinct.size(); ++k) mult_of[distinct[k]] = mult[k];

  const std::size_t d = tree.dim_;
  struct Task {
    std::size_t begin;
    std::size_t end;
    NodeId parent;
    bool right_side;
    std::size_t depth;
  };
  std::vector<Task> stack{{0, distinct.size(), kNoNode, false, 0}};
  std::vector<double> lo(d), hi(d);

  auto attach = [&tree](NodeId child, NodeId parent, bool right_side) {
    tree.nodes_[child].parent_ = parent;
    if (parent == kNoNode) {
      tree.root_ = child;
    } else if (right_side) {
      tree.nodes_[parent].right_ = child;
    } else {
      tree.nodes_[parent].left_ = child;
    }
  };

  while (!stack.empty()) {
    Task task = stack.back();
    stack.pop_back();
    if (task.end - task.begin == 1) {
      const std::size_t src = distinct[task.begin];
      NodeId leaf = tree.make_leaf(points[src], mult_of[src]);
      attach(leaf, task.parent, task.right_side);
      tree.index_.emplace(points[src], leaf);
      tree.model_complexity_ += task.depth;
      tree.total_points_ += mult_of[src];
      continue;
    }

    const Point& first = points[distinct[task.begin]];
    std::copy(first.begin(), first.end(), lo.begin());
    std::copy(first.begin(), first.end(), hi.begin());
    for (std::size_t k = task.begin + 1; k < task.end; ++k) {
      const Point& p = points[distinct[k]];
      for (std::size_t i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    }

    const Cut cut = sample_cut(lo, hi, tree.rng_);
    auto mid = std::partition(distinct.begin() + static_cast<std::ptrdiff_t>(task.begin),
                              distinct.begin() + static_cast<std::ptrdiff_t>(task.end),
                              [&](std::size_t idx) { return points[idx][cut.dim] <= cut.value; });
    const auto split = static_cast<std::size_t>(mid - distinct.begin());

    NodeId id = tree.allocate();
    Node& n = tree.nodes_[id];
    n.cut_dim_ = cut.dim;
    n.cut_value_ = cut.value;
    n.lo_ = lo;
    n.hi_ = hi;
    n.leaf_count_ = task.end - task.begin;
    attach(id, task.parent, task.right_side);

    // Left is popped first so node ids follow pre-order.
    stack.push_back({split, task.end, id, true, task.depth + 1});
    stack.push_back({task.begin, split, id, false, task.depth + 1});
  }
  return tree;
}

std::size_t Tree::depth(NodeId id) const {
  std::size_t d = 0;
  for (NodeId cur = nodes_.at(id).parent_; cur != kNoNode; cur = nodes_[cur].parent_) ++d;
  return d;
}

std::optional<NodeId> Tree::find_leaf(PointView point) const {
  if (dim_ != 0) validate_point(point, dim_);
  auto it = index_.find(point);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

InsertReceipt Tree::insert_point(PointView point) { return insert_point(point, rng_); }

InsertReceipt Tree::insert_point(PointView x, Rng& rng) {
  bind_dim(x);

  if (auto it = index_.find(x); it != index_.end()) {
    Node& leaf = nodes_[it->second];
    ++leaf.multiplicity_;
    ++total_points_;
    return {it->second, depth(it->second), 0, 0, true};
  }

  if (root_ == kNoNode) {
    NodeId leaf = make_leaf(x, 1);
    root_ = leaf;
    index_.emplace(Point(x.begin(), x.end()), leaf);
    ++total_points_;
    return {leaf, 0, 0, 0, false};
  }

  scratch_lo_.resize(dim_);
  scratch_hi_.resize(dim_);
  NodeId cur = root_;
  std::size_t cur_depth = 0;
  Cut cut;
  bool point_left = false;
  for (;;) {
    const Node& n = nodes_[cur];
    const PointView bmin = n.box_min();
    const PointView bmax = n.box_max();
    for (std::size_t i = 0; i < dim_; ++i) {
      scratch_lo_[i] = std::min(bmin[i], x[i]);
      scratch_hi_[i] = std::max(bmax[i], x[i]);
    }
    cut = sample_cut(scratch_lo_, scratch_hi_, rng);
    if (x[cut.dim] <= cut.value && bmin[cut.dim] > cut.value) {
      point_left = true;
      break;
    }
    if (x[cut.dim] > cut.value && bmax[cut.dim] <= cut.value) {
      point_left = false;
      break;
    }
    // A cut over a leaf and a distinct point always separates them.
    if (n.is_leaf()) throw Error("insertion failed to separate a distinct point");
    cur = x[n.cut_dim_] <= n.cut_value_ ? n.left_ : n.right_;
    ++cur_depth;
  }

  const NodeId leaf = make_leaf(x, 1);
  const NodeId inner = allocate();
  const NodeId parent = nodes_[cur].parent_;
  const std::size_t displaced = nodes_[cur].leaf_count_;
  {
    Node& in = nodes_[inner];
    in.cut_dim_ = cut.dim;
    in.cut_value_ = cut.value;
    in.lo_ = scratch_lo_;
    in.hi_ = scratch_hi_;
    in.leaf_count_ = displaced + 1;
    in.left_ = point_left ? leaf : cur;
    in.right_ = point_left ? cur : leaf;
  }
  replace_child(parent, cur, inner);
  nodes_[cur].parent_ = inner;
  nodes_[leaf].parent_ = inner;

  for (NodeId a = parent; a != kNoNode; a = nodes_[a].parent_) {
    Node& n = nodes_[a];
    ++n.leaf_count_;
    for (std::size_t i = 0; i < dim_; ++i) {
      n.lo_[i] = std::min(n.lo_[i], x[i]);
      n.hi_[i] = std::max(n.hi_[i], x[i]);
    }
  }

  index_.emplace(Point(x.begin(), x.end()), leaf);
  ++total_points_;
  const std::uint64_t displacement = cur_depth + 1 + displaced;
  model_complexity_ += displacement;
  return {leaf, cur_depth + 1, displaced, displacement, false};
}

DeleteReceipt Tree::delete_point(PointView x) {
  if (dim_ != 0) validate_point(x, dim_);
  auto it = index_.find(x);
  if (it == index_.end()) throw PointNotFoundError("point " + format_point(x) + " is not in the tree");

  const NodeId leaf = it->second;
  if (nodes_[leaf].multiplicity_ > 1) {
    --nodes_[leaf].multiplicity_;
    --total_points_;
    return {0, false};
  }

  if (leaf == root_) {
    index_.erase(it);
    release(leaf);
    root_ = kNoNode;
    total_points_ = 0;
    model_complexity_ = 0;
    return {0, true};
  }

  const NodeId parent = nodes_[leaf].parent_;
  const NodeId sibling = nodes_[parent].left_ == leaf ? nodes_[parent].right_ : nodes_[parent].left_;
  const NodeId grand = nodes_[parent].parent_;
  const std::size_t sibling_leaves = nodes_[sibling].leaf_count_;

  replace_child(grand, parent, sibling);
  index_.erase(it);
  release(leaf);
  release(parent);

  // Boxes above the splice shrink until one is already tight; counts always
  // drop by one up to the root.
  // The same walk measures the leaf's old depth.
  std::size_t leaf_depth = 1;
  bool boxes_settled = false;
  for (NodeId a = grand; a != kNoNode; a = nodes_[a].parent_) {
    Node& n = nodes_[a];
    ++leaf_depth;
    --n.leaf_count_;
    if (boxes_settled) continue;
    const Node& l = nodes_[n.left_];
    const Node& r = nodes_[n.right_];
    const PointView lmin = l.box_min(), lmax = l.box_max();
    const PointView rmin = r.box_min(), rmax = r.box_max();
    bool changed = false;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double lo = std::min(lmin[i], rmin[i]);
      const double hi = std::max(lmax[i], rmax[i]);
      if (!same_bits(lo, n.lo_[i]) || !same_bits(hi, n.hi_[i])) changed = true;
      n.lo_[i] = lo;
      n.hi_[i] = hi;
    }
    boxes_settled = !changed;
  }

  --total_points_;
  const std::uint64_t displacement = leaf_depth + sibling_leaves;
  model_complexity_ -= displacement;
  return {displacement, true};
}

double Tree::displacement_on_insert(PointView point) { return displacement_on_insert(point, rng_); }

double Tree::displacement_on_insert(PointView point, Rng& rng) {
  const InsertReceipt receipt = insert_point(point, rng);
  delete_point(point);
  return static_cast<double>(receipt.displacement);
}

double Tree::displacement_of_member(PointView point) const {
  auto leaf = find_leaf(point);
  if (!leaf) throw PointNotFoundError("point " + format_point(point) + " is not in the tree");
  const Node& n = nodes_[*leaf];
  if (n.parent_ == kNoNode) return 0.0;
  const Node& p = nodes_[n.parent_];
  const NodeId sibling = p.left_ == *leaf ? p.right_ : p.left_;
  return static_cast<double>(depth(*leaf) + nodes_[sibling].leaf_count_);
}

std::vector<NodeRecord> Tree::preorder() const {
  std::vector<NodeRecord> out;
  if (root_ == kNoNode) return out;
  out.reserve(2 * index_.size());
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    NodeRecord rec;
    rec.leaf = n.is_leaf();
    if (rec.leaf) {
      rec.point = n.lo_;
      rec.multiplicity = n.multiplicity_;
    } else {
      rec.cut_dim = n.cut_dim_;
      rec.cut_value = n.cut_value_;
      rec.box_min = n.lo_;
      rec.box_max = n.hi_;
      stack.push_back(n.right_);
      stack.push_back(n.left_);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Tree Tree::from_preorder(std::size_t dim, std::span<const NodeRecord> records) {
  if (dim == 0) throw FormatError("tree dimension must be >= 1");
  Tree tree(dim, 0);
  // Open child slots: (parent, right side). Left slots are filled first.
  std::vector<std::pair<NodeId, bool>> slots;
  if (!records.empty()) slots.emplace_back(kNoNode, false);
  std::vector<NodeId> created;
  created.reserve(records.size());

  for (std::size_t k = 0; k < records.size(); ++k) {
    const NodeRecord& rec = records[k];
    if (slots.empty()) throw FormatError("node record " + std::to_string(k) + " lies outside the tree");
    auto [parent, right_side] = slots.back();
    slots.pop_back();

    NodeId id;
    if (rec.leaf) {
      if (rec.multiplicity == 0) throw FormatError("leaf record " + std::to_string(k) + " has multiplicity 0");
      try {
        validate_point(rec.point, dim, "leaf record " + std::to_string(k));
      } catch (const Error& e) {
        throw FormatError(e.what());
      }
      id = tree.make_leaf(rec.point, rec.multiplicity);
      if (!tree.index_.emplace(rec.point, id).second) {
        throw FormatError("leaf record " + std::to_string(k) + " duplicates an earlier leaf");
      }
      tree.total_points_ += rec.multiplicity;
    } else {
      if (rec.cut_dim >= dim || !std::isfinite(rec.cut_value)) {
        throw FormatError("internal record " + std::to_string(k) + " has an invalid cut");
      }
      if (rec.box_min.size() != dim || rec.box_max.size() != dim) {
        throw FormatError("internal record " + std::to_string(k) + " has a box of wrong dimension");
      }
      id = tree.allocate();
      Node& n = tree.nodes_[id];
      n.cut_dim_ = rec.cut_dim;
      n.cut_value_ = rec.cut_value;
      n.lo_ = rec.box_min;
      n.hi_ = rec.box_max;
    }
    tree.nodes_[id].parent_ = parent;
    if (parent == kNoNode) {
      tree.root_ = id;
    } else if (right_side) {
      tree.nodes_[parent].right_ = id;
    } else {
      tree.nodes_[parent].left_ = id;
    }
    if (!rec.leaf) {
      slots.emplace_back(id, true);
      slots.emplace_back(id, false);
    }
    created.push_back(id);
  }
  if (!slots.empty()) throw FormatError("node records end before the tree is complete");

  // Children were created after their parents, so a reverse sweep sees every
  // subtree before its root.
  std::vector<double> lo(dim), hi(dim);
  for (auto it = created.rbegin(); it != created.rend(); ++it) {
    Node& n = tree.nodes_[*it];
    if (n.is_leaf()) continue;
    const Node& l = tree.nodes_[n.left_];
    const Node& r = tree.nodes_[n.right_];
    n.leaf_count_ = l.leaf_count_ + r.leaf_count_;
    for (std::size_t i = 0; i < dim; ++i) {
      lo[i] = std::min(l.box_min()[i], r.box_min()[i]);
      hi[i] = std::max(l.box_max()[i], r.box_max()[i]);
    }
    if (!same_bits(lo, n.lo_) || !same_bits(hi, n.hi_)) {
      throw FormatError("stored bounding box does not match its subtree");
    }
  }
  for (const auto& [point, id] : tree.index_) tree.model_complexity_ += tree.depth(id);

  try {
    tree.check_invariants();
  } catch (const Error& e) {
    throw FormatError(e.what());
  }
  return tree;
}

std::string Tree::rng_state() const {
  std::ostringstream os;
  os << rng_;
  return os.str();
}

void Tree::set_rng_state(const std::string& state) {
  std::istringstream is(state);
  Rng restored;
  is >> restored;
  if (is.fail()) throw FormatError("malformed generator state");
  rng_ = restored;
}

void Tree::check_invariants() const {
  auto fail = [](const std::string& msg) { throw Error("tree invariant violated: " + msg); };
  if (root_ == kNoNode) {
    if (!index_.empty() || model_complexity_ != 0 || total_points_ != 0) fail("empty tree carries state");
    return;
  }
  if (nodes_[root_].parent_ != kNoNode) fail("root has a parent");

  std::size_t leaves = 0;
  std::uint64_t depth_sum = 0;
  std::uint64_t points = 0;
  struct Item {
    NodeId id;
    std::size_t depth;
  };
  std::vector<Item> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    const Node& n = nodes_[id];
    if (n.is_leaf()) {
      if (n.right_ != kNoNode) fail("leaf with a right child");
      if (n.leaf_count_ != 1 || n.multiplicity_ == 0) fail("bad leaf counts");
      auto it = index_.find(n.point());
      if (it == index_.end() || it->second != id) fail("leaf missing from index");
      ++leaves;
      depth_sum += d;
      points += n.multiplicity_;
      continue;
    }
    if (n.right_ == kNoNode) fail("internal node with one child");
    const Node& l = nodes_[n.left_];
    const Node& r = nodes_[n.right_];
    if (l.parent_ != id || r.parent_ != id) fail("broken parent link");
    if (n.leaf_count_ != l.leaf_count_ + r.leaf_count_) fail("leaf_count mismatch");
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!same_bits(n.lo_[i], std::min(l.box_min()[i], r.box_min()[i])) ||
          !same_bits(n.hi_[i], std::max(l.box_max()[i], r.box_max()[i]))) {
        fail("bounding box is not the union of its children");
      }
    }
    const std::uint32_t c = n.cut_dim_;
    if (!(n.lo_[c] <= n.cut_value_ && n.cut_value_ < n.hi_[c])) fail("cut outside its box");
    if (!(l.box_max()[c] <= n.cut_value_)) fail("left subtree crosses the cut");
    if (!(r.box_min()[c] > n.cut_value_)) fail("right subtree crosses the cut");
    stack.push_back({n.right_, d + 1});
    stack.push_back({n.left_, d + 1});
  }
  if (leaves != index_.size()) fail("index holds unreachable points");
  if (depth_sum != model_complexity_) fail("model complexity counter is stale");
  if (points != total_points_) fail("point count is stale");
}

bool operator==(const Tree& a, const Tree& b) {
  if (a.dim_ != b.dim_ || a.size() != b.size() || a.total_points_ != b.total_points_ ||
      a.model_complexity_ != b.model_complexity_) {
    return false;
  }
  if ((a.root_ == kNoNode) != (b.root_ == kNoNode)) return false;
  if (a.root_ == kNoNode) return true;
  std::vector<std::pair<NodeId, NodeId>> stack{{a.root_, b.root_}};
  while (!stack.empty()) {
    auto [ia, ib] = stack.back();
    stack.pop_back();
    const Node& na = a.nodes_[ia];
    const Node& nb = b.nodes_[ib];
    if (na.is_leaf() != nb.is_leaf() || na.leaf_count() != nb.leaf_count()) return false;
    if (na.is_leaf()) {
      if (na.multiplicity() != nb.multiplicity() || !same_bits(na.point(), nb.point())) return false;
      continue;
    }
    if (na.cut_dim() != nb.cut_dim() || !same_bits(na.cut_value(), nb.cut_value()) ||
        !same_bits(na.box_min(), nb.box_min()) || !same_bits(na.box_max(), nb.box_max())) {
      return false;
    }
    stack.emplace_back(na.right(), nb.right());
    stack.emplace_back(na.left(), nb.left());
  }
  return true;
}

}  // namespace rrrcf
