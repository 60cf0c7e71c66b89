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

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "rrrcf/errors.hpp"
#include "rrrcf/tree.hpp"
#include "support/oracle.hpp"

namespace rrrcf {
namespace {

using testing::build_shape;
using testing::leaf;
using testing::mc_by_traversal;
using testing::split;

TEST_CASE("create_tree on degenerate inputs") {
  SUBCASE("empty input gives an empty tree") {
    Tree t = create_tree({}, 1);
    CHECK(t.empty());
    CHECK(t.model_complexity() == 0);
    CHECK(t.size() == 0);
  }
  SUBCASE("single point is a lone leaf") {
    std::vector<Point> pts{{3.0, 4.0}};
    Tree t = create_tree(pts, 7);
    REQUIRE_FALSE(t.empty());
    CHECK(t.node(t.root()).is_leaf());
    CHECK(t.model_complexity() == 0);
  }
  SUBCASE("two points have one possible shape") {
    std::vector<Point> pts{{0.0}, {1.0}};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Tree t = create_tree(pts, seed);
      const Node& root = t.node(t.root());
      REQUIRE_FALSE(root.is_leaf());
      CHECK(root.cut_dim() == 0);
      CHECK(root.cut_value() >= 0.0);
      CHECK(root.cut_value() < 1.0);
      CHECK(t.depth(*t.find_leaf(pts[0])) == 1);
      CHECK(t.depth(*t.find_leaf(pts[1])) == 1);
      CHECK(t.model_complexity() == 2);
    }
  }
  SUBCASE("duplicates collapse into multiplicity") {
    std::vector<Point> pts{{1.0}, {2.0}, {1.0}, {1.0}};
    Tree t = create_tree(pts, 3);
    CHECK(t.size() == 2);
    CHECK(t.total_points() == 4);
    CHECK(t.node(*t.find_leaf(pts[0])).multiplicity() == 3);
    CHECK(t.model_complexity() == 2);
    CHECK_NOTHROW(t.check_invariants());
  }
  SUBCASE("all copies of one point") {
    std::vector<Point> pts(50, Point{5.0, 5.0});
    Tree t = create_tree(pts, 3);
    CHECK(t.size() == 1);
    CHECK(t.node(t.root()).multiplicity() == 50);
    CHECK(t.model_complexity() == 0);
  }
}

TEST_CASE("create_tree rejects bad input") {
  std::vector<Point> mixed{{0.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(create_tree(mixed, 0), DimensionError);
  std::vector<Point> nan{{0.0}, {std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_AS(create_tree(nan, 0), InvalidPointError);
  std::vector<Point> inf{{std::numeric_limits<double>::infinity()}};
  CHECK_THROWS_AS(create_tree(inf, 0), InvalidPointError);
  std::vector<Point> ok{{0.0, 1.0}};
  CHECK_THROWS_AS(create_tree(ok, 0, 3), DimensionError);
}

TEST_CASE("root cut dimension follows side lengths") {
  // r = (1, 10), so dimension 1 is chosen with probability 10/11.
  std::vector<Point> pts{{0.0, 0.0}, {1.0, 0.0}, {1.0, 10.0}};
  int dim1 = 0;
  const int trials = 10000;
  for (int seed = 0; seed < trials; ++seed) {
    Tree t = create_tree(pts, static_cast<std::uint64_t>(seed));
    if (t.node(t.root()).cut_dim() == 1) ++dim1;
  }
  CHECK(std::abs(static_cast<double>(dim1) / trials - 10.0 / 11.0) <= 0.02);
}

TEST_CASE("degenerate dimensions are never cut") {
  std::vector<Point> pts{{0.0, 5.0}, {1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Tree t = create_tree(pts, seed);
    std::vector<NodeId> stack{t.root()};
    while (!stack.empty()) {
      const Node& n = t.node(stack.back());
      stack.pop_back();
      if (n.is_leaf()) continue;
      CHECK(n.cut_dim() == 0);
      stack.push_back(n.left());
      stack.push_back(n.right());
    }
  }
}

TEST_CASE("construction is deterministic per seed") {
  std::mt19937_64 gen(11);
  auto pts = testing::random_points(gen, 200, 3, false);
  CHECK(create_tree(pts, 99) == create_tree(pts, 99));
  CHECK_FALSE(create_tree(pts, 99) == create_tree(pts, 100));
}

TEST_CASE("find_leaf") {
  std::vector<Point> pts{{0.0, 0.0}, {1.0, 2.0}, {3.0, 1.0}};
  Tree t = create_tree(pts, 5);
  for (const Point& p : pts) {
    auto id = t.find_leaf(p);
    REQUIRE(id);
    CHECK(testing::leaf_points(t, *id) == std::vector<Point>{p});
  }
  CHECK_FALSE(t.find_leaf(Point{0.5, 0.5}));
  CHECK_THROWS_AS(t.find_leaf(Point{0.0}), DimensionError);
  t.delete_point(pts[1]);
  CHECK_FALSE(t.find_leaf(pts[1]));
  // -0.0 and +0.0 are the same point.
  CHECK(t.find_leaf(Point{-0.0, 0.0}));
}

TEST_CASE("insert_point basics") {
  SUBCASE("into an empty tree") {
    Tree t(1, 0);
    auto r = t.insert_point(Point{1.0});
    CHECK(r.displacement == 0);
    CHECK(r.depth == 0);
    CHECK(t.size() == 1);
  }
  SUBCASE("unbound dimension is taken from the first point") {
    Tree t;
    t.insert_point(Point{1.0, 2.0});
    CHECK(t.dim() == 2);
    CHECK_THROWS_AS(t.insert_point(Point{1.0}), DimensionError);
  }
  SUBCASE("into a single-leaf tree always displaces by 2") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      std::vector<Point> pts{{0.0}};
      Tree t = create_tree(pts, seed);
      auto r = t.insert_point(Point{1.0});
      CHECK(r.displacement == 2);
      CHECK(r.depth == 1);
      CHECK(r.displaced_leaf_count == 1);
      CHECK(mc_by_traversal(t) == 2);
    }
  }
  SUBCASE("exact duplicate increments multiplicity") {
    std::vector<Point> pts{{0.0}, {1.0}, {4.0}};
    Tree t = create_tree(pts, 2);
    const Tree before = t;
    auto r = t.insert_point(Point{1.0});
    CHECK(r.duplicate);
    CHECK(r.displacement == 0);
    CHECK(t.node(r.leaf).multiplicity() == 2);
    CHECK(t.total_points() == 4);
    CHECK(t.model_complexity() == before.model_complexity());
  }
  SUBCASE("bad points leave the tree unchanged") {
    std::vector<Point> pts{{0.0, 0.0}, {1.0, 1.0}};
    Tree t = create_tree(pts, 2);
    const Tree before = t;
    CHECK_THROWS_AS(t.insert_point(Point{1.0}), DimensionError);
    CHECK_THROWS_AS(t.insert_point(Point{1.0, std::nan("")}), InvalidPointError);
    CHECK(t == before);
  }
}

TEST_CASE("delete_point basics") {
  SUBCASE("two-leaf tree collapses to one leaf") {
    std::vector<Point> pts{{0.0}, {1.0}};
    Tree t = create_tree(pts, 4);
    auto r = t.delete_point(Point{1.0});
    CHECK(r.removed);
    CHECK(r.displacement == 2);
    CHECK(t.size() == 1);
    CHECK(t.node(t.root()).is_leaf());
    CHECK(t.model_complexity() == 0);
  }
  SUBCASE("last point empties the tree") {
    Tree t(1, 0);
    t.insert_point(Point{2.0});
    auto r = t.delete_point(Point{2.0});
    CHECK(r.removed);
    CHECK(t.empty());
  }
  SUBCASE("multiplicity is decremented first") {
    std::vector<Point> pts{{0.0}, {1.0}, {1.0}};
    Tree t = create_tree(pts, 4);
    auto r = t.delete_point(Point{1.0});
    CHECK_FALSE(r.removed);
    CHECK(r.displacement == 0);
    CHECK(t.size() == 2);
    CHECK(t.total_points() == 2);
  }
  SUBCASE("absent point is an error and changes nothing") {
    std::vector<Point> pts{{0.0}, {1.0}};
    Tree t = create_tree(pts, 4);
    const Tree before = t;
    CHECK_THROWS_AS(t.delete_point(Point{0.5}), PointNotFoundError);
    CHECK(t == before);
  }
}

TEST_CASE("model complexity of hand-built shapes") {
  CHECK(build_shape(leaf(1.0)).model_complexity() == 0);
  const Tree perfect = build_shape(split(split(leaf(0), leaf(1)), split(leaf(2), leaf(3))));
  CHECK(perfect.model_complexity() == 8);
  CHECK(mc_by_traversal(perfect) == 8);
  const Tree caterpillar = build_shape(split(leaf(0), split(leaf(1), split(leaf(2), leaf(3)))));
  CHECK(caterpillar.model_complexity() == 9);
  CHECK(mc_by_traversal(caterpillar) == 9);
}

TEST_CASE("member displacement") {
  SUBCASE("two-leaf tree") {
    std::vector<Point> pts{{0.0}, {1.0}};
    Tree t = create_tree(pts, 1);
    CHECK(t.displacement_of_member(pts[0]) == 2.0);
    CHECK(t.displacement_of_member(pts[1]) == 2.0);
    Tree copy = t;
    CHECK(static_cast<double>(copy.delete_point(pts[0]).displacement) == t.displacement_of_member(pts[0]));
  }
  SUBCASE("depth-3 leaf with a 5-leaf sibling") {
    // Leaf 10 sits at depth 3; its sibling holds 20..24.
    Tree t = build_shape(split(leaf(0), split(leaf(1), split(leaf(10),
        split(split(leaf(20), leaf(21)), split(leaf(22), split(leaf(23), leaf(24))))))));
    const Point x{10.0};
    REQUIRE(t.depth(*t.find_leaf(x)) == 3);
    CHECK(t.displacement_of_member(x) == 8.0);
    // Oracle: delete, recompute by traversal, restore from the dump.
    const auto dump = t.preorder();
    const auto before = mc_by_traversal(t);
    t.delete_point(x);
    CHECK(before - mc_by_traversal(t) == 8);
    t = Tree::from_preorder(1, dump);
    CHECK(t.displacement_of_member(x) == 8.0);
  }
  SUBCASE("single leaf and absent points") {
    std::vector<Point> pts{{0.0}};
    Tree t = create_tree(pts, 1);
    CHECK(t.displacement_of_member(pts[0]) == 0.0);
    CHECK_THROWS_AS(t.displacement_of_member(Point{2.0}), PointNotFoundError);
  }
}

TEST_CASE("displacement_on_insert") {
  std::vector<Point> pts{{0.0, 1.0}, {2.0, 3.0}, {5.0, -1.0}};
  Tree t = create_tree(pts, 8);
  const Tree before = t;
  CHECK(t.displacement_on_insert(pts[1]) == 0.0);
  const double d = t.displacement_on_insert(Point{10.0, 10.0});
  CHECK(d >= 2.0);
  CHECK(t == before);

  std::vector<Point> one{{0.0}};
  Tree single = create_tree(one, 3);
  CHECK(single.displacement_on_insert(Point{7.0}) == 2.0);
}

TEST_CASE("far probe displaces more than any in-cluster probe") {
  // 64 points in [0, 1]; mean displacement over 1000 trees per probe.
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> cluster(64);
  for (Point& p : cluster) p = {unit(gen)};
  std::vector<Point> inside(16);
  for (Point& p : inside) p = {unit(gen)};

  const int seeds = 1000;
  auto mean_disp = [&](const Point& probe) {
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) {
      Tree t = create_tree(cluster, static_cast<std::uint64_t>(s));
      sum += t.displacement_on_insert(probe);
    }
    return sum / seeds;
  };
  double max_inside = 0.0;
  for (const Point& p : inside) max_inside = std::max(max_inside, mean_disp(p));
  const double far = mean_disp(Point{100.0});
  CHECK(far > max_inside);
  // Isolated at the root in essentially every tree: 1 + 64.
  CHECK(far > 60.0);
}

TEST_CASE("complexity bounds over random trees") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 60;
    auto pts = testing::random_points(gen, n, 1 + gen() % 3, false);
    Tree t = create_tree(pts, gen());
    const auto m = t.size();
    CHECK(t.model_complexity() >= m);
    CHECK(t.model_complexity() <= (m - 1) * (m + 2) / 2);
  }
}

TEST_CASE("random operation sequences keep every invariant") {
  std::mt19937_64 gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 1 + gen() % 3;
    const bool grid = trial % 2 == 0;
    auto pts = testing::random_points(gen, 1 + gen() % 30, dim, grid);
    Tree t = create_tree(pts, gen());
    std::vector<Point> held = pts;
    for (int step = 0; step < 60; ++step) {
      if (held.empty() || gen() % 2 == 0) {
        auto extra = testing::random_points(gen, 1, dim, grid);
        const auto before = mc_by_traversal(t);
        auto r = t.insert_point(extra[0]);
        CHECK(mc_by_traversal(t) - before == r.displacement);
        held.push_back(extra[0]);
      } else {
        const std::size_t k = gen() % held.size();
        const auto before = mc_by_traversal(t);
        auto r = t.delete_point(held[k]);
        CHECK(before - mc_by_traversal(t) == r.displacement);
        held.erase(held.begin() + static_cast<std::ptrdiff_t>(k));
      }
      REQUIRE_NOTHROW(t.check_invariants());
      REQUIRE(testing::partition_and_boxes_sound(t));
      CHECK(t.total_points() == held.size());
    }
  }
}

TEST_CASE("pre-order dump reproduces the tree") {
  std::mt19937_64 gen(9);
  auto pts = testing::random_points(gen, 80, 2, true);
  Tree t = create_tree(pts, 1);
  Tree copy = Tree::from_preorder(t.dim(), t.preorder());
  CHECK(copy == t);
  CHECK(copy.size() == t.size());
  CHECK(copy.model_complexity() == t.model_complexity());
}

TEST_CASE("from_preorder rejects inconsistent dumps") {
  std::vector<Point> pts{{0.0}, {1.0}, {2.0}};
  Tree t = create_tree(pts, 1);
  auto recs = t.preorder();
  SUBCASE("truncated") {
    recs.pop_back();
    CHECK_THROWS_AS(Tree::from_preorder(1, recs), FormatError);
  }
  SUBCASE("extra record") {
    recs.push_back(recs.back());
    CHECK_THROWS_AS(Tree::from_preorder(1, recs), FormatError);
  }
  SUBCASE("box that is not tight") {
    recs[0].box_max[0] += 1.0;
    CHECK_THROWS_AS(Tree::from_preorder(1, recs), FormatError);
  }
  SUBCASE("cut that does not separate") {
    recs[0].cut_value = -5.0;
    CHECK_THROWS_AS(Tree::from_preorder(1, recs), FormatError);
  }
  SUBCASE("zero multiplicity") {
    for (auto& r : recs) {
      if (r.leaf) r.multiplicity = 0;
    }
    CHECK_THROWS_AS(Tree::from_preorder(1, recs), FormatError);
  }
}

TEST_CASE("generator state round-trips") {
  std::vector<Point> pts{{0.0}, {1.0}, {3.0}};
  Tree a = create_tree(pts, 42);
  Tree b = Tree::from_preorder(1, a.preorder());
  b.set_rng_state(a.rng_state());
  a.insert_point(Point{2.0});
  b.insert_point(Point{2.0});
  CHECK(a == b);
  CHECK_THROWS_AS(b.set_rng_state("garbage"), FormatError);
}

}  // namespace
}  // namespace rrrcf
