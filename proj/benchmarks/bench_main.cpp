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

#include <benchmark/benchmark.h>

#include <random>

#include "rrrcf/rrrcf.hpp"

namespace {

std::vector<rrrcf::Point> cloud(std::size_t n, std::uint64_t seed = 1) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<rrrcf::Point> out(n, rrrcf::Point(3));
  for (auto& p : out)
    for (double& v : p) v = nd(gen);
  return out;
}

// Delete a stored point and put it back; the pair keeps the tree size fixed.
void BM_TreeDeleteReinsert(benchmark::State& state) {
  const auto pts = cloud(static_cast<std::size_t>(state.range(0)));
  rrrcf::Tree tree = rrrcf::create_tree(pts, 7);
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& p = pts[k++ % pts.size()];
    benchmark::DoNotOptimize(tree.delete_point(p));
    benchmark::DoNotOptimize(tree.insert_point(p));
  }
}
BENCHMARK(BM_TreeDeleteReinsert)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TreeInsertDelete(benchmark::State& state) {
  const auto pts = cloud(static_cast<std::size_t>(state.range(0)));
  const auto probes = cloud(1024, 99);
  rrrcf::Tree tree = rrrcf::create_tree(pts, 7);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(tree.displacement_on_insert(probes[k++ % probes.size()]));
}
BENCHMARK(BM_TreeInsertDelete)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TreeCreate(benchmark::State& state) {
  const auto pts = cloud(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rrrcf::create_tree(pts, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TreeCreate)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_DetectorScore(benchmark::State& state) {
  rrrcf::ForestConfig fc;
  fc.num_trees = 100;
  rrrcf::Detector det(rrrcf::create_forest(cloud(static_cast<std::size_t>(state.range(0))), fc), 20.0);
  const auto probes = cloud(256, 5);
  std::size_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(det.score_point(probes[k++ % probes.size()]));
}
BENCHMARK(BM_DetectorScore)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

void BM_Reduce(benchmark::State& state) {
  const auto pts = cloud(static_cast<std::size_t>(state.range(0)));
  rrrcf::ReductionConfig rc;
  rc.z_size = 500;
  rc.num_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(rrrcf::reduce(pts, rc));
}
BENCHMARK(BM_Reduce)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
