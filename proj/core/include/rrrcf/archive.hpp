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

// Forest archive: a versioned JSON document holding the forest
// configuration, the detection threshold, each tree's generator state and
// its nodes in pre-order, sealed with an FNV-1a 64 checksum over the
// canonical serialization of everything else.
//
//   {"format": "rrrcf-forest", "version": 1,
//    "config": {"num_trees", "master_seed", "dim", "aggregation", "subsample_size"},
//    "threshold": <number or null>,
//    "stats": {"total", "featured", "rejected", "reduction_percentage"} (optional),
//    "trees": [{"rng_state": "...", "nodes": [["I", dim, cut, [min...], [max...]],
//                                             ["L", [point...], multiplicity], ...]}],
//    "checksum": "<16 hex digits>"}

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rrrcf/detector.hpp"
#include "rrrcf/forest.hpp"
#include "rrrcf/reducer.hpp"

namespace rrrcf {

inline constexpr int kArchiveVersion = 1;

struct ForestArchive {
  Forest forest;
  std::optional<double> threshold;
  std::optional<ReductionStats> stats;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// Throws Error for a forest holding no points.
std::string serialize_forest(const Forest& forest, std::optional<double> threshold,
                             const std::optional<ReductionStats>& stats = std::nullopt);

// Throws FormatError on malformed input, version mismatch or checksum failure.
ForestArchive parse_archive(std::string_view text);

void save_forest(const ReductionResult& result, const std::filesystem::path& path);
void save_forest(const Forest& forest, std::optional<double> threshold, const std::filesystem::path& path);

ForestArchive load_archive(const std::filesystem::path& path);

// The stored threshold is used unless `threshold_override` is given; an
// archive without a threshold needs an override (ConfigError otherwise).
Detector load_forest(const std::filesystem::path& path, DetectorOptions options = {},
                     std::optional<double> threshold_override = std::nullopt);

}  // namespace rrrcf
