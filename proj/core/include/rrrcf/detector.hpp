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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrrcf/forest.hpp"
#include "rrrcf/point.hpp"

namespace rrrcf {

struct Verdict {
  double disp_value = 0.0;
  double threshold = 0.0;
  bool is_ood = false;
  std::size_t sequence_index = 0;
};

// Outcome for one stream element: a verdict, or the reason none was made.
struct StreamVerdict {
  std::size_t index = 0;
  std::optional<Verdict> verdict;
  std::string error;

  bool ok() const noexcept { return verdict.has_value(); }
};

struct DetectorOptions {
  // Every call uses nonce 0, making a verdict a pure function of the point.
  bool fixed_nonce = false;
};

// Scores points against a frozen forest: each tree inserts the point,
// records the model complexity, deletes it again and records it once more.
// The forest leaves every call structurally unchanged.
//
// Not safe for concurrent calls: scoring mutates trees transiently.
class Detector {
 public:
  // Throws ConfigError for a non-finite threshold or a forest with no points.
  Detector(Forest forest, double threshold, DetectorOptions options = {});

  const Forest& forest() const noexcept { return forest_; }
  double threshold() const noexcept { return threshold_; }
  const DetectorOptions& options() const noexcept { return options_; }
  std::size_t dim() const noexcept { return forest_.dim(); }

  // Number of score_point calls so far; also the next sequence index.
  std::uint64_t calls() const noexcept { return calls_; }

  // Throws DimensionError / InvalidPointError for a bad point.
  Verdict score_point(PointView x);

  // Scores each point in order. A bad point yields an error entry and the
  // stream continues.
  std::vector<StreamVerdict> process_stream(std::span<const Point> stream);

 private:
  Forest forest_;
  double threshold_;
  DetectorOptions options_;
  std::uint64_t calls_ = 0;
  std::vector<double> scratch_;
};

}  // namespace rrrcf
