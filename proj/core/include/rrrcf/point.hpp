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
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rrrcf {

// A d-dimensional real vector. Two points are duplicates iff every
// coordinate compares equal.
using Point = std::vector<double>;

using PointView = std::span<const double>;

// Throws DimensionError if `p.size() != dim`, InvalidPointError on a
// non-finite coordinate. `what` prefixes the message.
void validate_point(PointView p, std::size_t dim, const std::string& what = "point");

bool points_equal(PointView a, PointView b) noexcept;

// Hash consistent with points_equal (+0.0 and -0.0 hash alike).
struct PointHash {
  using is_transparent = void;
  std::size_t operator()(PointView p) const noexcept;
  std::size_t operator()(const Point& p) const noexcept { return (*this)(PointView(p)); }
};

struct PointEqual {
  using is_transparent = void;
  bool operator()(PointView a, PointView b) const noexcept { return points_equal(a, b); }
  bool operator()(const Point& a, const Point& b) const noexcept { return points_equal(a, b); }
  bool operator()(const Point& a, PointView b) const noexcept { return points_equal(a, b); }
  bool operator()(PointView a, const Point& b) const noexcept { return points_equal(a, b); }
};

std::string format_point(PointView p);

}  // namespace rrrcf
