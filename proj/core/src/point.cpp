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

#include "rrrcf/point.hpp"

#include <bit>
#include <charconv>
#include <cmath>

#include "rrrcf/errors.hpp"

namespace rrrcf {

void validate_point(PointView p, std::size_t dim, const std::string& what) {
  if (p.size() != dim) {
    throw DimensionError(what + " has dimension " + std::to_string(p.size()) + ", expected " +
                         std::to_string(dim));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) {
      throw InvalidPointError(what + " has a non-finite coordinate at index " + std::to_string(i));
    }
  }
}

bool points_equal(PointView a, PointView b) noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::size_t PointHash::operator()(PointView p) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ p.size();
  for (double v : p) {
    // Adding 0.0 maps -0.0 onto +0.0.
    auto bits = std::bit_cast<std::uint64_t>(v + 0.0);
    h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

std::string format_point(PointView p) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    auto res = std::to_chars(buf, buf + sizeof(buf), p[i]);
    out.append(buf, res.ptr);
  }
  out += ")";
  return out;
}

}  // namespace rrrcf
