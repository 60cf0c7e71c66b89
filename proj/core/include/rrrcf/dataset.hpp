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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rrrcf/point.hpp"

namespace rrrcf {

// csv: comma-separated decimal floats, one row per line, with an optional
// single header row (detected when a cell of the first row is not a number).
// ndjson: one JSON array of numbers per line.
enum class DataFormat { kCsv, kNdjson };

DataFormat parse_data_format(std::string_view name);
std::string_view data_format_name(DataFormat format) noexcept;
// ".ndjson" / ".jsonl" map to kNdjson, everything else to kCsv.
DataFormat data_format_for_path(const std::filesystem::path& path);

struct Dataset {
  std::vector<Point> points;
  std::string source;
  DataFormat format = DataFormat::kCsv;
  std::size_t dim = 0;

  std::size_t size() const noexcept { return points.size(); }
};

// Throws FormatError naming the 1-based line of the first ragged,
// non-numeric or non-finite row.
Dataset parse_dataset(std::string_view text, DataFormat format, std::string source = "<memory>");
Dataset load_dataset(const std::filesystem::path& path, DataFormat format);

// Shortest round-trip decimal form, so load(save(x)) == x exactly.
std::string format_dataset(std::span<const Point> points, DataFormat format);
void save_dataset(std::span<const Point> points, const std::filesystem::path& path, DataFormat format);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace rrrcf
