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

#include "rrrcf/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "rrrcf/errors.hpp"

namespace rrrcf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

[[noreturn]] void row_error(const std::string& source, std::size_t line, const std::string& what) {
  throw FormatError(source + ": line " + std::to_string(line) + ": " + what);
}

void add_row(Dataset& ds, Point row, std::size_t line) {
  if (row.empty()) row_error(ds.source, line, "empty row");
  if (ds.points.empty()) {
    ds.dim = row.size();
  } else if (row.size() != ds.dim) {
    row_error(ds.source, line,
              "ragged row: " + std::to_string(row.size()) + " values, expected " + std::to_string(ds.dim));
  }
  for (double v : row) {
    if (!std::isfinite(v)) row_error(ds.source, line, "non-finite value");
  }
  ds.points.push_back(std::move(row));
}

}  // namespace

DataFormat parse_data_format(std::string_view name) {
  if (name == "csv") return DataFormat::kCsv;
  if (name == "ndjson" || name == "jsonl") return DataFormat::kNdjson;
  throw FormatError("unknown data format '" + std::string(name) + "'");
}

std::string_view data_format_name(DataFormat format) noexcept {
  return format == DataFormat::kCsv ? "csv" : "ndjson";
}

DataFormat data_format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return ext == ".ndjson" || ext == ".jsonl" ? DataFormat::kNdjson : DataFormat::kCsv;
}

Dataset parse_dataset(std::string_view text, DataFormat format, std::string source) {
  Dataset ds;
  ds.source = std::move(source);
  ds.format = format;

  bool first_row = true;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line.empty()) continue;

    Point row;
    if (format == DataFormat::kCsv) {
      const auto cells = split(line, ',');
      row.reserve(cells.size());
      bool numeric = true;
      for (std::string_view cell : cells) {
        auto v = parse_number(cell);
        if (!v) {
          numeric = false;
          break;
        }
        row.push_back(*v);
      }
      if (!numeric) {
        if (first_row) {
          first_row = false;
          continue;  // header
        }
        row_error(ds.source, line_no, "non-numeric cell");
      }
    } else {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        row_error(ds.source, line_no, "not valid JSON");
      }
      if (!j.is_array()) row_error(ds.source, line_no, "row is not a JSON array");
      row.reserve(j.size());
      for (const auto& v : j) {
        if (!v.is_number()) row_error(ds.source, line_no, "non-numeric element");
        row.push_back(v.get<double>());
      }
    }
    first_row = false;
    add_row(ds, std::move(row), line_no);
  }
  return ds;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  return parse_dataset(read_file(path), format, path.string());
}

std::string format_dataset(std::span<const Point> points, DataFormat format) {
  std::string out;
  out.reserve(points.size() * 24);
  for (const Point& p : points) {
    if (format == DataFormat::kNdjson) out += '[';
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      append_number(out, p[i]);
    }
    if (format == DataFormat::kNdjson) out += ']';
    out += '\n';
  }
  return out;
}

void save_dataset(std::span<const Point> points, const std::filesystem::path& path, DataFormat format) {
  write_file(path, format_dataset(points, format));
}

}  // namespace rrrcf
