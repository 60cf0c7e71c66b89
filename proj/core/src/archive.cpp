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

#include "rrrcf/archive.hpp"

#include <cstdio>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include "rrrcf/dataset.hpp"
#include "rrrcf/errors.hpp"

namespace rrrcf {

namespace {

using nlohmann::json;

constexpr std::string_view kFormatTag = "rrrcf-forest";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json tree_to_json(const Tree& tree) {
  json nodes = json::array();
  for (const NodeRecord& rec : tree.preorder()) {
    if (rec.leaf) {
      nodes.push_back(json::array({"L", rec.point, rec.multiplicity}));
    } else {
      nodes.push_back(json::array({"I", rec.cut_dim, rec.cut_value, rec.box_min, rec.box_max}));
    }
  }
  return json{{"rng_state", tree.rng_state()}, {"nodes", std::move(nodes)}};
}

Point to_point(const json& j, std::size_t dim, const char* what) {
  if (!j.is_array() || j.size() != dim) throw FormatError(std::string(what) + " has the wrong dimension");
  Point p;
  p.reserve(dim);
  for (const auto& v : j) {
    if (!v.is_number()) throw FormatError(std::string(what) + " holds a non-number");
    p.push_back(v.get<double>());
  }
  return p;
}

Tree tree_from_json(const json& j, std::size_t dim) {
  std::vector<NodeRecord> records;
  const json& nodes = j.at("nodes");
  if (!nodes.is_array()) throw FormatError("tree nodes must be an array");
  records.reserve(nodes.size());
  for (const json& n : nodes) {
    if (!n.is_array() || n.empty() || !n[0].is_string()) throw FormatError("malformed node record");
    NodeRecord rec;
    const std::string kind = n[0].get<std::string>();
    if (kind == "L") {
      if (n.size() != 3 || !n[2].is_number_unsigned()) throw FormatError("malformed leaf record");
      rec.leaf = true;
      rec.point = to_point(n[1], dim, "leaf point");
      rec.multiplicity = n[2].get<std::uint64_t>();
    } else if (kind == "I") {
      if (n.size() != 5 || !n[1].is_number_unsigned() || !n[2].is_number()) {
        throw FormatError("malformed internal record");
      }
      rec.cut_dim = n[1].get<std::uint32_t>();
      rec.cut_value = n[2].get<double>();
      rec.box_min = to_point(n[3], dim, "box min");
      rec.box_max = to_point(n[4], dim, "box max");
    } else {
      throw FormatError("unknown node kind '" + kind + "'");
    }
    records.push_back(std::move(rec));
  }
  Tree tree = Tree::from_preorder(dim, records);
  tree.set_rng_state(j.at("rng_state").get<std::string>());
  return tree;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string serialize_forest(const Forest& forest, std::optional<double> threshold,
                             const std::optional<ReductionStats>& stats) {
  if (forest.size() == 0) throw Error("refusing to save a forest with no points");
  const ForestConfig& c = forest.config();
  json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kArchiveVersion;
  doc["config"] = {{"num_trees", c.num_trees},
                   {"master_seed", c.master_seed},
                   {"dim", c.dim},
                   {"aggregation", c.aggregation == Aggregation::kMedian ? "median" : "mean"},
                   {"subsample_size", c.subsample_size}};
  doc["threshold"] = threshold ? json(*threshold) : json(nullptr);
  if (stats) {
    doc["stats"] = {{"total", stats->total},
                    {"featured", stats->featured},
                    {"rejected", stats->rejected},
                    {"reduction_percentage", stats->reduction_percentage}};
  }
  json trees = json::array();
  for (const Tree& t : forest.trees()) trees.push_back(tree_to_json(t));
  doc["trees"] = std::move(trees);
  doc["checksum"] = hex64(fnv1a64(doc.dump()));
  return doc.dump() + "\n";
}

ForestArchive parse_archive(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("archive is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != kFormatTag) throw FormatError("not a forest archive");
    if (!doc.contains("version") || doc["version"] != kArchiveVersion) {
      throw FormatError("unsupported archive version " + doc.value("version", json()).dump());
    }
    if (!doc.contains("checksum") || !doc["checksum"].is_string()) throw FormatError("archive has no checksum");
    const std::string stored = doc["checksum"].get<std::string>();
    doc.erase("checksum");
    if (stored != hex64(fnv1a64(doc.dump()))) throw FormatError("archive checksum mismatch");

    const json& cj = doc.at("config");
    ForestConfig config;
    config.num_trees = cj.at("num_trees").get<std::size_t>();
    config.master_seed = cj.at("master_seed").get<std::uint64_t>();
    config.dim = cj.at("dim").get<std::size_t>();
    const std::string agg = cj.at("aggregation").get<std::string>();
    if (agg != "mean" && agg != "median") throw FormatError("unknown aggregation '" + agg + "'");
    config.aggregation = agg == "median" ? Aggregation::kMedian : Aggregation::kMean;
    config.subsample_size = cj.value("subsample_size", std::size_t{0});
    if (config.dim == 0) throw FormatError("archive dimension must be >= 1");

    const json& tj = doc.at("trees");
    if (!tj.is_array() || tj.size() != config.num_trees) throw FormatError("tree count does not match config");
    std::vector<Tree> trees;
    trees.reserve(tj.size());
    for (const json& t : tj) trees.push_back(tree_from_json(t, config.dim));

    std::optional<double> threshold;
    if (!doc.at("threshold").is_null()) threshold = doc["threshold"].get<double>();

    std::optional<ReductionStats> stats;
    if (doc.contains("stats")) {
      const json& sj = doc["stats"];
      stats = ReductionStats{sj.at("total").get<std::size_t>(), sj.at("featured").get<std::size_t>(),
                             sj.at("rejected").get<std::size_t>(), sj.at("reduction_percentage").get<double>()};
    }
    return {Forest::from_trees(std::move(trees), config), threshold, stats};
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed archive: ") + e.what());
  }
}

void save_forest(const ReductionResult& result, const std::filesystem::path& path) {
  write_file(path, serialize_forest(result.forest, result.detection_threshold, result.stats));
}

void save_forest(const Forest& forest, std::optional<double> threshold, const std::filesystem::path& path) {
  write_file(path, serialize_forest(forest, threshold));
}

ForestArchive load_archive(const std::filesystem::path& path) { return parse_archive(read_file(path)); }

Detector load_forest(const std::filesystem::path& path, DetectorOptions options,
                     std::optional<double> threshold_override) {
  ForestArchive archive = load_archive(path);
  const std::optional<double> threshold = threshold_override ? threshold_override : archive.threshold;
  if (!threshold) throw ConfigError("archive '" + path.string() + "' has no threshold; supply one explicitly");
  return Detector(std::move(archive.forest), *threshold, options);
}

}  // namespace rrrcf
