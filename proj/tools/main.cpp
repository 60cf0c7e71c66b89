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

// Command-line driver: gen, build, reduce, score, stream.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "rrrcf/rrrcf.hpp"

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Common {
  std::string format;  // empty: infer from the file extension
  std::optional<std::uint64_t> seed;

  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("RRRCF_SEED"); env && *env) {
      std::uint64_t v = 0;
      const std::string_view s(env);
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size())
        throw rrrcf::ConfigError("RRRCF_SEED is not an unsigned integer: '" + std::string(s) + "'");
      return v;
    }
    return 0;
  }

  rrrcf::DataFormat format_for(const fs::path& path) const {
    return format.empty() ? rrrcf::data_format_for_path(path) : rrrcf::parse_data_format(format);
  }
};

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Dataset format: csv or ndjson (default: by extension)")
      ->check(CLI::IsMember({"csv", "ndjson", "jsonl"}));
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed (falls back to $RRRCF_SEED, then 0)");
}

rrrcf::Dataset load_input(const Common& c, const std::string& path) {
  return rrrcf::load_dataset(path, c.format_for(path));
}

void require_dim(const rrrcf::Detector& det, std::size_t dim, const std::string& what) {
  if (dim != det.dim()) {
    throw rrrcf::DimensionError(what + " has dimension " + std::to_string(dim) + " but the model expects " +
                                std::to_string(det.dim()));
  }
}

// Writes to `path`, or stdout when it is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ostringstream os;
  fn(os);
  rrrcf::write_file(path, os.str());
}

rrrcf::Point parse_point_arg(const std::string& text) {
  const auto ds = rrrcf::parse_dataset(text, rrrcf::DataFormat::kCsv, "--point");
  if (ds.size() != 1) throw rrrcf::FormatError("--point must be one comma-separated row");
  return ds.points.front();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rrrcf: reduced robust random cut forests for out-of-distribution detection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rrrcf 0.1.0");

  Common common;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic scenario");
  std::string gen_kind = "cluster_outlier", gen_out = ".";
  rrrcf::ScenarioSpec gen_spec;
  gen->add_option("--scenario", gen_kind, "braking3d, cluster_outlier or stream_mix")
      ->check(CLI::IsMember({"braking3d", "cluster_outlier", "stream_mix"}));
  gen->add_option("--output", gen_out, "Output directory")->capture_default_str();
  gen->add_option("--points", gen_spec.train_points, "braking3d training frames")->capture_default_str();
  gen->add_option("--cluster-points", gen_spec.cluster_points, "Cluster size")->capture_default_str();
  gen->add_option("--dim", gen_spec.dim, "Cluster dimension")->capture_default_str();
  gen->add_option("--outliers", gen_spec.outlier_count, "cluster_outlier far points")->capture_default_str();
  gen->add_option("--magnitude", gen_spec.outlier_magnitude, "Outlier distance in box diagonals")
      ->capture_default_str();
  gen->add_option("--stream-length", gen_spec.stream_length, "stream_mix length")->capture_default_str();
  gen->add_option("--burst-start", gen_spec.burst_starts, "stream_mix burst start index (repeatable)");
  gen->add_option("--burst-length", gen_spec.burst_length, "stream_mix burst length")->capture_default_str();
  add_seed(gen, common);
  add_format(gen, common);

  // build
  auto* build = app.add_subcommand("build", "Build a forest over a whole dataset");
  std::string build_in, build_out;
  std::size_t build_trees = 100;
  std::optional<double> build_threshold;
  build->add_option("--input", build_in, "Training dataset")->required();
  build->add_option("--output", build_out, "Model archive to write")->required();
  build->add_option("--trees", build_trees, "Number of trees")->capture_default_str()->check(CLI::PositiveNumber);
  build->add_option("--threshold", build_threshold,
                    "Detection threshold to store (default: largest member displacement)");
  add_seed(build, common);
  add_format(build, common);

  // reduce
  auto* red = app.add_subcommand("reduce", "Reduce a dataset to its featured points");
  std::string red_in, red_out, red_log, red_featured;
  rrrcf::ReductionConfig rc;
  bool no_guard = false;
  red->add_option("--input", red_in, "Training dataset")->required();
  red->add_option("--output", red_out, "Model archive to write")->required();
  red->add_option("--trees", rc.num_trees, "Number of trees")->capture_default_str()->check(CLI::PositiveNumber);
  red->add_option("--z-size", rc.z_size, "Initial subset size")->capture_default_str()->check(CLI::PositiveNumber);
  red->add_option("--refresh-interval", rc.threshold_refresh_interval, "Acceptances between threshold refreshes")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  red->add_flag("--shuffle", rc.shuffle_sweep, "Sweep the remaining points in seeded random order");
  red->add_flag("--no-duplicate-guard", no_guard, "Allow zero-displacement points to be featured");
  red->add_option("--log", red_log, "Write the displacement log as CSV");
  red->add_option("--featured", red_featured, "Write the featured points as a dataset");
  add_seed(red, common);
  add_format(red, common);

  // score
  auto* score = app.add_subcommand("score", "Score a single point");
  std::string score_model, score_point;
  std::optional<double> score_threshold;
  bool score_fixed = false;
  score->add_option("--model", score_model, "Model archive")->required();
  score->add_option("--point", score_point, "Comma-separated coordinates")->required();
  score->add_option("--threshold", score_threshold, "Override the stored threshold");
  score->add_flag("--fixed-nonce", score_fixed, "Make the score a pure function of the point");

  // stream
  auto* stream = app.add_subcommand("stream", "Score a stream and write a verdict trace");
  std::string stream_model, stream_in, stream_out;
  std::optional<double> stream_threshold;
  bool stream_fixed = false;
  stream->add_option("--model", stream_model, "Model archive")->required();
  stream->add_option("--input", stream_in, "Stream dataset")->required();
  stream->add_option("--output", stream_out, "Trace CSV (default: stdout)");
  stream->add_option("--threshold", stream_threshold, "Override the stored threshold");
  stream->add_flag("--fixed-nonce", stream_fixed, "Make each score a pure function of its point");
  add_format(stream, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      gen_spec.kind = rrrcf::parse_scenario_kind(gen_kind);
      gen_spec.seed = common.resolved_seed();
      const auto fmt_kind = common.format.empty() ? rrrcf::DataFormat::kCsv : rrrcf::parse_data_format(common.format);
      const std::string ext = fmt_kind == rrrcf::DataFormat::kCsv ? ".csv" : ".ndjson";
      const auto sc = rrrcf::generate_scenario(gen_spec);
      fs::create_directories(gen_out);
      rrrcf::save_dataset(sc.train.points, fs::path(gen_out) / ("train" + ext), fmt_kind);
      for (const auto& s : sc.streams) {
        rrrcf::save_dataset(s.data.points, fs::path(gen_out) / (s.name + ext), fmt_kind);
        std::string labels = "index\n";
        for (std::size_t i : s.ood_indices) labels += std::to_string(i) + "\n";
        rrrcf::write_file(fs::path(gen_out) / (s.name + ".labels.csv"), labels);
      }
      std::cout << "wrote " << sc.train.size() << " training points and " << sc.streams.size() << " streams to "
                << gen_out << "\n";
    } else if (*build) {
      const auto data = load_input(common, build_in);
      rrrcf::ForestConfig fc;
      fc.num_trees = build_trees;
      fc.master_seed = common.resolved_seed();
      fc.dim = data.dim;
      rrrcf::Forest forest = rrrcf::create_forest(data.points, fc);
      double threshold = 0.0;
      if (build_threshold) {
        threshold = *build_threshold;
      } else {
        for (const auto& p : data.points) threshold = std::max(threshold, forest.member_displacement(p));
      }
      rrrcf::save_forest(forest, threshold, build_out);
      std::cout << "trees=" << build_trees << " points=" << data.size() << " distinct=" << forest.size()
                << " threshold=" << fmt(threshold) << "\n";
    } else if (*red) {
      const auto data = load_input(common, red_in);
      rc.master_seed = common.resolved_seed();
      rc.duplicate_guard = !no_guard;
      const auto result = rrrcf::reduce(data.points, rc);
      rrrcf::save_forest(result, red_out);
      if (!red_log.empty()) {
        std::string log = "point_id,displacement,threshold,accepted,initial_subset\n";
        for (const auto& e : result.disp_log) {
          log += std::to_string(e.point_id) + "," + fmt(e.displacement) + "," +
                 (e.threshold ? fmt(*e.threshold) : std::string()) + "," + (e.accepted ? "1" : "0") + "," +
                 (e.initial_subset ? "1" : "0") + "\n";
        }
        rrrcf::write_file(red_log, log);
      }
      if (!red_featured.empty()) {
        rrrcf::save_dataset(result.featured, red_featured, common.format_for(red_featured));
      }
      const auto& st = result.stats;
      std::cout << "total=" << st.total << " featured=" << st.featured << " rejected=" << st.rejected
                << " reduction_percentage=" << fmt(st.reduction_percentage)
                << " detection_threshold=" << fmt(result.detection_threshold)
                << " rolling_threshold=" << fmt(result.final_rolling_threshold) << "\n";
    } else if (*score) {
      auto det = rrrcf::load_forest(score_model, rrrcf::DetectorOptions{score_fixed}, score_threshold);
      const auto x = parse_point_arg(score_point);
      require_dim(det, x.size(), "--point");
      const auto v = det.score_point(x);
      std::cout << "disp_value=" << fmt(v.disp_value) << " threshold=" << fmt(v.threshold)
                << " is_ood=" << (v.is_ood ? "true" : "false") << "\n";
    } else if (*stream) {
      auto det = rrrcf::load_forest(stream_model, rrrcf::DetectorOptions{stream_fixed}, stream_threshold);
      const auto data = load_input(common, stream_in);
      if (data.size() > 0) require_dim(det, data.dim, stream_in);
      std::size_t flagged = 0, bad_rows = 0;
      with_output(stream_out, [&](std::ostream& os) {
        os << "index,disp_value,threshold,is_ood\n";
        for (const auto& sv : det.process_stream(data.points)) {
          if (!sv.ok()) {
            std::cerr << "rrrcf: error: row " << sv.index << ": " << sv.error << "\n";
            ++bad_rows;
            continue;
          }
          const auto& v = *sv.verdict;
          flagged += v.is_ood ? 1 : 0;
          os << sv.index << ',' << fmt(v.disp_value) << ',' << fmt(v.threshold) << ',' << (v.is_ood ? 1 : 0)
             << '\n';
        }
      });
      std::cerr << "scored " << data.size() - bad_rows << " points, " << flagged << " flagged\n";
      if (bad_rows > 0) return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "rrrcf: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
