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

#include "rrrcf/detector.hpp"

#include <cmath>

#include "rrrcf/errors.hpp"

namespace rrrcf {

Detector::Detector(Forest forest, double threshold, DetectorOptions options)
    : forest_(std::move(forest)), threshold_(threshold), options_(options) {
  if (!std::isfinite(threshold_)) throw ConfigError("detection threshold must be finite");
  if (forest_.size() == 0) throw ConfigError("detector needs a forest with at least one point");
}

Verdict Detector::score_point(PointView x) {
  validate_point(x, forest_.dim());
  const std::uint64_t nonce = options_.fixed_nonce ? 0 : calls_;
  const auto records = forest_.probe(x, nonce);
  scratch_.resize(records.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    const ProbeRecord& r = records[t];
    if (r.mc_deleted != r.mc_before) throw Error("deletion did not restore the model complexity");
    scratch_[t] = static_cast<double>(r.mc_inserted - r.mc_deleted);
  }
  Verdict v;
  v.disp_value = forest_.aggregate(scratch_);
  v.threshold = threshold_;
  v.is_ood = v.disp_value >= threshold_;
  v.sequence_index = static_cast<std::size_t>(calls_);
  ++calls_;
  return v;
}

std::vector<StreamVerdict> Detector::process_stream(std::span<const Point> stream) {
  std::vector<StreamVerdict> out;
  out.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    StreamVerdict sv;
    sv.index = i;
    try {
      Verdict v = score_point(stream[i]);
      v.sequence_index = i;
      sv.verdict = v;
    } catch (const Error& e) {
      sv.error = e.what();
    }
    out.push_back(std::move(sv));
  }
  return out;
}

}  // namespace rrrcf
