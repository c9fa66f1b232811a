// core/include/trajloc/labeling/labeling.hpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajloc/geometry.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/ssl/ssl.hpp"

namespace trajloc {

enum class LabelWeighting { kSimilarityProportional, kUniform };

struct PseudoLabelConfig {
  double delta = 0.9;  // cosine-similarity threshold, in (0, 1]
  LabelWeighting weighting = LabelWeighting::kSimilarityProportional;
  // Floor weight so a barely-admitted candidate still contributes.
  double weight_floor = 0.01;

  void validate() const;
};

// One labeled anchor: a normalized endpoint embedding and its label.
struct Anchor {
  std::vector<float> embedding;  // unit norm
  Point2 label;
};

struct LabelingReport {
  std::size_t total = 0;
  std::size_t labeled = 0;
  std::size_t dropped = 0;
  double drop_rate = 0.0;
  // Per input item, aligned with the input dataset.
  std::vector<std::size_t> candidate_counts;
  std::vector<double> max_similarities;
  std::vector<std::optional<Point2>> labels;
  std::vector<std::optional<double>> errors_m;  // needs ground-truth paths
  // Pseudo-label position error percentiles, when ground truth is present.
  std::optional<double> err_cdf68;
  std::optional<double> err_cdf95;
};

// Builds unit-norm anchors from a labeled dataset via embed_endpoint.
std::vector<Anchor> build_anchors(const TrajectoryDataset& c_tilde,
                                  const Stage1Model& f1,
                                  const Stage2Model& f2);

// Candidates are anchors with cos >= delta against the (normalized)
// embedding.  Returns the weighted average of candidate labels, or nullopt
// when no anchor clears the threshold.  Weights under similarity-
// proportional: (cos - delta) / (1 - delta) + weight_floor, collapsing to
// the floor (uniform) when delta == 1.
std::optional<Point2> pseudo_label_one(std::span<const float> embedding,
                                       std::span<const Anchor> anchors,
                                       const PseudoLabelConfig& cfg,
                                       std::size_t* candidates = nullptr,
                                       double* max_sim = nullptr);

// Labels every item of `c` against `c_tilde`'s anchors; non-dropped items
// form C' (labeled, ground-truth paths removed).  When `c` carries paths,
// the report includes the pseudo-label position error and its CDF68/CDF95.
std::pair<TrajectoryDataset, LabelingReport> build_refined(
    const TrajectoryDataset& c, const TrajectoryDataset& c_tilde,
    const Stage1Model& f1, const Stage2Model& f2,
    const PseudoLabelConfig& cfg);

// Per-item CSV: index, candidates, sim_max, label_x, label_y, [err_m].
// Dropped items keep their row with empty label columns.
void write_label_report_csv(const std::string& path,
                            const LabelingReport& report);

// Nearest-rank percentile: the ceil(pct/100 * n)-th smallest value.
// pct is an integer in (0, 100].
double nearest_rank_percentile(std::vector<double> values, int pct);

}  // namespace trajloc
