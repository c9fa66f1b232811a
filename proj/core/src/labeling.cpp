// core/src/labeling.cpp

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

#include "trajloc/labeling/labeling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "trajloc/errors.hpp"
#include "trajloc/neural/loss.hpp"
#include "trajloc/parallel.hpp"

namespace trajloc {

void PseudoLabelConfig::validate() const {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ConfigError("labeling: delta must be in (0, 1]");
  }
  if (weight_floor <= 0.0) {
    throw ConfigError("labeling: weight_floor must be > 0");
  }
}

double nearest_rank_percentile(std::vector<double> values, int pct) {
  if (values.empty()) {
    throw ConfigError("percentile of an empty set");
  }
  if (pct < 1 || pct > 100) {
    throw ConfigError("percentile must be an integer in [1, 100]");
  }
  std::sort(values.begin(), values.end());
  // ceil(pct/100 * n) in integer arithmetic.
  const std::size_t n = values.size();
  const std::size_t rank =
      (static_cast<std::size_t>(pct) * n + 99) / 100;  // >= 1
  return values[rank - 1];
}

namespace {

std::vector<float> normalize_row(const float* src, std::size_t dim) {
  double norm = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    norm += static_cast<double>(src[i]) * src[i];
  }
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) {
    throw TrainError("labeling: zero-norm endpoint embedding");
  }
  std::vector<float> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    out[i] = static_cast<float>(src[i] / norm);
  }
  return out;
}

}  // namespace

std::vector<Anchor> build_anchors(const TrajectoryDataset& c_tilde,
                                  const Stage1Model& f1,
                                  const Stage2Model& f2) {
  if (!c_tilde.labeled) {
    throw DataError("build_anchors: anchor dataset must be labeled");
  }
  if (c_tilde.items.empty()) {
    throw ConfigError("build_anchors: empty anchor set");
  }
  std::vector<std::size_t> idx(c_tilde.items.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const Tensor<float> emb = embed_endpoints(f1, f2, c_tilde, idx);
  const auto dim = static_cast<std::size_t>(emb.dim(1));

  std::vector<Anchor> anchors(c_tilde.items.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    anchors[i].embedding =
        normalize_row(emb.ptr() + static_cast<std::int64_t>(i * dim), dim);
    anchors[i].label = *c_tilde.items[i].label;
  }
  return anchors;
}

std::optional<Point2> pseudo_label_one(std::span<const float> embedding,
                                       std::span<const Anchor> anchors,
                                       const PseudoLabelConfig& cfg,
                                       std::size_t* candidates,
                                       double* max_sim) {
  cfg.validate();
  if (anchors.empty()) {
    throw ConfigError("pseudo_label_one: empty anchor set");
  }
  const std::vector<float> q = normalize_row(embedding.data(), embedding.size());

  double best = -1.0;
  double weight_sum = 0.0;
  Point2 acc{0.0, 0.0};
  std::size_t n_candidates = 0;
  for (const Anchor& a : anchors) {
    double cos = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      cos += static_cast<double>(q[i]) * a.embedding[i];
    }
    cos = std::clamp(cos, -1.0, 1.0);
    best = std::max(best, cos);
    if (cos < cfg.delta) {
      continue;
    }
    ++n_candidates;
    double w = cfg.weight_floor;
    if (cfg.weighting == LabelWeighting::kSimilarityProportional &&
        cfg.delta < 1.0) {
      w += (cos - cfg.delta) / (1.0 - cfg.delta);
    }
    weight_sum += w;
    acc = acc + w * a.label;
  }
  if (candidates) {
    *candidates = n_candidates;
  }
  if (max_sim) {
    *max_sim = best;
  }
  if (n_candidates == 0) {
    return std::nullopt;
  }
  return (1.0 / weight_sum) * acc;
}

std::pair<TrajectoryDataset, LabelingReport> build_refined(
    const TrajectoryDataset& c, const TrajectoryDataset& c_tilde,
    const Stage1Model& f1, const Stage2Model& f2,
    const PseudoLabelConfig& cfg) {
  cfg.validate();
  if (c.m != c_tilde.m || c.t != c_tilde.t) {
    throw DataError("build_refined: C and C-tilde shapes differ (m " +
                    std::to_string(c.m) + " vs " + std::to_string(c_tilde.m) +
                    ", t " + std::to_string(c.t) + " vs " +
                    std::to_string(c_tilde.t) + ")");
  }
  const std::vector<Anchor> anchors = build_anchors(c_tilde, f1, f2);

  std::vector<std::size_t> idx(c.items.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const Tensor<float> emb = embed_endpoints(f1, f2, c, idx);
  const auto dim = static_cast<std::size_t>(emb.dim(1));

  LabelingReport report;
  report.total = c.items.size();
  report.candidate_counts.resize(report.total);
  report.max_similarities.resize(report.total);
  report.labels.resize(report.total);
  report.errors_m.resize(report.total);

  parallel_for(static_cast<std::int64_t>(report.total),
               [&](std::int64_t lo, std::int64_t hi) {
                 for (std::int64_t i = lo; i < hi; ++i) {
                   const auto u = static_cast<std::size_t>(i);
                   const std::span<const float> e(
                       emb.ptr() + i * static_cast<std::int64_t>(dim), dim);
                   report.labels[u] = pseudo_label_one(
                       e, anchors, cfg, &report.candidate_counts[u],
                       &report.max_similarities[u]);
                   if (report.labels[u] && !c.items[u].path.empty()) {
                     report.errors_m[u] =
                         distance(*report.labels[u], c.items[u].path.back());
                   }
                 }
               });

  TrajectoryDataset refined;
  refined.m = c.m;
  refined.t = c.t;
  refined.labeled = true;
  std::vector<double> errors;
  for (std::size_t i = 0; i < report.total; ++i) {
    if (!report.labels[i]) {
      continue;
    }
    Trajectory item = c.items[i];
    item.label = *report.labels[i];
    item.path.clear();  // pseudo-label need not match the true endpoint
    refined.items.push_back(std::move(item));
    if (report.errors_m[i]) {
      errors.push_back(*report.errors_m[i]);
    }
  }
  report.labeled = refined.items.size();
  report.dropped = report.total - report.labeled;
  report.drop_rate =
      report.total == 0
          ? 0.0
          : static_cast<double>(report.dropped) / static_cast<double>(report.total);
  if (!errors.empty()) {
    report.err_cdf68 = nearest_rank_percentile(errors, 68);
    report.err_cdf95 = nearest_rank_percentile(errors, 95);
  }
  return {std::move(refined), std::move(report)};
}

void write_label_report_csv(const std::string& path,
                            const LabelingReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw DataError("cannot write label report: " + path);
  }
  out << "index,candidates,sim_max,label_x,label_y,err_m\n";
  for (std::size_t i = 0; i < report.total; ++i) {
    out << i << ',' << report.candidate_counts[i] << ','
        << report.max_similarities[i] << ',';
    if (report.labels[i]) {
      out << report.labels[i]->x << ',' << report.labels[i]->y;
    } else {
      out << ',';
    }
    out << ',';
    if (report.errors_m[i]) {
      out << *report.errors_m[i];
    }
    out << '\n';
  }
}

}  // namespace trajloc
