// core/include/trajloc/mobility/dataset.hpp

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
#include "trajloc/mobility/mobility.hpp"
#include "trajloc/radio/field.hpp"

namespace trajloc {

// An m x t matrix of normalized RSSI features in [0, 1], AP-major, plus an
// optional endpoint label and an optional ground-truth path.  The path is
// kept for evaluation only; no training operation reads it.
struct Trajectory {
  std::size_t m = 0;
  std::size_t t = 0;
  std::vector<float> features;  // features[ap * t + j]
  std::optional<Point2> label;
  std::vector<Point2> path;  // empty when absent

  float& at(std::size_t ap, std::size_t j) { return features[ap * t + j]; }
  float at(std::size_t ap, std::size_t j) const { return features[ap * t + j]; }
  std::span<const float> row(std::size_t ap) const {
    return {features.data() + ap * t, t};
  }
};

// Homogeneous collection of trajectories (the roles of C, C-tilde, C').
struct TrajectoryDataset {
  std::size_t m = 0;
  std::size_t t = 0;
  bool labeled = false;
  std::vector<Trajectory> items;

  std::size_t size() const { return items.size(); }

  // Checks homogeneity, the labeled flag, feature range and the
  // label-matches-path-end rule; throws DataError on violation.
  void validate() const;
};

// Feature construction parameters: per-sample dBm noise and the affine
// [lo, hi] -> [0, 1] normalization window.
struct FeatureConfig {
  double noise_var = 9.0;   // Gaussian noise variance, dBm^2
  double norm_lo = -100.0;  // maps to 0
  double norm_hi = -20.0;   // maps to 1

  void validate() const;
};

// Looks up RSSI along `path`, adds Normal(0, noise_var) per (point, AP),
// then maps [lo, hi] to [0, 1] with clipping.  Out-of-range sentinels map
// to exactly 0.  No label is attached.
Trajectory attach_features(const std::vector<Point2>& path,
                           const RadioField& field, const FeatureConfig& fc,
                           std::uint64_t seed);

struct DatasetGenConfig {
  MobilityConfig mobility;
  FeatureConfig features;
  bool labeled = false;
  bool keep_paths = true;
};

// `count` independent trajectories; item i is generated entirely from
// hash_combine(seed, i), so generation order and worker count do not change
// the result.  Labels (when requested) are the snapped path endpoints.
TrajectoryDataset gen_dataset(const RadioField& field,
                              const DatasetGenConfig& cfg, std::size_t count,
                              std::uint64_t seed);

void write_dataset(const TrajectoryDataset& ds, const std::string& path);
TrajectoryDataset read_dataset(const std::string& path);

// Copy without labels (paths are kept).
TrajectoryDataset strip_labels(const TrajectoryDataset& ds);

}  // namespace trajloc
