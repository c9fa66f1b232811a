// core/include/trajloc/augment/augment.hpp

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
#include <utility>

#include "trajloc/mobility/dataset.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

// Knobs for the stochastic augmentations.  additive_alpha and scale_beta
// follow the N(0, alpha) / U(-beta, beta) conventions: alpha is a variance,
// beta a half-width.
struct AugmentConfig {
  double additive_alpha = 0.2;   // Gaussian variance, normalized units
  double scale_beta = 0.1;       // uniform half-width for the (1 + eps) factor
  std::size_t mask_len_min = 3;  // masked segment length bounds (inclusive)
  std::size_t mask_len_max = 9;
  std::size_t mask_segments = 1;  // (row, segment) draws per call
  double entry_prob = 0.5;        // per-entry selection for additive/scale
  double op_prob = 0.5;           // per-op selection when composing

  void validate(std::size_t t) const;
};

// Temporal reversal: out[i][j] = in[i][t-1-j].  Any ground-truth path is
// reversed with the features; labels are dropped (they never flow through
// augmentation).
Trajectory flip(const Trajectory& x);

// Adds eps ~ Normal(0, alpha) to entries selected with entry_prob each.
// Output is clipped to [0, 1] unless clip is false (test hook for moment
// checks on the raw perturbation).
Trajectory additive(const Trajectory& x, double alpha, double entry_prob,
                    Rng& rng, bool clip = true);

// Multiplies selected entries by (1 + eps), eps ~ Uniform(-beta, beta).
Trajectory scale(const Trajectory& x, double beta, double entry_prob, Rng& rng,
                 bool clip = true);

// Replaces mask_segments random (AP row, segment) stretches with the value
// just left of the segment, or just right of it when the segment starts at
// j = 0.  Draws whose segment would span a whole row are skipped.
Trajectory mask(const Trajectory& x, const AugmentConfig& cfg, Rng& rng);

// Cuts a length-(2t-1) trajectory at its middle column and flips the second
// half, yielding two length-t trajectories that share their final column
// (the meeting point).  Ground-truth paths are sliced onto the halves, the
// second half's reversed; labels are not propagated.  Throws DataError for
// an even temporal length.
std::pair<Trajectory, Trajectory> cut_and_flip(const Trajectory& x);

// Stage-1 positive view: applies each of {flip, additive, scale, mask} with
// probability op_prob, forcing one uniformly at random if none was chosen.
Trajectory stage1_view(const Trajectory& x, const AugmentConfig& cfg,
                       Rng& rng);

}  // namespace trajloc
