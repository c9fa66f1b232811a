// core/src/augment.cpp

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

#include "trajloc/augment/augment.hpp"

#include <algorithm>
#include <cmath>

#include "trajloc/errors.hpp"

namespace trajloc {

void AugmentConfig::validate(std::size_t t) const {
  if (additive_alpha < 0.0) {
    throw ConfigError("augment: additive_alpha must be >= 0");
  }
  if (scale_beta < 0.0 || scale_beta >= 1.0) {
    throw ConfigError("augment: scale_beta must be in [0, 1)");
  }
  if (mask_len_min < 1 || mask_len_min > mask_len_max || mask_len_max >= t) {
    throw ConfigError("augment: need 1 <= mask_len_min <= mask_len_max < t");
  }
  if (entry_prob < 0.0 || entry_prob > 1.0 || op_prob < 0.0 || op_prob > 1.0) {
    throw ConfigError("augment: probabilities must be in [0, 1]");
  }
}

Trajectory flip(const Trajectory& x) {
  Trajectory out = x;
  out.label.reset();  // labels never flow through augmentation
  for (std::size_t i = 0; i < x.m; ++i) {
    for (std::size_t j = 0; j < x.t; ++j) {
      out.at(i, j) = x.at(i, x.t - 1 - j);
    }
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

Trajectory additive(const Trajectory& x, double alpha, double entry_prob,
                    Rng& rng, bool clip) {
  Trajectory out = x;
  const double std_dev = std::sqrt(alpha);
  for (float& v : out.features) {
    const bool selected = rng.uniform() < entry_prob;
    const double eps = std_dev * rng.gaussian();  // keep streams aligned
    if (selected && alpha > 0.0) {
      const double perturbed = v + eps;
      v = static_cast<float>(clip ? std::clamp(perturbed, 0.0, 1.0)
                                  : perturbed);
    }
  }
  return out;
}

Trajectory scale(const Trajectory& x, double beta, double entry_prob, Rng& rng,
                 bool clip) {
  Trajectory out = x;
  for (float& v : out.features) {
    const bool selected = rng.uniform() < entry_prob;
    const double eps = rng.uniform(-beta, beta);
    if (selected && beta > 0.0) {
      const double scaled = v * (1.0 + eps);
      v = static_cast<float>(clip ? std::clamp(scaled, 0.0, 1.0) : scaled);
    }
  }
  return out;
}

Trajectory mask(const Trajectory& x, const AugmentConfig& cfg, Rng& rng) {
  cfg.validate(x.t);
  Trajectory out = x;
  for (std::size_t seg = 0; seg < cfg.mask_segments; ++seg) {
    const std::size_t row = rng.below(x.m);
    const std::size_t len =
        cfg.mask_len_min + rng.below(cfg.mask_len_max - cfg.mask_len_min + 1);
    if (len >= x.t) {
      continue;  // whole row, no fill source
    }
    const std::size_t start = rng.below(x.t - len + 1);
    const float fill =
        start > 0 ? out.at(row, start - 1) : out.at(row, start + len);
    for (std::size_t j = start; j < start + len; ++j) {
      out.at(row, j) = fill;
    }
  }
  return out;
}

std::pair<Trajectory, Trajectory> cut_and_flip(const Trajectory& x) {
  if (x.t < 3 || x.t % 2 == 0) {
    throw DataError("cut_and_flip: temporal length must be odd and >= 3, got " +
                    std::to_string(x.t));
  }
  const std::size_t t_out = (x.t + 1) / 2;

  const auto slice = [&](std::size_t from) {
    Trajectory z;
    z.m = x.m;
    z.t = t_out;
    z.features.resize(z.m * z.t);
    for (std::size_t i = 0; i < x.m; ++i) {
      for (std::size_t j = 0; j < t_out; ++j) {
        z.at(i, j) = x.at(i, from + j);
      }
    }
    if (!x.path.empty()) {
      z.path.assign(x.path.begin() + static_cast<std::ptrdiff_t>(from),
                    x.path.begin() + static_cast<std::ptrdiff_t>(from + t_out));
    }
    return z;
  };

  Trajectory z1 = slice(0);
  Trajectory z2_flipped = flip(slice(t_out - 1));
  return {std::move(z1), std::move(z2_flipped)};
}

Trajectory stage1_view(const Trajectory& x, const AugmentConfig& cfg,
                       Rng& rng) {
  cfg.validate(x.t);
  bool use_flip = rng.uniform() < cfg.op_prob;
  bool use_additive = rng.uniform() < cfg.op_prob;
  bool use_scale = rng.uniform() < cfg.op_prob;
  bool use_mask = rng.uniform() < cfg.op_prob;
  if (!use_flip && !use_additive && !use_scale && !use_mask) {
    switch (rng.below(4)) {
      case 0: use_flip = true; break;
      case 1: use_additive = true; break;
      case 2: use_scale = true; break;
      default: use_mask = true; break;
    }
  }
  Trajectory out = x;
  if (use_flip) {
    out = flip(out);
  }
  if (use_additive) {
    out = additive(out, cfg.additive_alpha, cfg.entry_prob, rng);
  }
  if (use_scale) {
    out = scale(out, cfg.scale_beta, cfg.entry_prob, rng);
  }
  if (use_mask) {
    out = mask(out, cfg, rng);
  }
  return out;
}

}  // namespace trajloc
