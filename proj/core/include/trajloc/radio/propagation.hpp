// core/include/trajloc/radio/propagation.hpp

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
#include <limits>

#include "trajloc/geometry.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

// Log-normal shadowing model parameters.  Only n, sigma and d_f matter to
// the learning pipeline; pl_d0, d0 and tx_power shift the absolute dBm
// scale, which feature normalization removes again.
struct PropagationParams {
  double pl_d0 = 40.0;     // path loss at reference distance, dB
  double d0 = 1.0;         // reference distance, m
  double n = 4.0;          // path-loss exponent
  double sigma = 1.0;      // shadowing std dev, dB
  double d_f = 30.0;       // maximum transmission range, m
  double tx_power = 20.0;  // transmit power, dBm

  void validate() const;  // throws ConfigError on a bad combination
};

// Reserved "no signal" code for receivers beyond d_f.  Stored as +inf so it
// can never collide with a real dBm value.
inline constexpr float kOutOfRange = std::numeric_limits<float>::infinity();

inline bool is_out_of_range(float rssi) {
  return rssi == std::numeric_limits<float>::infinity();
}

// Path loss in dB at distance d with shadowing draw chi:
//   pl_d0 + 10 n log10(d / d0) + chi.
// Throws DataError for d <= 0.
double path_loss(double d, const PropagationParams& p, double chi);

// RSSI observed at q from an AP at ap_pos, or kOutOfRange beyond d_f.
// chi is the caller-supplied shadowing draw; distances below d0 are clamped
// to d0 before the log term.
float rssi_from_ap(Point2 ap_pos, Point2 q, const PropagationParams& p,
                   double chi);

// Same, drawing chi ~ Normal(0, sigma^2) from rng.  The draw is consumed
// even when sigma == 0, so call sequences stay aligned.
float rssi_from_ap(Point2 ap_pos, Point2 q, const PropagationParams& p,
                   Rng& rng);

}  // namespace trajloc
