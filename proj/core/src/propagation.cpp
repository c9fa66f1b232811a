// core/src/propagation.cpp

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

#include "trajloc/radio/propagation.hpp"

#include <cmath>
#include <string>

#include "trajloc/errors.hpp"

namespace trajloc {

void PropagationParams::validate() const {
  if (d0 <= 0.0) {
    throw ConfigError("propagation: d0 must be > 0");
  }
  if (n <= 0.0) {
    throw ConfigError("propagation: path-loss exponent n must be > 0");
  }
  if (sigma < 0.0) {
    throw ConfigError("propagation: sigma must be >= 0");
  }
  if (d_f <= d0) {
    throw ConfigError("propagation: d_f must exceed d0");
  }
}

double path_loss(double d, const PropagationParams& p, double chi) {
  if (d <= 0.0) {
    throw DataError("path_loss: distance must be > 0, got " +
                    std::to_string(d));
  }
  return p.pl_d0 + 10.0 * p.n * std::log10(d / p.d0) + chi;
}

float rssi_from_ap(Point2 ap_pos, Point2 q, const PropagationParams& p,
                   double chi) {
  const double d = distance(ap_pos, q);
  if (d > p.d_f) {
    return kOutOfRange;
  }
  return static_cast<float>(p.tx_power - path_loss(std::max(d, p.d0), p, chi));
}

float rssi_from_ap(Point2 ap_pos, Point2 q, const PropagationParams& p,
                   Rng& rng) {
  const double chi = p.sigma * rng.gaussian();
  return rssi_from_ap(ap_pos, q, p, chi);
}

}  // namespace trajloc
