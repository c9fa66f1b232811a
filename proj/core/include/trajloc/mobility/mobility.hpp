// core/include/trajloc/mobility/mobility.hpp

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
#include <vector>

#include "trajloc/geometry.hpp"
#include "trajloc/radio/field.hpp"

namespace trajloc {

// Levy-walk parameters.  Flight lengths follow a Pareto tail with exponent
// levy_alpha, truncated at the field diagonal; headings are uniform and the
// walker never pauses (one step per step_period).
struct MobilityConfig {
  double speed_min = 0.7;   // m/s
  double speed_max = 1.3;   // m/s
  double step_period = 1.0; // s
  std::size_t t = 15;       // points per trajectory
  double levy_alpha = 1.6;  // flight-length tail exponent
  double flight_min = 1.0;  // Pareto scale (minimum flight length), m

  void validate() const;
};

// One trajectory as t positions, step_period apart, starting uniformly at
// random in the field.  Long flights are walked step by step; headings
// reflect specularly off the field boundary before a step is taken, so
// every consecutive displacement is a full speed * step_period.  Output
// positions are snapped to the field grid.
std::vector<Point2> gen_path(const RadioField& field, const MobilityConfig& cfg,
                             std::uint64_t seed);

}  // namespace trajloc
