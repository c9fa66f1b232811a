// core/src/mobility.cpp

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

#include "trajloc/mobility/mobility.hpp"

#include <cmath>
#include <numbers>

#include "trajloc/errors.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

void MobilityConfig::validate() const {
  if (speed_min <= 0.0 || speed_min > speed_max) {
    throw ConfigError("mobility: need 0 < speed_min <= speed_max");
  }
  if (step_period <= 0.0) {
    throw ConfigError("mobility: step_period must be > 0");
  }
  if (t < 2) {
    throw ConfigError("mobility: t must be >= 2");
  }
  if (levy_alpha <= 0.0) {
    throw ConfigError("mobility: levy_alpha must be > 0");
  }
  if (flight_min <= 0.0) {
    throw ConfigError("mobility: flight_min must be > 0");
  }
}

namespace {

// Pareto(alpha, xm) truncated at `cap` by resampling.
double truncated_pareto(Rng& rng, double alpha, double xm, double cap) {
  for (int tries = 0; tries < 64; ++tries) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double len = xm / std::pow(u, 1.0 / alpha);
    if (len <= cap) {
      return len;
    }
  }
  return cap;
}

struct Walker {
  Point2 pos;
  double heading = 0.0;  // radians
  double flight_left = 0.0;
  double speed = 0.0;
};

}  // namespace

std::vector<Point2> gen_path(const RadioField& field,
                             const MobilityConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const double width = field.width();
  const double height = field.height();
  const double max_step = cfg.speed_max * cfg.step_period;
  if (width <= 2.0 * max_step || height <= 2.0 * max_step) {
    throw ConfigError("mobility: field must span at least two steps per axis");
  }
  const double diagonal = std::hypot(width, height);

  Rng rng(seed);
  Walker w;
  w.pos = {rng.uniform(0.0, width), rng.uniform(0.0, height)};

  const auto new_flight = [&] {
    w.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    w.flight_left =
        truncated_pareto(rng, cfg.levy_alpha, cfg.flight_min, diagonal);
    w.speed = rng.uniform(cfg.speed_min, cfg.speed_max);
  };
  new_flight();

  std::vector<Point2> path;
  path.reserve(cfg.t);
  path.push_back(field.snap(w.pos));

  for (std::size_t i = 1; i < cfg.t; ++i) {
    const double step = w.speed * cfg.step_period;
    // Bounce the heading off any wall the step would cross, then take the
    // full step; the field is larger than a step, so one flip per axis
    // suffices.
    double dx = std::cos(w.heading);
    double dy = std::sin(w.heading);
    if (w.pos.x + step * dx < 0.0 || w.pos.x + step * dx > width) {
      dx = -dx;
    }
    if (w.pos.y + step * dy < 0.0 || w.pos.y + step * dy > height) {
      dy = -dy;
    }
    w.heading = std::atan2(dy, dx);
    w.pos.x += step * dx;
    w.pos.y += step * dy;
    path.push_back(field.snap(w.pos));

    w.flight_left -= step;
    if (w.flight_left <= 0.0) {
      new_flight();
    }
  }
  return path;
}

}  // namespace trajloc
