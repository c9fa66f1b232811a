// core/src/schedule.cpp

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

#include "trajloc/neural/schedule.hpp"

#include <cmath>
#include <numbers>

#include "trajloc/errors.hpp"

namespace trajloc {

void LrSchedule::validate() const {
  // Zero is allowed so a frozen "lr == 0" run is expressible.
  if (base_lr < 0.0 || warmup_start_lr < 0.0 || min_decay_lr < 0.0 ||
      restart_lr < 0.0) {
    throw ConfigError("schedule: learning rates must be >= 0");
  }
  if (warmup_epochs < 0 || initial_decay_epochs < 1 || restart_interval < 1) {
    throw ConfigError("schedule: epoch counts must be positive");
  }
  if (warmup_start_lr > base_lr) {
    throw ConfigError("schedule: warmup_start_lr must not exceed base_lr");
  }
  if (min_decay_lr > restart_lr) {
    throw ConfigError("schedule: min_decay_lr must not exceed restart_lr");
  }
}

namespace {
double cosine(double from, double to, double frac) {
  return to + (from - to) * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}
}  // namespace

double lr_at(std::int64_t epoch, const LrSchedule& s) {
  s.validate();
  if (epoch < s.warmup_epochs) {
    const double frac =
        static_cast<double>(epoch) / static_cast<double>(s.warmup_epochs);
    return s.warmup_start_lr + (s.base_lr - s.warmup_start_lr) * frac;
  }
  const std::int64_t decay_end = s.warmup_epochs + s.initial_decay_epochs;
  if (epoch <= decay_end) {
    const double frac = static_cast<double>(epoch - s.warmup_epochs) /
                        static_cast<double>(s.initial_decay_epochs);
    return cosine(s.base_lr, s.min_decay_lr, frac);
  }
  // Restart cycles begin the epoch after the initial decay bottoms out;
  // each cycle touches restart_lr at its first epoch and min_decay_lr at
  // its last.
  const std::int64_t k = (epoch - decay_end - 1) % s.restart_interval;
  if (s.restart_interval == 1) {
    return s.restart_lr;
  }
  const double frac =
      static_cast<double>(k) / static_cast<double>(s.restart_interval - 1);
  return cosine(s.restart_lr, s.min_decay_lr, frac);
}

}  // namespace trajloc
