// core/include/trajloc/neural/schedule.hpp

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

namespace trajloc {

// Cyclic cosine-decay schedule: linear warmup from warmup_start_lr to
// base_lr over warmup_epochs, one cosine decay from base_lr to min_decay_lr
// over initial_decay_epochs, then repeating cosine cycles of length
// restart_interval from restart_lr down to min_decay_lr.
struct LrSchedule {
  double base_lr = 0.01;
  std::int64_t warmup_epochs = 40;
  double warmup_start_lr = 0.001;
  std::int64_t initial_decay_epochs = 100;
  double min_decay_lr = 0.0001;
  std::int64_t restart_interval = 30;
  double restart_lr = 0.001;

  void validate() const;
};

double lr_at(std::int64_t epoch, const LrSchedule& s);

}  // namespace trajloc
