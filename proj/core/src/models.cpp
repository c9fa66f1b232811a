// core/src/models.cpp

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

#include "trajloc/neural/models.hpp"

#include "trajloc/errors.hpp"

namespace trajloc {

void ArchConfig::validate() const {
  if (conv_channels < 1 || conv_blocks < 1 || kernel < 1 || traj_dim < 1 ||
      h1_hidden < 1 || f2_hidden < 1 || end_dim < 1 || h2_hidden < 1 ||
      loc_hidden < 1) {
    throw ConfigError("arch: all widths must be >= 1");
  }
  if (kernel % 2 == 0) {
    throw ConfigError("arch: kernel must be odd so padding preserves length");
  }
}

}  // namespace trajloc
