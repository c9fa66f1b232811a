// core/include/trajloc/neural/checkpoint.hpp

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
#include <map>
#include <optional>
#include <string>

#include "trajloc/neural/param_store.hpp"

namespace trajloc {

// Optimizer tensors carried alongside the parameters so training can
// resume: "sgd" stores velocity under v:<param>, "adam" stores moments
// under m:<param> / v:<param>.
struct OptimizerState {
  std::string kind;  // "sgd" or "adam"
  std::int64_t step = 0;
  std::map<std::string, Tensor<float>> tensors;
};

// Writes the store (values, trainable/frozen flags) and optional optimizer
// state to `path` in the WSSL format.
void save_checkpoint(const ParamStore<float>& store, const std::string& path,
                     const OptimizerState* optimizer = nullptr);

struct Checkpoint {
  ParamStore<float> store;
  std::optional<OptimizerState> optimizer;
};

// Reads a checkpoint into a fresh store.
Checkpoint load_checkpoint(const std::string& path);

// Copies values and flags from a checkpoint file into an already-built
// store; every tensor must exist with an identical shape on both sides.
// Throws DimError naming the first mismatched tensor.
std::optional<OptimizerState> load_checkpoint_into(ParamStore<float>& store,
                                                   const std::string& path);

// Copies every src tensor whose name starts with `prefix` into dst.  The
// destination tensor must exist with an identical shape; throws DimError
// naming the first mismatch.
void copy_params(ParamStore<float>& dst, const ParamStore<float>& src,
                 const std::string& prefix);

// FNV-1a over every tensor's bytes in name order; used by the stage-2
// freeze contract tests.
std::uint64_t params_hash(const ParamStore<float>& store,
                          const std::string& prefix = "");

}  // namespace trajloc
