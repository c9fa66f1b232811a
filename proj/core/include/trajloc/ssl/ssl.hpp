// core/include/trajloc/ssl/ssl.hpp

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
#include <span>
#include <string>
#include <vector>

#include "trajloc/augment/augment.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/neural/checkpoint.hpp"
#include "trajloc/neural/models.hpp"
#include "trajloc/neural/schedule.hpp"

namespace trajloc {

// Shared stage-1/stage-2 training knobs.
struct StageConfig {
  std::int64_t epochs = 100;
  std::int64_t batch_size = 256;
  double momentum = 0.9;  // SGD momentum
  LrSchedule schedule;
  AugmentConfig augment;
  ArchConfig arch;
  std::uint64_t seed = 0;
  // Stage 2 only: layer fresh additive/scale/mask noise on both halves
  // every epoch instead of caching the frozen-F1 embeddings.
  bool reaugment_long = false;
  std::string trace_csv;  // loss trace output; empty = no trace

  void validate() const;
};

struct EpochStats {
  std::int64_t epoch = 0;
  double mean_loss = 0.0;
  double embed_std = 0.0;
  double lr = 0.0;
};

void write_trace_csv(const std::string& path,
                     const std::vector<EpochStats>& trace);

// F1 + h1 over one store (tensor prefixes "f1." / "h1.").
struct Stage1Model {
  ArchConfig arch;
  std::int64_t ap_count = 0;
  ParamStore<float> store;
  Sequential<float> f1;
  Sequential<float> h1;

  static Stage1Model create(const ArchConfig& arch, std::int64_t ap_count,
                            std::uint64_t seed);
  static Stage1Model load(const std::string& ckpt_path, const ArchConfig& arch,
                          std::int64_t ap_count);
  void save(const std::string& ckpt_path) const { save_checkpoint(store, ckpt_path); }
};

// F2 + h2 over one store ("f2." / "h2.").  F1 lives in its own store and
// stays frozen during stage 2.
struct Stage2Model {
  ArchConfig arch;
  ParamStore<float> store;
  Sequential<float> f2;
  Sequential<float> h2;

  static Stage2Model create(const ArchConfig& arch, std::uint64_t seed);
  static Stage2Model load(const std::string& ckpt_path,
                          const ArchConfig& arch);
  void save(const std::string& ckpt_path) const { save_checkpoint(store, ckpt_path); }
};

// Copies items [idx...] into a [B, m, t] batch tensor.
Tensor<float> gather_features(const TrajectoryDataset& ds,
                              std::span<const std::size_t> idx);
Tensor<float> to_batch(const Trajectory& tr);

// Stage 1: SimSiam over (X, stage1_view(X)) pairs.  Labels in `c`, if any,
// are ignored.  Returns the trained model; appends per-epoch stats to
// `trace` when non-null.
Stage1Model train_stage1(const TrajectoryDataset& c, const StageConfig& cfg,
                         std::vector<EpochStats>* trace = nullptr);

// Stage 2: SimSiam over cut_and_flip halves of length-(2t-1) sequences.
// Marks every f1 tensor frozen and leaves them bitwise untouched (F1 runs
// in eval mode only).  Throws DataError if c_long's temporal length is
// even.
Stage2Model train_stage2(const TrajectoryDataset& c_long, Stage1Model& f1,
                         const StageConfig& cfg,
                         std::vector<EpochStats>* trace = nullptr);

// Inference-mode embeddings (batchnorm running stats, batch-size
// independent).
Tensor<float> embed_trajectory(const Stage1Model& f1, const Trajectory& x);
Tensor<float> embed_endpoint(const Stage1Model& f1, const Stage2Model& f2,
                             const Trajectory& x);

// Batched variants; row b is the embedding of ds.items[idx[b]].
Tensor<float> embed_trajectories(const Stage1Model& f1,
                                 const TrajectoryDataset& ds,
                                 std::span<const std::size_t> idx);
Tensor<float> embed_endpoints(const Stage1Model& f1, const Stage2Model& f2,
                              const TrajectoryDataset& ds,
                              std::span<const std::size_t> idx);

}  // namespace trajloc
