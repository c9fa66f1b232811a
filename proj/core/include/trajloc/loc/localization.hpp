// core/include/trajloc/loc/localization.hpp

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
#include <string>
#include <vector>

#include "trajloc/geometry.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/ssl/ssl.hpp"

namespace trajloc {

struct LocConfig {
  bool finetune_encoders = true;  // FULL fine-tunes F1 and F2 end to end
  std::int64_t epochs = 200;
  std::int64_t batch_size = 128;
  double lr = 1e-3;  // Adam
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  ArchConfig arch;
  std::uint64_t seed = 0;
  // Inference clamp bounds; predictions are clipped into the field.
  double field_width = 0.0;
  double field_height = 0.0;

  void validate() const;
};

// F1 -> F2 -> L in one store ("f1.", "f2.", "loc.").
struct LocModel {
  ArchConfig arch;
  std::int64_t ap_count = 0;
  double field_width = 0.0;
  double field_height = 0.0;
  ParamStore<float> store;
  Sequential<float> f1;
  Sequential<float> f2;
  Sequential<float> loc;

  // Fresh random initialization of all three networks (the NCP baseline
  // starts here).
  static LocModel create(const ArchConfig& arch, std::int64_t ap_count,
                         std::uint64_t seed);
  // F1/F2 initialized from stage checkpoints, L random.
  static LocModel from_pretrained(const ArchConfig& arch,
                                  std::int64_t ap_count,
                                  const std::string& f1_ckpt,
                                  const std::string& f2_ckpt,
                                  std::uint64_t seed);
  static LocModel load(const std::string& ckpt_path, const ArchConfig& arch,
                       std::int64_t ap_count);
  void save(const std::string& ckpt_path);

  // Deterministic inference; output clamped to the stored field bounds.
  Point2 predict(const Trajectory& x) const;
  std::vector<Point2> predict_batch(const TrajectoryDataset& ds) const;
};

struct EvalReport {
  std::vector<double> errors_m;  // per item, input order
  double cdf68 = 0.0;
  double cdf95 = 0.0;
  std::size_t count = 0;
};

// Minimizes mean squared error between L(F2(F1(X))) and the labels.
// Encoders are updated iff cfg.finetune_encoders; otherwise they run in
// eval mode and only L trains.  The model is modified in place.
void train_loc(LocModel& model, const TrajectoryDataset& train_set,
               const LocConfig& cfg, std::vector<EpochStats>* trace = nullptr);

// Euclidean position errors with nearest-rank CDF68/CDF95.
EvalReport evaluate(const LocModel& model, const TrajectoryDataset& test_set);

EvalReport evaluate_errors(std::vector<double> errors);

// Mean label of the k nearest training items by Euclidean distance over
// flattened m x t features.  Fills `predictions` (input order) when given.
EvalReport knn_baseline(const TrajectoryDataset& train,
                        const TrajectoryDataset& test, std::size_t k,
                        std::vector<Point2>* predictions = nullptr);

// Per-item CSV: index, true_x, true_y, pred_x, pred_y, err_m, with a
// trailing summary comment line.
void write_eval_csv(const std::string& path, const TrajectoryDataset& test,
                    const std::vector<Point2>& predictions,
                    const EvalReport& report);

}  // namespace trajloc
