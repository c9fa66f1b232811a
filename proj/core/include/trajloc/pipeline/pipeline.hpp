// core/include/trajloc/pipeline/pipeline.hpp

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

#include "trajloc/labeling/labeling.hpp"
#include "trajloc/loc/localization.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/pipeline/ini.hpp"
#include "trajloc/ssl/ssl.hpp"

namespace trajloc {

// Everything the end-to-end run needs, parsed from one INI file.  Unknown
// keys are rejected; [seeds] master, [output] dir and [labeling] delta are
// required, the rest defaults to the desk-scale preset.
struct PipelineConfig {
  double width = 30.0;
  double height = 30.0;
  double spacing = 0.5;
  std::size_t aps = 8;
  std::string ap_file;  // optional explicit coordinates
  PropagationParams propagation;

  MobilityConfig mobility;
  FeatureConfig features;
  std::size_t count_c = 5000;
  std::size_t count_long = 5000;
  std::size_t count_labeled = 200;
  std::size_t count_test = 1000;

  AugmentConfig augment;
  ArchConfig arch;
  StageConfig stage1;
  StageConfig stage2;
  PseudoLabelConfig labeling;
  LocConfig loc;
  std::size_t knn_k = 3;

  std::uint64_t master_seed = 0;
  std::string out_dir;
  std::string raw_text;  // config snapshot

  static PipelineConfig from_ini(const IniConfig& ini);
  static PipelineConfig from_file(const std::string& path);
};

struct StageStatus {
  std::string name;
  bool ran = false;  // false = skipped as up to date
  double seconds = 0.0;
};

struct PipelineResult {
  std::vector<StageStatus> stages;
  std::string manifest_path;
};

// Runs field -> data -> stage1 -> stage2 -> label -> loc in order, writing
// artifacts and out_dir/manifest.json.  Stages whose recorded input
// signature matches and whose outputs are present are skipped unless
// `force`.  Stage failures rethrow with the stage name prefixed.
PipelineResult run_pipeline(const PipelineConfig& cfg, bool force = false);

// Reads the eval reports under `artifact_dir` and writes summary.csv
// (model, crowdsourced_c, delta, train_size, cdf68, cdf95) plus sorted
// per-model error curves cdf_<model>.csv.  Missing reports produce a
// partial table; returns the number of warnings.
int write_report(const std::string& artifact_dir);

}  // namespace trajloc
