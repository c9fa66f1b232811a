// benchmarks/bench_knn.cpp

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

#include <benchmark/benchmark.h>

#include "trajloc/loc/localization.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/radio/field.hpp"

namespace {

using namespace trajloc;

void BM_KnnBaseline(benchmark::State& state) {
  PropagationParams params;
  const ApDeployment d = ApDeployment::random(8, 30.0, 30.0, params, 1);
  const RadioField field = sample_field(d, 30.0, 30.0, 0.5, 1);
  DatasetGenConfig cfg;
  cfg.mobility.t = 15;
  cfg.labeled = true;
  const TrajectoryDataset train =
      gen_dataset(field, cfg, static_cast<std::size_t>(state.range(0)), 2);
  const TrajectoryDataset test = gen_dataset(field, cfg, 100, 3);
  for (auto _ : state) {
    EvalReport r = knn_baseline(train, test, 3);
    benchmark::DoNotOptimize(r.cdf68);
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_KnnBaseline)->Arg(200)->Arg(1000);

}  // namespace
