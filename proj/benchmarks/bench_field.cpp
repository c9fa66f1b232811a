// benchmarks/bench_field.cpp

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

#include "trajloc/radio/field.hpp"

namespace {

using namespace trajloc;

void BM_SampleField(benchmark::State& state) {
  const double size = static_cast<double>(state.range(0));
  PropagationParams params;
  const ApDeployment d = ApDeployment::random(8, size, size, params, 1);
  for (auto _ : state) {
    RadioField f = sample_field(d, size, size, 0.5, 1);
    benchmark::DoNotOptimize(f.raw().data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(
                              grid_points(size, 0.5) * grid_points(size, 0.5) *
                              8));
}
BENCHMARK(BM_SampleField)->Arg(30)->Arg(60);

void BM_RssiAt(benchmark::State& state) {
  PropagationParams params;
  const ApDeployment d = ApDeployment::random(8, 30.0, 30.0, params, 1);
  const RadioField f = sample_field(d, 30.0, 30.0, 0.5, 1);
  Rng rng(2);
  for (auto _ : state) {
    const Point2 q{rng.uniform(0.0, 30.0), rng.uniform(0.0, 30.0)};
    benchmark::DoNotOptimize(f.rssi_at(q).data());
  }
}
BENCHMARK(BM_RssiAt);

}  // namespace

BENCHMARK_MAIN();
