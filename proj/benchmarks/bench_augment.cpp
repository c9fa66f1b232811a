// benchmarks/bench_augment.cpp

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

#include "trajloc/augment/augment.hpp"

namespace {

using namespace trajloc;

Trajectory sample_traj(std::size_t m, std::size_t t) {
  Trajectory tr;
  tr.m = m;
  tr.t = t;
  tr.features.resize(m * t);
  Rng rng(1);
  for (float& v : tr.features) {
    v = static_cast<float>(rng.uniform());
  }
  return tr;
}

void BM_Stage1View(benchmark::State& state) {
  const Trajectory x = sample_traj(8, 15);
  AugmentConfig cfg;
  Rng rng(2);
  for (auto _ : state) {
    Trajectory v = stage1_view(x, cfg, rng);
    benchmark::DoNotOptimize(v.features.data());
  }
}
BENCHMARK(BM_Stage1View);

void BM_CutAndFlip(benchmark::State& state) {
  const Trajectory x = sample_traj(8, 29);
  for (auto _ : state) {
    auto halves = cut_and_flip(x);
    benchmark::DoNotOptimize(halves.first.features.data());
  }
}
BENCHMARK(BM_CutAndFlip);

}  // namespace
