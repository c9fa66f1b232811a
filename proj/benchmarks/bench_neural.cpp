// benchmarks/bench_neural.cpp

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

#include "trajloc/neural/loss.hpp"
#include "trajloc/neural/models.hpp"

namespace {

using namespace trajloc;

void BM_F1Forward(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  ParamStore<float> store;
  Rng rng(1);
  ArchConfig arch;
  Sequential<float> f1 = build_f1(store, arch, 8, rng);
  Tensor<float> x({batch, 8, 15});
  for (float& v : x.data) {
    v = static_cast<float>(rng.uniform());
  }
  for (auto _ : state) {
    Sequential<float>::Tape tape;
    Tensor<float> z = f1.forward(x, Phase::kTrain, tape);
    benchmark::DoNotOptimize(z.data.data());
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_F1Forward)->Arg(64)->Arg(256);

void BM_F1TrainStep(benchmark::State& state) {
  const std::int64_t batch = state.range(0);
  ParamStore<float> store;
  Rng rng(1);
  ArchConfig arch;
  Sequential<float> f1 = build_f1(store, arch, 8, rng);
  Sequential<float> h1 = build_h1(store, arch, rng);
  Tensor<float> xa({batch, 8, 15});
  Tensor<float> xb({batch, 8, 15});
  for (auto* t : {&xa, &xb}) {
    for (float& v : t->data) {
      v = static_cast<float>(rng.uniform());
    }
  }
  for (auto _ : state) {
    Sequential<float>::Tape tf_a, tf_b, th_a, th_b;
    const Tensor<float> z1 = f1.forward(xa, Phase::kTrain, tf_a);
    const Tensor<float> z2 = f1.forward(xb, Phase::kTrain, tf_b);
    const Tensor<float> p1 = h1.forward(z1, Phase::kTrain, th_a);
    const Tensor<float> p2 = h1.forward(z2, Phase::kTrain, th_b);
    const SiameseLoss<float> loss = simsiam_loss(p1, z2, p2, z1);
    store.zero_grads();
    const Tensor<float> g1 = h1.backward(loss.gp1, th_a);
    const Tensor<float> g2 = h1.backward(loss.gp2, th_b);
    f1.backward(g1, tf_a);
    f1.backward(g2, tf_b);
    benchmark::DoNotOptimize(loss.loss);
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_F1TrainStep)->Arg(256);

}  // namespace
