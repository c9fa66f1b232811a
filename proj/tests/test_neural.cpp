// tests/test_neural.cpp

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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"
#include "trajloc/neural/checkpoint.hpp"
#include "trajloc/neural/layers.hpp"
#include "trajloc/neural/loss.hpp"
#include "trajloc/neural/models.hpp"
#include "trajloc/neural/optim.hpp"
#include "trajloc/neural/schedule.hpp"

using namespace trajloc;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("neural") {

TEST_CASE("relu forward and backward") {
  ParamStore<float> store;
  Relu<float> relu("relu");
  Tensor<float> x({1, 3});
  x.data = {-1.0f, 0.0f, 2.0f};
  LayerCtx<float> ctx;
  const Tensor<float> y = relu.forward(x, Phase::kTrain, ctx);
  CHECK(y.data[0] == 0.0f);
  CHECK(y.data[1] == 0.0f);
  CHECK(y.data[2] == 2.0f);

  Tensor<float> gy({1, 3});
  gy.data = {1.0f, 1.0f, 1.0f};
  const Tensor<float> gx = relu.backward(gy, ctx);
  CHECK(gx.data[0] == 0.0f);
  CHECK(gx.data[1] == 0.0f);  // gradient only where input > 0
  CHECK(gx.data[2] == 1.0f);
}

TEST_CASE("reflection padding mirrors without repeating the edge") {
  ParamStore<float> store;
  ReflectionPad1d<float> pad("pad", 1);
  Tensor<float> x({1, 1, 3});
  x.data = {1.0f, 2.0f, 3.0f};  // a, b, c
  LayerCtx<float> ctx;
  const Tensor<float> y = pad.forward(x, Phase::kTrain, ctx);
  REQUIRE(y.dim(2) == 5);
  CHECK(y.data[0] == 2.0f);  // b
  CHECK(y.data[1] == 1.0f);  // a
  CHECK(y.data[2] == 2.0f);  // b
  CHECK(y.data[3] == 3.0f);  // c
  CHECK(y.data[4] == 2.0f);  // b
}

TEST_CASE("conv1d with k=1 identity weights is the identity") {
  ParamStore<float> store;
  Rng rng(1);
  Conv1d<float> conv(store, "conv", 3, 3, 1, rng);
  auto& w = store.entry("conv.weight").value;
  auto& b = store.entry("conv.bias").value;
  w.fill(0.0f);
  b.fill(0.0f);
  for (std::int64_t i = 0; i < 3; ++i) {
    w.data[(i * 3 + i) * 1] = 1.0f;
  }
  Tensor<float> x({2, 3, 5});
  Rng data_rng(2);
  for (float& v : x.data) {
    v = static_cast<float>(data_rng.uniform());
  }
  LayerCtx<float> ctx;
  const Tensor<float> y = conv.forward(x, Phase::kTrain, ctx);
  REQUIRE(y.shape == x.shape);
  for (std::int64_t i = 0; i < x.size(); ++i) {
    CHECK(y.data[i] == doctest::Approx(x.data[i]));
  }
}

TEST_CASE("layers report shape mismatches by name") {
  ParamStore<float> store;
  Rng rng(3);
  Conv1d<float> conv(store, "f1.block0.conv", 4, 8, 3, rng);
  Tensor<float> bad({2, 3, 7});
  LayerCtx<float> ctx;
  try {
    conv.forward(bad, Phase::kTrain, ctx);
    FAIL("expected DimError");
  } catch (const DimError& e) {
    CHECK(std::string(e.what()).find("f1.block0.conv") != std::string::npos);
  }
}

TEST_CASE("batchnorm inference is a fixed affine map") {
  ParamStore<float> store;
  BatchNorm1d<float> bn(store, "bn", 2);
  Rng rng(4);
  Tensor<float> warm({16, 2});
  for (float& v : warm.data) {
    v = static_cast<float>(rng.gaussian(1.0, 2.0));
  }
  LayerCtx<float> ctx;
  bn.forward(warm, Phase::kTrain, ctx);

  const auto run_mean = store.entry("bn.running_mean").value;
  const auto run_var = store.entry("bn.running_var").value;
  Tensor<float> x({3, 2});
  x.data = {0.5f, -1.0f, 2.0f, 0.0f, -0.25f, 1.5f};
  LayerCtx<float> ectx;
  const Tensor<float> y = bn.forward(x, Phase::kEval, ectx);
  for (std::int64_t n = 0; n < 3; ++n) {
    for (std::int64_t c = 0; c < 2; ++c) {
      const float expected =
          (x.at(n, c) - run_mean.data[c]) /
          std::sqrt(run_var.data[c] + 1e-5f);
      CHECK(y.at(n, c) == doctest::Approx(expected).epsilon(1e-5));
    }
  }
  // Same input twice: bitwise identical (stats are not updated in eval).
  LayerCtx<float> ectx2;
  const Tensor<float> y2 = bn.forward(x, Phase::kEval, ectx2);
  CHECK(y.data == y2.data);
}

TEST_CASE("batchnorm rejects batches of one in train mode") {
  ParamStore<float> store;
  BatchNorm1d<float> bn(store, "bn", 4);
  Tensor<float> x({1, 4});
  LayerCtx<float> ctx;
  CHECK_THROWS_AS(bn.forward(x, Phase::kTrain, ctx), TrainError);
}

TEST_CASE("cosine similarity spans [-1, 1]") {
  std::vector<float> p = {1.0f, 0.0f};
  std::vector<float> z = {1.0f, 0.0f};
  CHECK(cosine_similarity<float>(p, z) == doctest::Approx(1.0));
  z = {0.0f, 1.0f};
  CHECK(cosine_similarity<float>(p, z) == doctest::Approx(0.0));
  z = {-1.0f, 0.0f};
  CHECK(cosine_similarity<float>(p, z) == doctest::Approx(-1.0));

  std::vector<float> zero = {0.0f, 0.0f};
  CHECK_THROWS_AS(cosine_similarity<float>(p, zero), TrainError);
}

TEST_CASE("simsiam loss endpoints") {
  const auto fill = [](std::vector<float> values) {
    Tensor<float> t({1, static_cast<std::int64_t>(values.size())});
    t.data = values;
    return t;
  };
  SUBCASE("perfect alignment gives -1") {
    const auto p1 = fill({1.0f, 0.0f});
    const auto z2 = fill({1.0f, 0.0f});
    const auto p2 = fill({0.0f, 1.0f});
    const auto z1 = fill({0.0f, 1.0f});
    CHECK(simsiam_loss(p1, z2, p2, z1).loss == doctest::Approx(-1.0));
  }
  SUBCASE("orthogonal pairs give 0") {
    const auto p1 = fill({1.0f, 0.0f});
    const auto z2 = fill({0.0f, 1.0f});
    const auto p2 = fill({0.0f, 1.0f});
    const auto z1 = fill({1.0f, 0.0f});
    CHECK(simsiam_loss(p1, z2, p2, z1).loss == doctest::Approx(0.0));
  }
  SUBCASE("swapping the two branch pairs leaves the loss unchanged") {
    Rng rng(5);
    const auto rand = [&rng] {
      Tensor<float> t({2, 4});
      for (float& v : t.data) {
        v = static_cast<float>(rng.uniform(-1.0, 1.0));
      }
      return t;
    };
    const auto p1 = rand();
    const auto z2 = rand();
    const auto p2 = rand();
    const auto z1 = rand();
    const float a = simsiam_loss(p1, z2, p2, z1).loss;
    const float b = simsiam_loss(p2, z1, p1, z2).loss;
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
  }
  SUBCASE("loss is bounded in [-1, 1] for random batches") {
    Rng rng(6);
    for (int rep = 0; rep < 50; ++rep) {
      Tensor<float> p1({4, 8});
      Tensor<float> z2({4, 8});
      Tensor<float> p2({4, 8});
      Tensor<float> z1({4, 8});
      for (auto* t : {&p1, &z2, &p2, &z1}) {
        for (float& v : t->data) {
          v = static_cast<float>(rng.uniform(-2.0, 2.0));
        }
      }
      const float loss = simsiam_loss(p1, z2, p2, z1).loss;
      CHECK(loss >= -1.0f - 1e-6f);
      CHECK(loss <= 1.0f + 1e-6f);
    }
  }
}

TEST_CASE("lr schedule follows warmup, decay and restarts") {
  LrSchedule s;  // paper-style defaults
  SUBCASE("epoch 0 starts at the warmup lr") {
    CHECK(lr_at(0, s) == doctest::Approx(0.001));
  }
  SUBCASE("end of warmup reaches the base lr") {
    CHECK(lr_at(40, s) == doctest::Approx(0.01));
  }
  SUBCASE("initial decay bottoms out at min lr") {
    CHECK(lr_at(140, s) == doctest::Approx(0.0001));
  }
  SUBCASE("warmup-to-decay boundary is continuous") {
    const double before = lr_at(39, s);
    const double at = lr_at(40, s);
    const double expected_step = (s.base_lr - s.warmup_start_lr) / 40.0;
    CHECK(at - before == doctest::Approx(expected_step).epsilon(1e-9));
  }
  SUBCASE("each restart epoch returns the restart lr") {
    CHECK(lr_at(141, s) == doctest::Approx(0.001));
    CHECK(lr_at(141 + 30, s) == doctest::Approx(0.001));
    CHECK(lr_at(141 + 60, s) == doctest::Approx(0.001));
  }
  SUBCASE("cycle ends reach the min lr") {
    CHECK(lr_at(140 + 30, s) == doctest::Approx(0.0001));
    CHECK(lr_at(140 + 60, s) == doctest::Approx(0.0001));
  }
  SUBCASE("monotone decay within a cycle") {
    for (int e = 141; e < 170; ++e) {
      CHECK(lr_at(e, s) >= lr_at(e + 1, s));
    }
  }
}

TEST_CASE("sgd step follows the update rule") {
  ParamStore<float> store;
  auto* w = store.create("w", {1});
  w->value.data[0] = 1.0f;
  w->grad.data[0] = 2.0f;
  Sgd<float> opt;
  opt.step(store, 0.1);
  CHECK(w->value.data[0] == doctest::Approx(0.8));

  SUBCASE("lr 0 leaves parameters unchanged") {
    w->grad.data[0] = 5.0f;
    opt.step(store, 0.0);
    CHECK(w->value.data[0] == doctest::Approx(0.8));
  }
  SUBCASE("frozen parameters are skipped") {
    store.set_frozen("w", true);
    w->grad.data[0] = 5.0f;
    opt.step(store, 0.1);
    CHECK(w->value.data[0] == doctest::Approx(0.8));
  }
}

TEST_CASE("adam's first bias-corrected step has magnitude ~ lr") {
  for (const double g : {0.001, 0.5, 10.0, -400.0}) {
    ParamStore<float> store;
    auto* w = store.create("w", {1});
    w->value.data[0] = 1.0f;
    w->grad.data[0] = static_cast<float>(g);
    Adam<float> opt;
    opt.step(store, 0.01);
    // First iterate: m-hat = g, v-hat = g^2 -> update = lr * sign(g).
    const double update = 1.0 - w->value.data[0];
    CHECK(std::abs(update) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK((update > 0) == (g > 0));
  }
}

TEST_CASE("optimizers abort on non-finite gradients") {
  ParamStore<float> store;
  auto* w = store.create("w", {1});
  w->grad.data[0] = std::nanf("");
  Sgd<float> sgd;
  CHECK_THROWS_AS(sgd.step(store, 0.1), TrainError);
  Adam<float> adam;
  CHECK_THROWS_AS(adam.step(store, 0.1), TrainError);
}

TEST_CASE("checkpoints round-trip parameters, flags and optimizer state") {
  ParamStore<float> store;
  Rng rng(7);
  ArchConfig arch;
  arch.conv_channels = 8;
  arch.traj_dim = 16;
  arch.h1_hidden = 8;
  Sequential<float> f1 = build_f1(store, arch, 4, rng);
  Sequential<float> h1 = build_h1(store, arch, rng);
  store.set_frozen("f1.", true);

  OptimizerState opt;
  opt.kind = "sgd";
  opt.step = 17;
  opt.tensors.emplace("v:f1.fc.weight",
                      store.entry("f1.fc.weight").value);

  const std::string path = temp_path("trajloc_ckpt.wssl");
  save_checkpoint(store, path, &opt);

  const Checkpoint loaded = load_checkpoint(path);
  CHECK(loaded.store.size() == store.size());
  for (const std::string& name : store.names()) {
    CHECK(loaded.store.entry(name).value.data ==
          store.entry(name).value.data);
    CHECK(loaded.store.entry(name).frozen == store.entry(name).frozen);
    CHECK(loaded.store.entry(name).trainable == store.entry(name).trainable);
  }
  REQUIRE(loaded.optimizer.has_value());
  CHECK(loaded.optimizer->kind == "sgd");
  CHECK(loaded.optimizer->step == 17);
  CHECK(loaded.optimizer->tensors.at("v:f1.fc.weight").data ==
        store.entry("f1.fc.weight").value.data);

  SUBCASE("save -> load -> save is byte-identical") {
    const std::string path2 = temp_path("trajloc_ckpt2.wssl");
    save_checkpoint(loaded.store, path2, &*loaded.optimizer);
    CHECK(file_hash(path) == file_hash(path2));
    std::remove(path2.c_str());
  }
  std::remove(path.c_str());
}

TEST_CASE("loading a checkpoint into a mismatched model names the tensor") {
  ParamStore<float> small;
  Rng rng(8);
  ArchConfig arch_small;
  arch_small.conv_channels = 8;
  arch_small.traj_dim = 16;
  arch_small.h1_hidden = 8;
  build_f1(small, arch_small, 4, rng);
  const std::string path = temp_path("trajloc_ckpt_small.wssl");
  save_checkpoint(small, path);

  ParamStore<float> big;
  ArchConfig arch_big = arch_small;
  arch_big.conv_channels = 16;
  Rng rng2(9);
  build_f1(big, arch_big, 4, rng2);
  try {
    load_checkpoint_into(big, path);
    FAIL("expected DimError");
  } catch (const DimError& e) {
    CHECK(std::string(e.what()).find("f1.block0.conv.weight") !=
          std::string::npos);
  }
  std::remove(path.c_str());
}

TEST_CASE("corrupted checkpoint magic is rejected with offset 0") {
  ParamStore<float> store;
  store.create("w", {2});
  const std::string path = temp_path("trajloc_ckpt_bad.wssl");
  save_checkpoint(store, path);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.put('Q');
  }
  try {
    load_checkpoint(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 0);
  }
  std::remove(path.c_str());
}

TEST_CASE("stop-gradient: parameters feeding only SG inputs get zero grads") {
  // Two separate encoders; the loss takes p from net A and z from net B.
  // B's parameters must receive exactly zero gradient.
  Rng rng(10);
  ParamStore<float> store_a;
  ParamStore<float> store_b;
  ArchConfig arch;
  arch.conv_channels = 8;
  arch.traj_dim = 12;
  Sequential<float> net_a = build_f1(store_a, arch, 3, rng);
  Sequential<float> net_b = build_f1(store_b, arch, 3, rng);

  Tensor<float> x({4, 3, 9});
  Rng data_rng(11);
  for (float& v : x.data) {
    v = static_cast<float>(data_rng.uniform());
  }
  Sequential<float>::Tape tape_a, tape_b;
  const Tensor<float> p = net_a.forward(x, Phase::kTrain, tape_a);
  const Tensor<float> z = net_b.forward(x, Phase::kTrain, tape_b);

  store_a.zero_grads();
  store_b.zero_grads();
  const SiameseLoss<float> loss = simsiam_loss(p, z, p, z);
  // Backprop only the p-side gradients, as the loss contract specifies.
  net_a.backward(loss.gp1, tape_a);
  net_a.backward(loss.gp2, tape_a);

  bool a_has_grad = false;
  for (const std::string& name : store_a.names()) {
    for (float g : store_a.entry(name).grad.data) {
      a_has_grad = a_has_grad || g != 0.0f;
    }
  }
  CHECK(a_has_grad);
  for (const std::string& name : store_b.names()) {
    for (float g : store_b.entry(name).grad.data) {
      CHECK(g == 0.0f);
    }
  }
}

}  // TEST_SUITE
