// core/include/trajloc/neural/models.hpp

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

#include <memory>
#include <string>

#include "trajloc/neural/layers.hpp"
#include "trajloc/neural/param_store.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

// Network widths.  F1 is a convolutional trajectory encoder, h1/h2 are
// SimSiam-style predictors, F2 maps trajectory embeddings to endpoint
// embeddings and L regresses an (x, y) position.
struct ArchConfig {
  std::int64_t conv_channels = 64;
  std::int64_t conv_blocks = 3;
  std::int64_t kernel = 3;
  std::int64_t traj_dim = 128;  // F1 output / stage-1 embedding width
  std::int64_t h1_hidden = 64;
  std::int64_t f2_hidden = 128;
  std::int64_t end_dim = 64;  // F2 output / stage-2 embedding width
  std::int64_t h2_hidden = 32;
  std::int64_t loc_hidden = 64;

  void validate() const;
};

// F1: [RP(1) -> Conv1d(m -> c, k) -> BN -> ReLU] x blocks -> temporal
// average pool -> FC(c -> traj_dim).  Input [B, m, t].
template <typename S>
Sequential<S> build_f1(ParamStore<S>& store, const ArchConfig& cfg,
                       std::int64_t ap_count, Rng& rng,
                       const std::string& prefix = "f1") {
  Sequential<S> net;
  const std::int64_t pad = (cfg.kernel - 1) / 2;
  std::int64_t in_ch = ap_count;
  for (std::int64_t b = 0; b < cfg.conv_blocks; ++b) {
    const std::string block = prefix + ".block" + std::to_string(b);
    net.add(std::make_unique<ReflectionPad1d<S>>(block + ".pad", pad));
    net.add(std::make_unique<Conv1d<S>>(store, block + ".conv", in_ch,
                                        cfg.conv_channels, cfg.kernel, rng));
    net.add(std::make_unique<BatchNorm1d<S>>(store, block + ".bn",
                                             cfg.conv_channels));
    net.add(std::make_unique<Relu<S>>(block + ".relu"));
    in_ch = cfg.conv_channels;
  }
  net.add(std::make_unique<TemporalAvgPool<S>>(prefix + ".pool"));
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc",
                                              cfg.conv_channels, cfg.traj_dim,
                                              rng));
  return net;
}

// h1: FC(traj_dim -> h1_hidden) -> BN -> ReLU -> FC(h1_hidden -> traj_dim).
template <typename S>
Sequential<S> build_h1(ParamStore<S>& store, const ArchConfig& cfg, Rng& rng,
                       const std::string& prefix = "h1") {
  Sequential<S> net;
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc0",
                                              cfg.traj_dim, cfg.h1_hidden,
                                              rng));
  net.add(std::make_unique<BatchNorm1d<S>>(store, prefix + ".bn",
                                           cfg.h1_hidden));
  net.add(std::make_unique<Relu<S>>(prefix + ".relu"));
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc1",
                                              cfg.h1_hidden, cfg.traj_dim,
                                              rng));
  return net;
}

// F2: FC(traj_dim -> f2_hidden) -> BN -> ReLU -> FC(f2_hidden -> end_dim).
template <typename S>
Sequential<S> build_f2(ParamStore<S>& store, const ArchConfig& cfg, Rng& rng,
                       const std::string& prefix = "f2") {
  Sequential<S> net;
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc0",
                                              cfg.traj_dim, cfg.f2_hidden,
                                              rng));
  net.add(std::make_unique<BatchNorm1d<S>>(store, prefix + ".bn",
                                           cfg.f2_hidden));
  net.add(std::make_unique<Relu<S>>(prefix + ".relu"));
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc1",
                                              cfg.f2_hidden, cfg.end_dim,
                                              rng));
  return net;
}

// h2: FC(end_dim -> h2_hidden) -> BN -> ReLU -> FC(h2_hidden -> end_dim).
template <typename S>
Sequential<S> build_h2(ParamStore<S>& store, const ArchConfig& cfg, Rng& rng,
                       const std::string& prefix = "h2") {
  Sequential<S> net;
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc0",
                                              cfg.end_dim, cfg.h2_hidden,
                                              rng));
  net.add(std::make_unique<BatchNorm1d<S>>(store, prefix + ".bn",
                                           cfg.h2_hidden));
  net.add(std::make_unique<Relu<S>>(prefix + ".relu"));
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc1",
                                              cfg.h2_hidden, cfg.end_dim,
                                              rng));
  return net;
}

// L: FC(end_dim -> loc_hidden) -> ReLU -> FC(loc_hidden -> 2).
template <typename S>
Sequential<S> build_loc(ParamStore<S>& store, const ArchConfig& cfg, Rng& rng,
                        const std::string& prefix = "loc") {
  Sequential<S> net;
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc0",
                                              cfg.end_dim, cfg.loc_hidden,
                                              rng));
  net.add(std::make_unique<Relu<S>>(prefix + ".relu"));
  net.add(std::make_unique<FullyConnected<S>>(store, prefix + ".fc1",
                                              cfg.loc_hidden, 2, rng));
  return net;
}

}  // namespace trajloc
