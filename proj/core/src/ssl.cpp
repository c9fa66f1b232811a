// core/src/ssl.cpp

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

#include "trajloc/ssl/ssl.hpp"

#include <fstream>
#include <iostream>
#include <numeric>

#include "trajloc/errors.hpp"
#include "trajloc/neural/loss.hpp"
#include "trajloc/neural/optim.hpp"

namespace trajloc {

void StageConfig::validate() const {
  if (epochs < 1) {
    throw ConfigError("stage: epochs must be >= 1");
  }
  if (batch_size < 2) {
    throw ConfigError("stage: batch_size must be >= 2 (batchnorm)");
  }
  schedule.validate();
  arch.validate();
}

void write_trace_csv(const std::string& path,
                     const std::vector<EpochStats>& trace) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw DataError("cannot write trace: " + path);
  }
  out << "epoch,mean_loss,embed_std,lr\n";
  for (const EpochStats& row : trace) {
    out << row.epoch << ',' << row.mean_loss << ',' << row.embed_std << ','
        << row.lr << '\n';
  }
}

Stage1Model Stage1Model::create(const ArchConfig& arch, std::int64_t ap_count,
                             std::uint64_t seed) {
  arch.validate();
  Stage1Model m;
  m.arch = arch;
  m.ap_count = ap_count;
  Rng rng(derive_seed(seed, "init-stage1"));
  m.f1 = build_f1(m.store, arch, ap_count, rng);
  m.h1 = build_h1(m.store, arch, rng);
  return m;
}

Stage1Model Stage1Model::load(const std::string& ckpt_path,
                              const ArchConfig& arch, std::int64_t ap_count) {
  Stage1Model m = create(arch, ap_count, 0);
  load_checkpoint_into(m.store, ckpt_path);
  return m;
}

Stage2Model Stage2Model::create(const ArchConfig& arch, std::uint64_t seed) {
  arch.validate();
  Stage2Model m;
  m.arch = arch;
  Rng rng(derive_seed(seed, "init-stage2"));
  m.f2 = build_f2(m.store, arch, rng);
  m.h2 = build_h2(m.store, arch, rng);
  return m;
}

Stage2Model Stage2Model::load(const std::string& ckpt_path,
                              const ArchConfig& arch) {
  Stage2Model m = create(arch, 0);
  load_checkpoint_into(m.store, ckpt_path);
  return m;
}

Tensor<float> gather_features(const TrajectoryDataset& ds,
                              std::span<const std::size_t> idx) {
  const auto batch = static_cast<std::int64_t>(idx.size());
  Tensor<float> x({batch, static_cast<std::int64_t>(ds.m),
                   static_cast<std::int64_t>(ds.t)});
  for (std::int64_t b = 0; b < batch; ++b) {
    const Trajectory& tr = ds.items[idx[static_cast<std::size_t>(b)]];
    std::copy(tr.features.begin(), tr.features.end(),
              x.ptr() + b * static_cast<std::int64_t>(ds.m * ds.t));
  }
  return x;
}

Tensor<float> to_batch(const Trajectory& tr) {
  Tensor<float> x({1, static_cast<std::int64_t>(tr.m),
                   static_cast<std::int64_t>(tr.t)});
  std::copy(tr.features.begin(), tr.features.end(), x.ptr());
  return x;
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(idx);
  return idx;
}

Tensor<float> gather_views(const TrajectoryDataset& ds,
                           std::span<const std::size_t> idx,
                           const AugmentConfig& aug, std::uint64_t seed,
                           std::int64_t epoch) {
  const auto batch = static_cast<std::int64_t>(idx.size());
  Tensor<float> x({batch, static_cast<std::int64_t>(ds.m),
                   static_cast<std::int64_t>(ds.t)});
  for (std::int64_t b = 0; b < batch; ++b) {
    const std::size_t item = idx[static_cast<std::size_t>(b)];
    Rng rng(hash_combine(derive_seed(seed, "aug"),
                         static_cast<std::uint64_t>(epoch),
                         static_cast<std::uint64_t>(item)));
    const Trajectory view = stage1_view(ds.items[item], aug, rng);
    std::copy(view.features.begin(), view.features.end(),
              x.ptr() + b * static_cast<std::int64_t>(ds.m * ds.t));
  }
  return x;
}

}  // namespace

Stage1Model train_stage1(const TrajectoryDataset& c, const StageConfig& cfg,
                         std::vector<EpochStats>* trace) {
  cfg.validate();
  cfg.augment.validate(c.t);
  if (c.items.empty()) {
    throw ConfigError("train_stage1: empty dataset");
  }

  Stage1Model model = Stage1Model::create(cfg.arch,
                                          static_cast<std::int64_t>(c.m),
                                          cfg.seed);
  Sgd<float> opt(cfg.momentum);
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle-stage1"));

  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_at(epoch, cfg.schedule);
    const std::vector<std::size_t> order =
        shuffled_indices(c.items.size(), shuffle_rng);

    double loss_sum = 0.0;
    double std_sum = 0.0;
    std::int64_t batches = 0;

    for (std::size_t at = 0; at < order.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t take = std::min(
          static_cast<std::size_t>(cfg.batch_size), order.size() - at);
      if (take < 2) {
        break;  // batchnorm needs at least two samples
      }
      const std::span<const std::size_t> idx(order.data() + at, take);

      const Tensor<float> view_a = gather_features(c, idx);
      const Tensor<float> view_b =
          gather_views(c, idx, cfg.augment, cfg.seed, epoch);

      Sequential<float>::Tape tf1_a, tf1_b, th1_a, th1_b;
      const Tensor<float> z1 = model.f1.forward(view_a, Phase::kTrain, tf1_a);
      const Tensor<float> z2 = model.f1.forward(view_b, Phase::kTrain, tf1_b);
      const Tensor<float> p1 = model.h1.forward(z1, Phase::kTrain, th1_a);
      const Tensor<float> p2 = model.h1.forward(z2, Phase::kTrain, th1_b);

      const SiameseLoss<float> loss = simsiam_loss(p1, z2, p2, z1);

      model.store.zero_grads();
      const Tensor<float> gz1 = model.h1.backward(loss.gp1, th1_a);
      const Tensor<float> gz2 = model.h1.backward(loss.gp2, th1_b);
      model.f1.backward(gz1, tf1_a);
      model.f1.backward(gz2, tf1_b);
      opt.step(model.store, lr);

      loss_sum += loss.loss;
      std_sum += normalized_embedding_std(z1);
      ++batches;
    }

    if (batches == 0) {
      throw ConfigError("train_stage1: dataset smaller than two samples");
    }
    if (trace) {
      trace->push_back({epoch, loss_sum / static_cast<double>(batches),
                        std_sum / static_cast<double>(batches), lr});
    }
  }
  return model;
}

namespace {

// F1 is frozen in stage 2, so embed all halves once up front unless fresh
// noise is requested per epoch.
struct HalfPairs {
  std::vector<Trajectory> first;
  std::vector<Trajectory> second;
};

HalfPairs split_pairs(const TrajectoryDataset& c_long) {
  HalfPairs out;
  out.first.reserve(c_long.items.size());
  out.second.reserve(c_long.items.size());
  for (const Trajectory& item : c_long.items) {
    auto [z1, z2f] = cut_and_flip(item);
    out.first.push_back(std::move(z1));
    out.second.push_back(std::move(z2f));
  }
  return out;
}

Tensor<float> embed_all(const Sequential<float>& f1,
                        const std::vector<Trajectory>& items,
                        std::int64_t batch_size) {
  const auto n = static_cast<std::int64_t>(items.size());
  Tensor<float> out;
  for (std::int64_t at = 0; at < n; at += batch_size) {
    const std::int64_t take = std::min(batch_size, n - at);
    Tensor<float> x({take, static_cast<std::int64_t>(items[0].m),
                     static_cast<std::int64_t>(items[0].t)});
    for (std::int64_t b = 0; b < take; ++b) {
      const Trajectory& tr = items[static_cast<std::size_t>(at + b)];
      std::copy(tr.features.begin(), tr.features.end(),
                x.ptr() + b * static_cast<std::int64_t>(tr.m * tr.t));
    }
    const Tensor<float> z = f1.forward_eval(x);
    if (out.size() == 0) {
      out = Tensor<float>({n, z.dim(1)});
    }
    std::copy(z.data.begin(), z.data.end(), out.ptr() + at * z.dim(1));
  }
  return out;
}

Tensor<float> gather_rows(const Tensor<float>& all,
                          std::span<const std::size_t> idx) {
  const auto batch = static_cast<std::int64_t>(idx.size());
  const std::int64_t dim = all.dim(1);
  Tensor<float> out({batch, dim});
  for (std::int64_t b = 0; b < batch; ++b) {
    const float* src = all.ptr() + static_cast<std::int64_t>(idx[b]) * dim;
    std::copy(src, src + dim, out.ptr() + b * dim);
  }
  return out;
}

Trajectory noisy_half(const Trajectory& half, const AugmentConfig& aug,
                      Rng& rng) {
  Trajectory out = additive(half, aug.additive_alpha, aug.entry_prob, rng);
  out = scale(out, aug.scale_beta, aug.entry_prob, rng);
  return mask(out, aug, rng);
}

}  // namespace

Stage2Model train_stage2(const TrajectoryDataset& c_long, Stage1Model& f1,
                         const StageConfig& cfg,
                         std::vector<EpochStats>* trace) {
  cfg.validate();
  if (c_long.items.empty()) {
    throw ConfigError("train_stage2: empty dataset");
  }
  if (c_long.t % 2 == 0) {
    throw DataError("train_stage2: temporal length must be odd (2t-1), got " +
                    std::to_string(c_long.t));
  }

  // Freeze mask on every F1 tensor; its store has no optimizer attached and
  // all forward passes run in eval mode, so F1 stays bitwise unchanged.
  f1.store.set_frozen("f1.", true);

  Stage2Model model = Stage2Model::create(cfg.arch, cfg.seed);
  Sgd<float> opt(cfg.momentum);
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle-stage2"));

  const HalfPairs pairs = split_pairs(c_long);
  Tensor<float> emb_first, emb_second;
  if (!cfg.reaugment_long) {
    emb_first = embed_all(f1.f1, pairs.first, cfg.batch_size);
    emb_second = embed_all(f1.f1, pairs.second, cfg.batch_size);
  }

  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_at(epoch, cfg.schedule);
    if (cfg.reaugment_long) {
      std::vector<Trajectory> noisy_a(pairs.first.size());
      std::vector<Trajectory> noisy_b(pairs.second.size());
      for (std::size_t i = 0; i < pairs.first.size(); ++i) {
        Rng rng(hash_combine(derive_seed(cfg.seed, "aug-long"),
                             static_cast<std::uint64_t>(epoch),
                             static_cast<std::uint64_t>(i)));
        noisy_a[i] = noisy_half(pairs.first[i], cfg.augment, rng);
        noisy_b[i] = noisy_half(pairs.second[i], cfg.augment, rng);
      }
      emb_first = embed_all(f1.f1, noisy_a, cfg.batch_size);
      emb_second = embed_all(f1.f1, noisy_b, cfg.batch_size);
    }

    const std::vector<std::size_t> order =
        shuffled_indices(c_long.items.size(), shuffle_rng);

    double loss_sum = 0.0;
    double std_sum = 0.0;
    std::int64_t batches = 0;

    for (std::size_t at = 0; at < order.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t take = std::min(
          static_cast<std::size_t>(cfg.batch_size), order.size() - at);
      if (take < 2) {
        break;
      }
      const std::span<const std::size_t> idx(order.data() + at, take);

      const Tensor<float> in_a = gather_rows(emb_first, idx);
      const Tensor<float> in_b = gather_rows(emb_second, idx);

      Sequential<float>::Tape tf2_a, tf2_b, th2_a, th2_b;
      const Tensor<float> z3 = model.f2.forward(in_a, Phase::kTrain, tf2_a);
      const Tensor<float> z4 = model.f2.forward(in_b, Phase::kTrain, tf2_b);
      const Tensor<float> p3 = model.h2.forward(z3, Phase::kTrain, th2_a);
      const Tensor<float> p4 = model.h2.forward(z4, Phase::kTrain, th2_b);

      const SiameseLoss<float> loss = simsiam_loss(p3, z4, p4, z3);

      model.store.zero_grads();
      const Tensor<float> gz3 = model.h2.backward(loss.gp1, th2_a);
      const Tensor<float> gz4 = model.h2.backward(loss.gp2, th2_b);
      model.f2.backward(gz3, tf2_a);
      model.f2.backward(gz4, tf2_b);
      opt.step(model.store, lr);

      loss_sum += loss.loss;
      std_sum += normalized_embedding_std(z3);
      ++batches;
    }

    if (batches == 0) {
      throw ConfigError("train_stage2: dataset smaller than two samples");
    }
    if (trace) {
      trace->push_back({epoch, loss_sum / static_cast<double>(batches),
                        std_sum / static_cast<double>(batches), lr});
    }
  }
  return model;
}

Tensor<float> embed_trajectory(const Stage1Model& f1, const Trajectory& x) {
  return f1.f1.forward_eval(to_batch(x));
}

Tensor<float> embed_endpoint(const Stage1Model& f1, const Stage2Model& f2,
                             const Trajectory& x) {
  return f2.f2.forward_eval(f1.f1.forward_eval(to_batch(x)));
}

Tensor<float> embed_trajectories(const Stage1Model& f1,
                                 const TrajectoryDataset& ds,
                                 std::span<const std::size_t> idx) {
  constexpr std::int64_t kBatch = 256;
  const auto n = static_cast<std::int64_t>(idx.size());
  Tensor<float> out;
  for (std::int64_t at = 0; at < n; at += kBatch) {
    const std::int64_t take = std::min(kBatch, n - at);
    const Tensor<float> x = gather_features(ds, idx.subspan(at, take));
    const Tensor<float> z = f1.f1.forward_eval(x);
    if (out.size() == 0) {
      out = Tensor<float>({n, z.dim(1)});
    }
    std::copy(z.data.begin(), z.data.end(), out.ptr() + at * z.dim(1));
  }
  return out;
}

Tensor<float> embed_endpoints(const Stage1Model& f1, const Stage2Model& f2,
                              const TrajectoryDataset& ds,
                              std::span<const std::size_t> idx) {
  constexpr std::int64_t kBatch = 256;
  const auto n = static_cast<std::int64_t>(idx.size());
  Tensor<float> out;
  for (std::int64_t at = 0; at < n; at += kBatch) {
    const std::int64_t take = std::min(kBatch, n - at);
    const Tensor<float> x = gather_features(ds, idx.subspan(at, take));
    const Tensor<float> z = f2.f2.forward_eval(f1.f1.forward_eval(x));
    if (out.size() == 0) {
      out = Tensor<float>({n, z.dim(1)});
    }
    std::copy(z.data.begin(), z.data.end(), out.ptr() + at * z.dim(1));
  }
  return out;
}

}  // namespace trajloc
