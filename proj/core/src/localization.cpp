// core/src/localization.cpp

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

#include "trajloc/loc/localization.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "trajloc/errors.hpp"
#include "trajloc/labeling/labeling.hpp"
#include "trajloc/neural/loss.hpp"
#include "trajloc/neural/optim.hpp"
#include "trajloc/parallel.hpp"

namespace trajloc {

void LocConfig::validate() const {
  if (epochs < 1) {
    throw ConfigError("loc: epochs must be >= 1");
  }
  if (batch_size < 2) {
    throw ConfigError("loc: batch_size must be >= 2 (batchnorm)");
  }
  if (lr < 0.0) {
    throw ConfigError("loc: lr must be >= 0");
  }
  arch.validate();
}

LocModel LocModel::create(const ArchConfig& arch, std::int64_t ap_count,
                          std::uint64_t seed) {
  arch.validate();
  LocModel m;
  m.arch = arch;
  m.ap_count = ap_count;
  Rng rng(derive_seed(seed, "init-loc"));
  m.f1 = build_f1(m.store, arch, ap_count, rng);
  m.f2 = build_f2(m.store, arch, rng);
  m.loc = build_loc(m.store, arch, rng);
  // Field bounds ride along in the checkpoint so `predict` clamps
  // correctly after reload.
  m.store.create("meta.field_bounds", {2}, /*trainable=*/false);
  return m;
}

LocModel LocModel::from_pretrained(const ArchConfig& arch,
                                   std::int64_t ap_count,
                                   const std::string& f1_ckpt,
                                   const std::string& f2_ckpt,
                                   std::uint64_t seed) {
  LocModel m = create(arch, ap_count, seed);
  const Checkpoint c1 = load_checkpoint(f1_ckpt);
  const Checkpoint c2 = load_checkpoint(f2_ckpt);
  copy_params(m.store, c1.store, "f1.");
  copy_params(m.store, c2.store, "f2.");
  return m;
}

LocModel LocModel::load(const std::string& ckpt_path, const ArchConfig& arch,
                        std::int64_t ap_count) {
  LocModel m = create(arch, ap_count, 0);
  load_checkpoint_into(m.store, ckpt_path);
  if (m.store.has("meta.field_bounds")) {
    const auto& bounds = m.store.entry("meta.field_bounds").value;
    m.field_width = bounds.data[0];
    m.field_height = bounds.data[1];
  }
  return m;
}

void LocModel::save(const std::string& ckpt_path) {
  auto& bounds = store.entry("meta.field_bounds").value;
  bounds.data[0] = static_cast<float>(field_width);
  bounds.data[1] = static_cast<float>(field_height);
  save_checkpoint(store, ckpt_path);
}

namespace {

Tensor<float> forward_eval_full(const LocModel& m, const Tensor<float>& x) {
  return m.loc.forward_eval(m.f2.forward_eval(m.f1.forward_eval(x)));
}

Point2 clamp_to_field(Point2 p, double width, double height) {
  if (width > 0.0 && height > 0.0) {
    p.x = std::clamp(p.x, 0.0, width);
    p.y = std::clamp(p.y, 0.0, height);
  }
  return p;
}

Tensor<float> gather_labels(const TrajectoryDataset& ds,
                            std::span<const std::size_t> idx) {
  Tensor<float> y({static_cast<std::int64_t>(idx.size()), 2});
  for (std::size_t b = 0; b < idx.size(); ++b) {
    const Trajectory& tr = ds.items[idx[b]];
    if (!tr.label) {
      throw DataError("train_loc: unlabeled item in training set");
    }
    y.at(static_cast<std::int64_t>(b), 0) = static_cast<float>(tr.label->x);
    y.at(static_cast<std::int64_t>(b), 1) = static_cast<float>(tr.label->y);
  }
  return y;
}

}  // namespace

Point2 LocModel::predict(const Trajectory& x) const {
  const Tensor<float> out = forward_eval_full(*this, to_batch(x));
  return clamp_to_field({out.data[0], out.data[1]}, field_width, field_height);
}

std::vector<Point2> LocModel::predict_batch(const TrajectoryDataset& ds) const {
  constexpr std::int64_t kBatch = 256;
  std::vector<Point2> out(ds.items.size());
  std::vector<std::size_t> idx(ds.items.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t at = 0; at < idx.size(); at += kBatch) {
    const std::size_t take =
        std::min(static_cast<std::size_t>(kBatch), idx.size() - at);
    const Tensor<float> x =
        gather_features(ds, std::span<const std::size_t>(idx).subspan(at, take));
    const Tensor<float> pred = forward_eval_full(*this, x);
    for (std::size_t b = 0; b < take; ++b) {
      out[at + b] = clamp_to_field(
          {pred.at(static_cast<std::int64_t>(b), 0),
           pred.at(static_cast<std::int64_t>(b), 1)},
          field_width, field_height);
    }
  }
  return out;
}

void train_loc(LocModel& model, const TrajectoryDataset& train_set,
               const LocConfig& cfg, std::vector<EpochStats>* trace) {
  cfg.validate();
  if (train_set.items.empty()) {
    throw ConfigError("train_loc: empty training set");
  }
  if (!train_set.labeled) {
    throw DataError("train_loc: training set must be labeled");
  }
  model.field_width = cfg.field_width;
  model.field_height = cfg.field_height;

  if (!cfg.finetune_encoders) {
    model.store.set_frozen("f1.", true);
    model.store.set_frozen("f2.", true);
  }
  const Phase encoder_phase =
      cfg.finetune_encoders ? Phase::kTrain : Phase::kEval;

  Adam<float> opt(cfg.beta1, cfg.beta2, cfg.adam_eps);
  Rng shuffle_rng(derive_seed(cfg.seed, "shuffle-loc"));

  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(train_set.items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    std::int64_t batches = 0;
    for (std::size_t at = 0; at < order.size();
         at += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t take = std::min(
          static_cast<std::size_t>(cfg.batch_size), order.size() - at);
      if (take < 2) {
        break;
      }
      const std::span<const std::size_t> idx(order.data() + at, take);
      const Tensor<float> x = gather_features(train_set, idx);
      const Tensor<float> y = gather_labels(train_set, idx);

      Sequential<float>::Tape tf1, tf2, tloc;
      const Tensor<float> e1 = model.f1.forward(x, encoder_phase, tf1);
      const Tensor<float> e2 = model.f2.forward(e1, encoder_phase, tf2);
      const Tensor<float> pred = model.loc.forward(e2, Phase::kTrain, tloc);

      const MseLoss<float> loss = mse_loss(pred, y);

      model.store.zero_grads();
      const Tensor<float> g2 = model.loc.backward(loss.gpred, tloc);
      if (cfg.finetune_encoders) {
        const Tensor<float> g1 = model.f2.backward(g2, tf2);
        model.f1.backward(g1, tf1);
      }
      opt.step(model.store, cfg.lr);

      loss_sum += loss.loss;
      ++batches;
    }
    if (batches == 0) {
      throw ConfigError("train_loc: training set smaller than two samples");
    }
    if (trace) {
      trace->push_back(
          {epoch, loss_sum / static_cast<double>(batches), 0.0, cfg.lr});
    }
  }
}

EvalReport evaluate_errors(std::vector<double> errors) {
  if (errors.empty()) {
    throw ConfigError("evaluate: empty test set");
  }
  EvalReport report;
  report.count = errors.size();
  report.errors_m = errors;
  report.cdf68 = nearest_rank_percentile(errors, 68);
  report.cdf95 = nearest_rank_percentile(std::move(errors), 95);
  return report;
}

EvalReport evaluate(const LocModel& model, const TrajectoryDataset& test_set) {
  if (!test_set.labeled) {
    throw DataError("evaluate: test set must be labeled");
  }
  if (test_set.items.empty()) {
    throw ConfigError("evaluate: empty test set");
  }
  const std::vector<Point2> pred = model.predict_batch(test_set);
  std::vector<double> errors(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    errors[i] = distance(pred[i], *test_set.items[i].label);
  }
  return evaluate_errors(std::move(errors));
}

EvalReport knn_baseline(const TrajectoryDataset& train,
                        const TrajectoryDataset& test, std::size_t k,
                        std::vector<Point2>* predictions) {
  if (k < 1 || k > train.items.size()) {
    throw ConfigError("knn: k must be in [1, |train|]");
  }
  if (!train.labeled || !test.labeled) {
    throw DataError("knn: train and test sets must be labeled");
  }
  if (train.m != test.m || train.t != test.t) {
    throw DataError("knn: train/test shape mismatch");
  }

  if (predictions) {
    predictions->assign(test.items.size(), Point2{});
  }
  std::vector<double> errors(test.items.size());
  parallel_for(
      static_cast<std::int64_t>(test.items.size()),
      [&](std::int64_t lo, std::int64_t hi) {
        std::vector<std::pair<double, std::size_t>> dist(train.items.size());
        for (std::int64_t i = lo; i < hi; ++i) {
          const Trajectory& q = test.items[static_cast<std::size_t>(i)];
          for (std::size_t j = 0; j < train.items.size(); ++j) {
            const Trajectory& c = train.items[j];
            double acc = 0.0;
            for (std::size_t f = 0; f < q.features.size(); ++f) {
              const double d = static_cast<double>(q.features[f]) -
                               static_cast<double>(c.features[f]);
              acc += d * d;
            }
            dist[j] = {acc, j};
          }
          std::partial_sort(dist.begin(),
                            dist.begin() + static_cast<std::ptrdiff_t>(k),
                            dist.end());
          Point2 mean{0.0, 0.0};
          for (std::size_t j = 0; j < k; ++j) {
            mean = mean + *train.items[dist[j].second].label;
          }
          mean = (1.0 / static_cast<double>(k)) * mean;
          errors[static_cast<std::size_t>(i)] = distance(mean, *q.label);
          if (predictions) {
            (*predictions)[static_cast<std::size_t>(i)] = mean;
          }
        }
      });
  return evaluate_errors(std::move(errors));
}

void write_eval_csv(const std::string& path, const TrajectoryDataset& test,
                    const std::vector<Point2>& predictions,
                    const EvalReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw DataError("cannot write eval report: " + path);
  }
  out << "index,true_x,true_y,pred_x,pred_y,err_m\n";
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Point2 truth = *test.items[i].label;
    out << i << ',' << truth.x << ',' << truth.y << ',' << predictions[i].x
        << ',' << predictions[i].y << ',' << report.errors_m[i] << '\n';
  }
  out << "# summary cdf68=" << report.cdf68 << " cdf95=" << report.cdf95
      << " count=" << report.count << '\n';
}

}  // namespace trajloc
