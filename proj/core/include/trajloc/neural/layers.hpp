// core/include/trajloc/neural/layers.hpp

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

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "trajloc/errors.hpp"
#include "trajloc/neural/param_store.hpp"
#include "trajloc/neural/tensor.hpp"
#include "trajloc/parallel.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

enum class Phase { kTrain, kEval };

// Per-call saved state for backward.  One forward produces one ctx, so two
// Siamese passes through the same network can be backpropagated in any
// order.
template <typename S>
struct LayerCtx {
  std::vector<Tensor<S>> saved;
};

// Parallelization rule used by every layer: outputs are partitioned across
// workers (per sample or per channel) and any reduction runs serially
// inside one partition, so results do not depend on the worker count.
template <typename S>
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Tensor<S> forward(const Tensor<S>& x, Phase phase,
                            LayerCtx<S>& ctx) = 0;
  // Returns the input gradient and accumulates parameter gradients.
  virtual Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) = 0;

  const std::string& name() const { return name_; }

 protected:
  explicit Layer(std::string name) : name_(std::move(name)) {}

  std::string name_;
};

namespace detail {
template <typename S>
void init_uniform_fan_in(Tensor<S>& w, std::int64_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (S& v : w.data) {
    v = static_cast<S>(rng.uniform(-bound, bound));
  }
}
}  // namespace detail

// 1D convolution, stride 1, no padding: [B, Cin, T] -> [B, Cout, T-K+1].
template <typename S>
class Conv1d final : public Layer<S> {
 public:
  Conv1d(ParamStore<S>& store, const std::string& name, std::int64_t in_ch,
         std::int64_t out_ch, std::int64_t kernel, Rng& rng)
      : Layer<S>(name), in_ch_(in_ch), out_ch_(out_ch), kernel_(kernel) {
    weight_ = store.create(name + ".weight", {out_ch, in_ch, kernel});
    bias_ = store.create(name + ".bias", {out_ch});
    detail::init_uniform_fan_in(weight_->value, in_ch * kernel, rng);
    detail::init_uniform_fan_in(bias_->value, in_ch * kernel, rng);
  }

  Tensor<S> forward(const Tensor<S>& x, Phase, LayerCtx<S>& ctx) override {
    check_rank(x, 3, this->name_);
    if (x.dim(1) != in_ch_ || x.dim(2) < kernel_) {
      throw DimError(this->name_ + ": input " + x.shape_str() +
                     " incompatible with conv(" + std::to_string(in_ch_) +
                     "->" + std::to_string(out_ch_) + ", k" +
                     std::to_string(kernel_) + ")");
    }
    const std::int64_t batch = x.dim(0);
    const std::int64_t t_out = x.dim(2) - kernel_ + 1;
    Tensor<S> y({batch, out_ch_, t_out});
    const S* w = weight_->value.ptr();
    const S* b = bias_->value.ptr();
    parallel_for(batch, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t n = lo; n < hi; ++n) {
        for (std::int64_t oc = 0; oc < out_ch_; ++oc) {
          S* out = &y.at(n, oc, 0);
          for (std::int64_t j = 0; j < t_out; ++j) {
            out[j] = b[oc];
          }
          for (std::int64_t ic = 0; ic < in_ch_; ++ic) {
            const S* in = &x.at(n, ic, 0);
            const S* wk = &w[(oc * in_ch_ + ic) * kernel_];
            for (std::int64_t k = 0; k < kernel_; ++k) {
              const S wv = wk[k];
              for (std::int64_t j = 0; j < t_out; ++j) {
                out[j] += wv * in[j + k];
              }
            }
          }
        }
      }
    });
    ctx.saved = {x};
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) override {
    const Tensor<S>& x = ctx.saved[0];
    const std::int64_t batch = x.dim(0);
    const std::int64_t t_out = gy.dim(2);
    Tensor<S> gx(x.shape);
    const S* w = weight_->value.ptr();

    parallel_for(batch, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t n = lo; n < hi; ++n) {
        for (std::int64_t oc = 0; oc < out_ch_; ++oc) {
          const S* g = &gy.at(n, oc, 0);
          for (std::int64_t ic = 0; ic < in_ch_; ++ic) {
            S* gin = &gx.at(n, ic, 0);
            const S* wk = &w[(oc * in_ch_ + ic) * kernel_];
            for (std::int64_t k = 0; k < kernel_; ++k) {
              const S wv = wk[k];
              for (std::int64_t j = 0; j < t_out; ++j) {
                gin[j + k] += wv * g[j];
              }
            }
          }
        }
      }
    });

    S* gw = weight_->grad.ptr();
    S* gb = bias_->grad.ptr();
    parallel_for(out_ch_, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t oc = lo; oc < hi; ++oc) {
        S gbias = 0;
        for (std::int64_t n = 0; n < batch; ++n) {
          const S* g = &gy.at(n, oc, 0);
          for (std::int64_t j = 0; j < t_out; ++j) {
            gbias += g[j];
          }
          for (std::int64_t ic = 0; ic < in_ch_; ++ic) {
            const S* in = &x.at(n, ic, 0);
            S* gwk = &gw[(oc * in_ch_ + ic) * kernel_];
            for (std::int64_t k = 0; k < kernel_; ++k) {
              S acc = 0;
              for (std::int64_t j = 0; j < t_out; ++j) {
                acc += g[j] * in[j + k];
              }
              gwk[k] += acc;
            }
          }
        }
        gb[oc] += gbias;
      }
    });
    return gx;
  }

 private:
  std::int64_t in_ch_, out_ch_, kernel_;
  ParamEntry<S>* weight_ = nullptr;
  ParamEntry<S>* bias_ = nullptr;
};

// Batch normalization over [B, C, T] (per channel, across B and T) or
// [B, C] (per feature, across B).  Running statistics follow
// running = (1 - momentum) * running + momentum * batch_stat; both the
// normalization and the running update use the biased batch variance.
template <typename S>
class BatchNorm1d final : public Layer<S> {
 public:
  BatchNorm1d(ParamStore<S>& store, const std::string& name,
              std::int64_t channels, double momentum = 0.1,
              double eps = 1e-5)
      : Layer<S>(name), channels_(channels), momentum_(momentum), eps_(eps) {
    gamma_ = store.create(name + ".gamma", {channels});
    beta_ = store.create(name + ".beta", {channels});
    running_mean_ = store.create(name + ".running_mean", {channels},
                                 /*trainable=*/false);
    running_var_ = store.create(name + ".running_var", {channels},
                                /*trainable=*/false);
    gamma_->value.fill(S{1});
    running_var_->value.fill(S{1});
  }

  Tensor<S> forward(const Tensor<S>& x, Phase phase,
                    LayerCtx<S>& ctx) override {
    if (x.rank() != 2 && x.rank() != 3) {
      throw DimError(this->name_ + ": expected rank-2 or rank-3 input, got " +
                     x.shape_str());
    }
    if (x.dim(1) != channels_) {
      throw DimError(this->name_ + ": channel mismatch, input " +
                     x.shape_str() + " vs " + std::to_string(channels_));
    }
    const std::int64_t batch = x.dim(0);
    const std::int64_t t = x.rank() == 3 ? x.dim(2) : 1;
    const std::int64_t n_per_ch = batch * t;
    if (phase == Phase::kTrain && n_per_ch < 2) {
      throw TrainError(this->name_ + ": batch too small for batchnorm");
    }

    Tensor<S> y(x.shape);
    Tensor<S> x_hat(x.shape);
    Tensor<S> inv_std({channels_});
    const S* gamma = gamma_->value.ptr();
    const S* beta = beta_->value.ptr();

    if (phase == Phase::kTrain) {
      parallel_for(channels_, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t c = lo; c < hi; ++c) {
          S mean = 0;
          for (std::int64_t n = 0; n < batch; ++n) {
            const S* in = element(x, n, c);
            for (std::int64_t j = 0; j < t; ++j) {
              mean += in[j];
            }
          }
          mean /= static_cast<S>(n_per_ch);
          S var = 0;
          for (std::int64_t n = 0; n < batch; ++n) {
            const S* in = element(x, n, c);
            for (std::int64_t j = 0; j < t; ++j) {
              const S d = in[j] - mean;
              var += d * d;
            }
          }
          var /= static_cast<S>(n_per_ch);
          const S istd = S{1} / std::sqrt(var + static_cast<S>(eps_));
          inv_std.data[c] = istd;
          for (std::int64_t n = 0; n < batch; ++n) {
            const S* in = element(x, n, c);
            S* xh = element(x_hat, n, c);
            S* out = element(y, n, c);
            for (std::int64_t j = 0; j < t; ++j) {
              xh[j] = (in[j] - mean) * istd;
              out[j] = gamma[c] * xh[j] + beta[c];
            }
          }
          // The running update tracks the same biased variance used for
          // normalization, so inference converges to the train-mode map on
          // a stationary batch.
          running_mean_->value.data[c] =
              static_cast<S>(1.0 - momentum_) * running_mean_->value.data[c] +
              static_cast<S>(momentum_) * mean;
          running_var_->value.data[c] =
              static_cast<S>(1.0 - momentum_) * running_var_->value.data[c] +
              static_cast<S>(momentum_) * var;
        }
      });
      ctx.saved = {x_hat, inv_std};
    } else {
      parallel_for(channels_, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t c = lo; c < hi; ++c) {
          const S mean = running_mean_->value.data[c];
          const S istd =
              S{1} / std::sqrt(running_var_->value.data[c] +
                               static_cast<S>(eps_));
          inv_std.data[c] = istd;
          for (std::int64_t n = 0; n < batch; ++n) {
            const S* in = element(x, n, c);
            S* xh = element(x_hat, n, c);
            S* out = element(y, n, c);
            for (std::int64_t j = 0; j < t; ++j) {
              xh[j] = (in[j] - mean) * istd;
              out[j] = gamma[c] * xh[j] + beta[c];
            }
          }
        }
      });
      ctx.saved = {x_hat, inv_std};
      ctx.saved.emplace_back();  // marks eval mode for backward
    }
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) override {
    const Tensor<S>& x_hat = ctx.saved[0];
    const Tensor<S>& inv_std = ctx.saved[1];
    const bool eval_mode = ctx.saved.size() == 3;
    const std::int64_t batch = gy.dim(0);
    const std::int64_t t = gy.rank() == 3 ? gy.dim(2) : 1;
    const std::int64_t n_per_ch = batch * t;

    Tensor<S> gx(gy.shape);
    const S* gamma = gamma_->value.ptr();
    S* ggamma = gamma_->grad.ptr();
    S* gbeta = beta_->grad.ptr();

    parallel_for(channels_, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t c = lo; c < hi; ++c) {
        S sum_gy = 0;
        S sum_gy_xhat = 0;
        for (std::int64_t n = 0; n < batch; ++n) {
          const S* g = element(gy, n, c);
          const S* xh = element(x_hat, n, c);
          for (std::int64_t j = 0; j < t; ++j) {
            sum_gy += g[j];
            sum_gy_xhat += g[j] * xh[j];
          }
        }
        ggamma[c] += sum_gy_xhat;
        gbeta[c] += sum_gy;

        const S istd = inv_std.data[c];
        if (eval_mode) {
          // Running stats are constants: plain affine backward.
          for (std::int64_t n = 0; n < batch; ++n) {
            const S* g = element(gy, n, c);
            S* gi = element(gx, n, c);
            for (std::int64_t j = 0; j < t; ++j) {
              gi[j] = g[j] * gamma[c] * istd;
            }
          }
        } else {
          const S scale = gamma[c] * istd / static_cast<S>(n_per_ch);
          for (std::int64_t n = 0; n < batch; ++n) {
            const S* g = element(gy, n, c);
            const S* xh = element(x_hat, n, c);
            S* gi = element(gx, n, c);
            for (std::int64_t j = 0; j < t; ++j) {
              gi[j] = scale * (static_cast<S>(n_per_ch) * g[j] - sum_gy -
                               xh[j] * sum_gy_xhat);
            }
          }
        }
      }
    });
    return gx;
  }

 private:
  static const S* element(const Tensor<S>& x, std::int64_t n, std::int64_t c) {
    return x.rank() == 3 ? &x.at(n, c, std::int64_t{0}) : &x.at(n, c);
  }
  static S* element(Tensor<S>& x, std::int64_t n, std::int64_t c) {
    return x.rank() == 3 ? &x.at(n, c, std::int64_t{0}) : &x.at(n, c);
  }

  std::int64_t channels_;
  double momentum_, eps_;
  ParamEntry<S>* gamma_ = nullptr;
  ParamEntry<S>* beta_ = nullptr;
  ParamEntry<S>* running_mean_ = nullptr;
  ParamEntry<S>* running_var_ = nullptr;
};

template <typename S>
class Relu final : public Layer<S> {
 public:
  explicit Relu(const std::string& name) : Layer<S>(name) {}

  Tensor<S> forward(const Tensor<S>& x, Phase, LayerCtx<S>& ctx) override {
    Tensor<S> y(x.shape);
    parallel_for(x.size(), [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t i = lo; i < hi; ++i) {
        y.data[i] = x.data[i] > S{0} ? x.data[i] : S{0};
      }
    });
    ctx.saved = {x};
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) override {
    const Tensor<S>& x = ctx.saved[0];
    Tensor<S> gx(gy.shape);
    parallel_for(gy.size(), [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t i = lo; i < hi; ++i) {
        gx.data[i] = x.data[i] > S{0} ? gy.data[i] : S{0};
      }
    });
    return gx;
  }
};

// Reflection padding on the temporal axis: [B, C, T] -> [B, C, T + 2 pad],
// mirroring without repeating the edge sample.  Requires pad <= T - 1.
template <typename S>
class ReflectionPad1d final : public Layer<S> {
 public:
  ReflectionPad1d(const std::string& name, std::int64_t pad)
      : Layer<S>(name), pad_(pad) {}

  Tensor<S> forward(const Tensor<S>& x, Phase, LayerCtx<S>& ctx) override {
    check_rank(x, 3, this->name_);
    const std::int64_t t = x.dim(2);
    if (pad_ > t - 1) {
      throw DimError(this->name_ + ": pad " + std::to_string(pad_) +
                     " too large for T=" + std::to_string(t));
    }
    Tensor<S> y({x.dim(0), x.dim(1), t + 2 * pad_});
    const std::int64_t rows = x.dim(0) * x.dim(1);
    parallel_for(rows, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const S* in = x.ptr() + r * t;
        S* out = y.ptr() + r * (t + 2 * pad_);
        for (std::int64_t j = 0; j < t + 2 * pad_; ++j) {
          out[j] = in[reflect_index(j - pad_, t)];
        }
      }
    });
    ctx.saved.clear();
    ctx.saved.push_back(Tensor<S>({1}));
    ctx.saved[0].data[0] = static_cast<S>(t);
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) override {
    const std::int64_t t = static_cast<std::int64_t>(ctx.saved[0].data[0]);
    Tensor<S> gx({gy.dim(0), gy.dim(1), t});
    const std::int64_t rows = gy.dim(0) * gy.dim(1);
    parallel_for(rows, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const S* g = gy.ptr() + r * (t + 2 * pad_);
        S* gi = gx.ptr() + r * t;
        for (std::int64_t j = 0; j < t + 2 * pad_; ++j) {
          gi[reflect_index(j - pad_, t)] += g[j];
        }
      }
    });
    return gx;
  }

 private:
  static std::int64_t reflect_index(std::int64_t i, std::int64_t t) {
    if (i < 0) {
      return -i;
    }
    if (i >= t) {
      return 2 * (t - 1) - i;
    }
    return i;
  }

  std::int64_t pad_;
};

// Mean over the temporal axis: [B, C, T] -> [B, C].
template <typename S>
class TemporalAvgPool final : public Layer<S> {
 public:
  explicit TemporalAvgPool(const std::string& name) : Layer<S>(name) {}

  Tensor<S> forward(const Tensor<S>& x, Phase, LayerCtx<S>& ctx) override {
    check_rank(x, 3, this->name_);
    const std::int64_t t = x.dim(2);
    Tensor<S> y({x.dim(0), x.dim(1)});
    const std::int64_t rows = x.dim(0) * x.dim(1);
    parallel_for(rows, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const S* in = x.ptr() + r * t;
        S acc = 0;
        for (std::int64_t j = 0; j < t; ++j) {
          acc += in[j];
        }
        y.data[r] = acc / static_cast<S>(t);
      }
    });
    ctx.saved.clear();
    ctx.saved.push_back(Tensor<S>({1}));
    ctx.saved[0].data[0] = static_cast<S>(t);
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) override {
    const std::int64_t t = static_cast<std::int64_t>(ctx.saved[0].data[0]);
    Tensor<S> gx({gy.dim(0), gy.dim(1), t});
    const std::int64_t rows = gy.dim(0) * gy.dim(1);
    parallel_for(rows, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t r = lo; r < hi; ++r) {
        const S g = gy.data[r] / static_cast<S>(t);
        S* gi = gx.ptr() + r * t;
        for (std::int64_t j = 0; j < t; ++j) {
          gi[j] = g;
        }
      }
    });
    return gx;
  }
};

// Fully connected: [B, In] -> [B, Out].
template <typename S>
class FullyConnected final : public Layer<S> {
 public:
  FullyConnected(ParamStore<S>& store, const std::string& name,
                 std::int64_t in, std::int64_t out, Rng& rng)
      : Layer<S>(name), in_(in), out_(out) {
    weight_ = store.create(name + ".weight", {out, in});
    bias_ = store.create(name + ".bias", {out});
    detail::init_uniform_fan_in(weight_->value, in, rng);
    detail::init_uniform_fan_in(bias_->value, in, rng);
  }

  Tensor<S> forward(const Tensor<S>& x, Phase, LayerCtx<S>& ctx) override {
    check_rank(x, 2, this->name_);
    if (x.dim(1) != in_) {
      throw DimError(this->name_ + ": input " + x.shape_str() +
                     " incompatible with fc(" + std::to_string(in_) + "->" +
                     std::to_string(out_) + ")");
    }
    const std::int64_t batch = x.dim(0);
    Tensor<S> y({batch, out_});
    const S* w = weight_->value.ptr();
    const S* b = bias_->value.ptr();
    parallel_for(batch, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t n = lo; n < hi; ++n) {
        const S* in = &x.at(n, std::int64_t{0});
        S* out = &y.at(n, std::int64_t{0});
        for (std::int64_t o = 0; o < out_; ++o) {
          const S* wr = &w[o * in_];
          S acc = b[o];
          for (std::int64_t i = 0; i < in_; ++i) {
            acc += wr[i] * in[i];
          }
          out[o] = acc;
        }
      }
    });
    ctx.saved = {x};
    return y;
  }

  Tensor<S> backward(const Tensor<S>& gy, const LayerCtx<S>& ctx) override {
    const Tensor<S>& x = ctx.saved[0];
    const std::int64_t batch = x.dim(0);
    Tensor<S> gx(x.shape);
    const S* w = weight_->value.ptr();

    parallel_for(batch, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t n = lo; n < hi; ++n) {
        const S* g = &gy.at(n, std::int64_t{0});
        S* gi = &gx.at(n, std::int64_t{0});
        for (std::int64_t o = 0; o < out_; ++o) {
          const S* wr = &w[o * in_];
          const S gv = g[o];
          for (std::int64_t i = 0; i < in_; ++i) {
            gi[i] += gv * wr[i];
          }
        }
      }
    });

    S* gw = weight_->grad.ptr();
    S* gb = bias_->grad.ptr();
    parallel_for(out_, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t o = lo; o < hi; ++o) {
        S gbias = 0;
        S* gwr = &gw[o * in_];
        for (std::int64_t n = 0; n < batch; ++n) {
          const S gv = gy.at(n, o);
          gbias += gv;
          const S* in = &x.at(n, std::int64_t{0});
          for (std::int64_t i = 0; i < in_; ++i) {
            gwr[i] += gv * in[i];
          }
        }
        gb[o] += gbias;
      }
    });
    return gx;
  }

 private:
  std::int64_t in_, out_;
  ParamEntry<S>* weight_ = nullptr;
  ParamEntry<S>* bias_ = nullptr;
};

// Layer pipeline with per-call tapes.
template <typename S>
class Sequential {
 public:
  struct Tape {
    std::vector<LayerCtx<S>> ctx;
  };

  void add(std::unique_ptr<Layer<S>> layer) {
    layers_.push_back(std::move(layer));
  }

  Tensor<S> forward(const Tensor<S>& x, Phase phase, Tape& tape) const {
    tape.ctx.assign(layers_.size(), LayerCtx<S>{});
    Tensor<S> cur = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      cur = layers_[i]->forward(cur, phase, tape.ctx[i]);
    }
    return cur;
  }

  Tensor<S> forward_eval(const Tensor<S>& x) const {
    Tape tape;
    return forward(x, Phase::kEval, tape);
  }

  Tensor<S> backward(const Tensor<S>& gy, const Tape& tape) const {
    Tensor<S> cur = gy;
    for (std::size_t i = layers_.size(); i-- > 0;) {
      cur = layers_[i]->backward(cur, tape.ctx[i]);
    }
    return cur;
  }

  std::size_t depth() const { return layers_.size(); }

 private:
  std::vector<std::unique_ptr<Layer<S>>> layers_;
};

}  // namespace trajloc
