// core/include/trajloc/neural/optim.hpp

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
#include <map>
#include <string>

#include "trajloc/errors.hpp"
#include "trajloc/neural/param_store.hpp"

namespace trajloc {

namespace detail {
template <typename S>
void check_finite_grad(const std::string& name, const Tensor<S>& grad) {
  for (S g : grad.data) {
    if (!std::isfinite(static_cast<double>(g))) {
      throw TrainError("non-finite gradient in " + name +
                       "; aborting training");
    }
  }
}
}  // namespace detail

// SGD with optional momentum (velocity v = mu v + g; p -= lr v).  Skips
// frozen and non-trainable entries; throws TrainError on NaN/inf gradients.
template <typename S>
class Sgd {
 public:
  explicit Sgd(double momentum = 0.0) : momentum_(momentum) {}

  void step(ParamStore<S>& store, double lr) {
    for (const std::string& name : store.names()) {
      ParamEntry<S>& e = store.entry(name);
      if (!e.trainable || e.frozen) {
        continue;
      }
      detail::check_finite_grad(name, e.grad);
      if (momentum_ == 0.0) {
        for (std::int64_t i = 0; i < e.value.size(); ++i) {
          e.value.data[i] -= static_cast<S>(lr) * e.grad.data[i];
        }
        continue;
      }
      Tensor<S>& v = velocity_.try_emplace(name, Tensor<S>(e.value.shape))
                         .first->second;
      for (std::int64_t i = 0; i < e.value.size(); ++i) {
        v.data[i] = static_cast<S>(momentum_) * v.data[i] + e.grad.data[i];
        e.value.data[i] -= static_cast<S>(lr) * v.data[i];
      }
    }
  }

  const std::map<std::string, Tensor<S>>& velocity() const {
    return velocity_;
  }
  std::map<std::string, Tensor<S>>& velocity() { return velocity_; }
  double momentum() const { return momentum_; }

 private:
  double momentum_;
  std::map<std::string, Tensor<S>> velocity_;
};

// Adam with bias correction.
template <typename S>
class Adam {
 public:
  Adam(double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(ParamStore<S>& store, double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (const std::string& name : store.names()) {
      ParamEntry<S>& e = store.entry(name);
      if (!e.trainable || e.frozen) {
        continue;
      }
      detail::check_finite_grad(name, e.grad);
      Tensor<S>& m =
          m_.try_emplace(name, Tensor<S>(e.value.shape)).first->second;
      Tensor<S>& v =
          v_.try_emplace(name, Tensor<S>(e.value.shape)).first->second;
      for (std::int64_t i = 0; i < e.value.size(); ++i) {
        const double g = static_cast<double>(e.grad.data[i]);
        const double mi =
            beta1_ * static_cast<double>(m.data[i]) + (1.0 - beta1_) * g;
        const double vi =
            beta2_ * static_cast<double>(v.data[i]) + (1.0 - beta2_) * g * g;
        m.data[i] = static_cast<S>(mi);
        v.data[i] = static_cast<S>(vi);
        const double update =
            lr * (mi / bc1) / (std::sqrt(vi / bc2) + eps_);
        e.value.data[i] -= static_cast<S>(update);
      }
    }
  }

  std::int64_t step_count() const { return t_; }
  void set_step_count(std::int64_t t) { t_ = t; }
  std::map<std::string, Tensor<S>>& first_moment() { return m_; }
  std::map<std::string, Tensor<S>>& second_moment() { return v_; }

 private:
  double beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::map<std::string, Tensor<S>> m_;
  std::map<std::string, Tensor<S>> v_;
};

}  // namespace trajloc
