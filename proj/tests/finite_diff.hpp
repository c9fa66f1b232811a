// tests/finite_diff.hpp

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

// Central-finite-difference gradient oracle.  Test-only; independent of the
// backward implementations it checks: it re-runs layer forwards on
// perturbed inputs/parameters and differentiates numerically.

#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "trajloc/neural/layers.hpp"
#include "trajloc/neural/param_store.hpp"
#include "trajloc/neural/tensor.hpp"
#include "trajloc/rng.hpp"

namespace trajloc::testing {

inline double dot(const Tensor<double>& y, const Tensor<double>& c) {
  double acc = 0.0;
  for (std::int64_t i = 0; i < y.size(); ++i) {
    acc += y.data[i] * c.data[i];
  }
  return acc;
}

struct GradCheckOutcome {
  double max_rel_err = 0.0;
  std::string worst;  // which derivative was worst
};

inline void track(GradCheckOutcome& out, double analytic, double numeric,
                  const std::string& what) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), 1e-3});
  const double rel = std::abs(analytic - numeric) / denom;
  if (rel > out.max_rel_err) {
    out.max_rel_err = rel;
    out.worst = what;
  }
}

// Checks d(dot(layer(x), c))/dx and /dparams against central differences.
// The layer runs in double precision with step h.
inline GradCheckOutcome check_layer(Layer<double>& layer,
                                    ParamStore<double>& store,
                                    const Tensor<double>& x, Phase phase,
                                    Rng& rng, double h = 1e-5) {
  LayerCtx<double> ctx;
  const Tensor<double> y0 = layer.forward(x, phase, ctx);
  Tensor<double> c(y0.shape);
  for (double& v : c.data) {
    v = rng.uniform(-1.0, 1.0);
  }

  store.zero_grads();
  LayerCtx<double> ctx_b;
  const Tensor<double> y_b = layer.forward(x, phase, ctx_b);
  (void)y_b;
  const Tensor<double> gx = layer.backward(c, ctx_b);

  GradCheckOutcome out;

  Tensor<double> x_mut = x;
  const auto loss_at = [&](const Tensor<double>& input) {
    LayerCtx<double> tmp;
    return dot(layer.forward(input, phase, tmp), c);
  };
  for (std::int64_t i = 0; i < x.size(); ++i) {
    const double saved = x_mut.data[i];
    x_mut.data[i] = saved + h;
    const double up = loss_at(x_mut);
    x_mut.data[i] = saved - h;
    const double down = loss_at(x_mut);
    x_mut.data[i] = saved;
    track(out, gx.data[i], (up - down) / (2.0 * h),
          layer.name() + " dx[" + std::to_string(i) + "]");
  }

  for (const std::string& name : store.names()) {
    ParamEntry<double>& e = store.entry(name);
    if (!e.trainable) {
      continue;  // running stats get no gradient
    }
    for (std::int64_t i = 0; i < e.value.size(); ++i) {
      const double saved = e.value.data[i];
      e.value.data[i] = saved + h;
      const double up = loss_at(x);
      e.value.data[i] = saved - h;
      const double down = loss_at(x);
      e.value.data[i] = saved;
      track(out, e.grad.data[i], (up - down) / (2.0 * h),
            name + "[" + std::to_string(i) + "]");
    }
  }
  return out;
}

// Random input with entries kept away from ReLU kinks.
inline Tensor<double> random_input(const std::vector<std::int64_t>& shape,
                                   Rng& rng, bool away_from_zero = false) {
  Tensor<double> x(shape);
  for (double& v : x.data) {
    v = rng.uniform(-1.0, 1.0);
    if (away_from_zero) {
      while (std::abs(v) < 0.05) {
        v = rng.uniform(-1.0, 1.0);
      }
    }
  }
  return x;
}

}  // namespace trajloc::testing
