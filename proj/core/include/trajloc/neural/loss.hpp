// core/include/trajloc/neural/loss.hpp

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
#include <span>

#include "trajloc/errors.hpp"
#include "trajloc/neural/tensor.hpp"

namespace trajloc {

template <typename S>
S vector_norm(std::span<const S> v) {
  S acc = 0;
  for (S x : v) {
    acc += x * x;
  }
  return std::sqrt(acc);
}

// cos(p, z) for plain vectors; throws TrainError on a zero-norm input.
template <typename S>
S cosine_similarity(std::span<const S> p, std::span<const S> z) {
  const S np = vector_norm(p);
  const S nz = vector_norm(z);
  if (!(np > S{0}) || !(nz > S{0})) {
    throw TrainError("cosine_similarity: zero-norm vector");
  }
  S dot = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * z[i];
  }
  return dot / (np * nz);
}

// Negative cosine similarity D(p, z) = -cos(p, z) with z treated as a
// constant (the stop-gradient side).  Writes dD/dp into gp scaled by
// `weight`; returns D.
template <typename S>
S neg_cosine_with_grad(std::span<const S> p, std::span<const S> z,
                       std::span<S> gp, S weight) {
  const S np = vector_norm(p);
  const S nz = vector_norm(z);
  if (!(np > S{0}) || !(nz > S{0})) {
    throw TrainError("neg_cosine: zero-norm embedding");
  }
  S dot = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * z[i];
  }
  const S cos = dot / (np * nz);
  // d(-cos)/dp_i = (cos * p_i / |p|^2) - z_i / (|p| |z|)
  for (std::size_t i = 0; i < p.size(); ++i) {
    gp[i] += weight * (cos * p[i] / (np * np) - z[i] / (np * nz));
  }
  return -cos;
}

template <typename S>
struct SiameseLoss {
  S loss = 0;       // batch mean of Eq-style symmetric loss, in [-1, 1]
  Tensor<S> gp1;    // dLoss/dp1 (z2 stopped)
  Tensor<S> gp2;    // dLoss/dp2 (z1 stopped)
};

// L = mean_b [ 1/2 D(p1, SG(z2)) + 1/2 D(p2, SG(z1)) ].  Gradients flow
// into p1 and p2 only; the z tensors receive none.
template <typename S>
SiameseLoss<S> simsiam_loss(const Tensor<S>& p1, const Tensor<S>& z2,
                            const Tensor<S>& p2, const Tensor<S>& z1) {
  if (!p1.same_shape(z2) || !p2.same_shape(z1) || !p1.same_shape(p2)) {
    throw DimError("simsiam_loss: mismatched embedding shapes");
  }
  const std::int64_t batch = p1.dim(0);
  const std::int64_t dim = p1.dim(1);
  SiameseLoss<S> out;
  out.gp1 = Tensor<S>(p1.shape);
  out.gp2 = Tensor<S>(p2.shape);
  const S weight = S{0.5} / static_cast<S>(batch);
  S total = 0;
  for (std::int64_t b = 0; b < batch; ++b) {
    const auto row = [dim](const Tensor<S>& t, std::int64_t i) {
      return std::span<const S>(t.ptr() + i * dim, static_cast<std::size_t>(dim));
    };
    const auto grow = [dim](Tensor<S>& t, std::int64_t i) {
      return std::span<S>(t.ptr() + i * dim, static_cast<std::size_t>(dim));
    };
    total += neg_cosine_with_grad(row(p1, b), row(z2, b), grow(out.gp1, b),
                                  weight);
    total += neg_cosine_with_grad(row(p2, b), row(z1, b), grow(out.gp2, b),
                                  weight);
  }
  out.loss = total / static_cast<S>(2 * batch);
  return out;
}

template <typename S>
struct MseLoss {
  S loss = 0;
  Tensor<S> gpred;
};

// Mean squared error over all entries: mean_b |pred_b - target_b|^2 / dim.
// For 2-D positions this is the mean squared Euclidean error in m^2 halved
// per coordinate; the gradient matches d/dpred of the stated loss.
template <typename S>
MseLoss<S> mse_loss(const Tensor<S>& pred, const Tensor<S>& target) {
  if (!pred.same_shape(target)) {
    throw DimError("mse_loss: shape mismatch " + pred.shape_str() + " vs " +
                   target.shape_str());
  }
  MseLoss<S> out;
  out.gpred = Tensor<S>(pred.shape);
  const std::int64_t n = pred.size();
  S total = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const S d = pred.data[i] - target.data[i];
    total += d * d;
    out.gpred.data[i] = S{2} * d / static_cast<S>(n);
  }
  out.loss = total / static_cast<S>(n);
  return out;
}

// Mean per-dimension standard deviation of L2-normalized embedding rows;
// the collapse metric (a healthy embedding sits near 1/sqrt(dim)).
template <typename S>
S normalized_embedding_std(const Tensor<S>& z) {
  const std::int64_t batch = z.dim(0);
  const std::int64_t dim = z.dim(1);
  if (batch < 2) {
    return S{0};
  }
  Tensor<S> zn(z.shape);
  for (std::int64_t b = 0; b < batch; ++b) {
    std::span<const S> row(z.ptr() + b * dim, static_cast<std::size_t>(dim));
    const S norm = vector_norm(row);
    if (!(norm > S{0})) {
      throw TrainError("normalized_embedding_std: zero-norm embedding");
    }
    for (std::int64_t i = 0; i < dim; ++i) {
      zn.at(b, i) = z.at(b, i) / norm;
    }
  }
  S acc = 0;
  for (std::int64_t i = 0; i < dim; ++i) {
    S mean = 0;
    for (std::int64_t b = 0; b < batch; ++b) {
      mean += zn.at(b, i);
    }
    mean /= static_cast<S>(batch);
    S var = 0;
    for (std::int64_t b = 0; b < batch; ++b) {
      const S d = zn.at(b, i) - mean;
      var += d * d;
    }
    acc += std::sqrt(var / static_cast<S>(batch - 1));
  }
  return acc / static_cast<S>(dim);
}

}  // namespace trajloc
