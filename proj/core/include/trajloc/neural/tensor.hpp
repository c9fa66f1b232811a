// core/include/trajloc/neural/tensor.hpp

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

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "trajloc/errors.hpp"

namespace trajloc {

// Dense row-major tensor of rank 1..3.  Training runs with S = float;
// gradient-check mode instantiates the same code with S = double.
template <typename S>
struct Tensor {
  std::vector<std::int64_t> shape;
  std::vector<S> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::int64_t> dims)
      : shape(std::move(dims)),
        data(static_cast<std::size_t>(count(shape)), S{0}) {}

  static std::int64_t count(const std::vector<std::int64_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::int64_t{1},
                           std::multiplies<>());
  }

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
  std::int64_t dim(std::size_t i) const { return shape[i]; }
  std::size_t rank() const { return shape.size(); }

  S* ptr() { return data.data(); }
  const S* ptr() const { return data.data(); }

  // Rank-2 [rows, cols] access.
  S& at(std::int64_t i, std::int64_t j) { return data[i * shape[1] + j]; }
  const S& at(std::int64_t i, std::int64_t j) const {
    return data[i * shape[1] + j];
  }

  // Rank-3 [b, c, t] access.
  S& at(std::int64_t b, std::int64_t c, std::int64_t t) {
    return data[(b * shape[1] + c) * shape[2] + t];
  }
  const S& at(std::int64_t b, std::int64_t c, std::int64_t t) const {
    return data[(b * shape[1] + c) * shape[2] + t];
  }

  void fill(S v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  std::string shape_str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
      s += (i ? "x" : "") + std::to_string(shape[i]);
    }
    return s + "]";
  }
};

template <typename S>
void check_rank(const Tensor<S>& x, std::size_t rank, const std::string& who) {
  if (x.rank() != rank) {
    throw DimError(who + ": expected rank-" + std::to_string(rank) +
                   " input, got " + x.shape_str());
  }
}

}  // namespace trajloc
