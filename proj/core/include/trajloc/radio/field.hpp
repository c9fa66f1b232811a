// core/include/trajloc/radio/field.hpp

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
#include <span>
#include <string>
#include <vector>

#include "trajloc/geometry.hpp"
#include "trajloc/radio/propagation.hpp"

namespace trajloc {

// AP positions plus the propagation parameters they all share.
struct ApDeployment {
  std::vector<Point2> positions;
  PropagationParams params;

  std::size_t ap_count() const { return positions.size(); }

  // Uniform-random placement inside the field rectangle.
  static ApDeployment random(std::size_t count, double width, double height,
                             const PropagationParams& params,
                             std::uint64_t seed);

  // Throws ConfigError if empty or any AP lies outside the rectangle.
  void validate(double width, double height) const;
};

// Per-AP RSSI sampled on a regular grid over a rectangular field.  Grid
// point (row, col) sits at (col * spacing, row * spacing); entries are dBm
// with kOutOfRange beyond d_f.  Layout: [row][col][ap], row-major.
class RadioField {
 public:
  RadioField() = default;
  RadioField(double width, double height, double spacing, std::size_t aps);

  double width() const { return width_; }
  double height() const { return height_; }
  double spacing() const { return spacing_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t ap_count() const { return aps_; }

  float& at(std::size_t row, std::size_t col, std::size_t ap) {
    return rssi_[(row * cols_ + col) * aps_ + ap];
  }
  float at(std::size_t row, std::size_t col, std::size_t ap) const {
    return rssi_[(row * cols_ + col) * aps_ + ap];
  }

  // The m-vector at one grid point.
  std::span<const float> at_grid(std::size_t row, std::size_t col) const {
    return {rssi_.data() + (row * cols_ + col) * aps_, aps_};
  }

  // The m-vector at the grid point nearest to q (ties toward lower
  // indices).  Throws DataError if q is outside the field rectangle.
  std::span<const float> rssi_at(Point2 q) const;

  // Nearest grid indices for q, same tie rule as rssi_at.
  std::pair<std::size_t, std::size_t> nearest_grid(Point2 q) const;

  Point2 grid_point(std::size_t row, std::size_t col) const {
    return {std::min(col * spacing_, width_), std::min(row * spacing_, height_)};
  }

  Point2 snap(Point2 q) const {
    auto [r, c] = nearest_grid(q);
    return grid_point(r, c);
  }

  const std::vector<float>& raw() const { return rssi_; }

  void save(const std::string& path) const;
  static RadioField load(const std::string& path);

 private:
  double width_ = 0.0;
  double height_ = 0.0;
  double spacing_ = 0.0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t aps_ = 0;
  std::vector<float> rssi_;
};

// Number of grid lines covering [0, extent] at the given pitch:
// floor(extent / spacing) + 1, robust to the quotient landing a few ulps
// under an integer.
std::size_t grid_points(double extent, double spacing);

// Samples the whole field.  Shadowing is drawn per (grid point, AP) from a
// counter-based stream keyed by (seed, row, col, ap), so the result is
// independent of the worker count.  Finite entries are capped at the
// reference-distance RSSI (tx_power - pl_d0).
RadioField sample_field(const ApDeployment& deployment, double width,
                        double height, double spacing, std::uint64_t seed);

}  // namespace trajloc
