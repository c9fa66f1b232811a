// core/src/field.cpp

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

#include "trajloc/radio/field.hpp"

#include <cmath>
#include <string>

#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"
#include "trajloc/parallel.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

namespace {
constexpr char kFieldMagic[4] = {'W', 'F', 'L', 'D'};
constexpr std::uint16_t kFieldVersion = 1;
}  // namespace

ApDeployment ApDeployment::random(std::size_t count, double width,
                                  double height,
                                  const PropagationParams& params,
                                  std::uint64_t seed) {
  ApDeployment d;
  d.params = params;
  Rng rng(derive_seed(seed, "ap-placement"));
  d.positions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    d.positions.push_back({rng.uniform(0.0, width), rng.uniform(0.0, height)});
  }
  return d;
}

void ApDeployment::validate(double width, double height) const {
  params.validate();
  if (positions.empty()) {
    throw ConfigError("deployment: at least one AP required");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Point2 p = positions[i];
    if (p.x < 0.0 || p.x > width || p.y < 0.0 || p.y > height) {
      throw ConfigError("deployment: AP " + std::to_string(i) +
                        " outside field rectangle");
    }
  }
}

RadioField::RadioField(double width, double height, double spacing,
                       std::size_t aps)
    : width_(width),
      height_(height),
      spacing_(spacing),
      rows_(grid_points(height, spacing)),
      cols_(grid_points(width, spacing)),
      aps_(aps),
      rssi_(rows_ * cols_ * aps_, kOutOfRange) {}

std::size_t grid_points(double extent, double spacing) {
  if (spacing <= 0.0) {
    throw ConfigError("field: spacing must be > 0");
  }
  if (extent <= 0.0) {
    throw ConfigError("field: zero-area field");
  }
  const double q = extent / spacing;
  return static_cast<std::size_t>(std::floor(q * (1.0 + 1e-12) + 1e-9)) + 1;
}

std::pair<std::size_t, std::size_t> RadioField::nearest_grid(Point2 q) const {
  if (q.x < 0.0 || q.x > width_ || q.y < 0.0 || q.y > height_) {
    throw DataError("rssi_at: point (" + std::to_string(q.x) + ", " +
                    std::to_string(q.y) + ") outside field bounds");
  }
  // Round half toward the lower index.
  const auto snap_index = [](double v, double pitch, std::size_t count) {
    const long idx = static_cast<long>(std::ceil(v / pitch - 0.5));
    if (idx < 0) {
      return std::size_t{0};
    }
    return std::min(static_cast<std::size_t>(idx), count - 1);
  };
  return {snap_index(q.y, spacing_, rows_), snap_index(q.x, spacing_, cols_)};
}

std::span<const float> RadioField::rssi_at(Point2 q) const {
  auto [row, col] = nearest_grid(q);
  return at_grid(row, col);
}

RadioField sample_field(const ApDeployment& deployment, double width,
                        double height, double spacing, std::uint64_t seed) {
  deployment.validate(width, height);
  RadioField field(width, height, spacing, deployment.ap_count());
  const PropagationParams& p = deployment.params;
  // RSSI cannot exceed the value one reference distance from the AP.
  const float rssi_cap = static_cast<float>(p.tx_power - p.pl_d0);

  const auto rows = static_cast<std::int64_t>(field.rows());
  parallel_for(rows, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t row = begin; row < end; ++row) {
      for (std::size_t col = 0; col < field.cols(); ++col) {
        const Point2 q = field.grid_point(static_cast<std::size_t>(row), col);
        for (std::size_t ap = 0; ap < deployment.ap_count(); ++ap) {
          const double chi =
              p.sigma * gaussian_at(seed, static_cast<std::uint64_t>(row),
                                    col, ap);
          const float rssi = rssi_from_ap(deployment.positions[ap], q, p, chi);
          field.at(static_cast<std::size_t>(row), col, ap) =
              is_out_of_range(rssi) ? kOutOfRange : std::min(rssi, rssi_cap);
        }
      }
    }
  });
  return field;
}

void RadioField::save(const std::string& path) const {
  ByteWriter w;
  w.put_magic(kFieldMagic);
  w.put_u16(kFieldVersion);
  w.put_f64(width_);
  w.put_f64(height_);
  w.put_f64(spacing_);
  w.put_u16(static_cast<std::uint16_t>(aps_));
  w.put_u32(static_cast<std::uint32_t>(rows_));
  w.put_u32(static_cast<std::uint32_t>(cols_));
  for (float v : rssi_) {
    w.put_f32(v);
  }
  w.save(path);
}

RadioField RadioField::load(const std::string& path) {
  ByteReader r = ByteReader::from_file(path);
  r.expect_magic(kFieldMagic, "field file");
  const std::uint16_t version = r.get_u16();
  if (version != kFieldVersion) {
    throw FormatError("unsupported field file version " +
                          std::to_string(version),
                      r.offset() - 2);
  }
  RadioField f;
  f.width_ = r.get_f64();
  f.height_ = r.get_f64();
  f.spacing_ = r.get_f64();
  f.aps_ = r.get_u16();
  f.rows_ = r.get_u32();
  f.cols_ = r.get_u32();
  if (f.width_ <= 0.0 || f.height_ <= 0.0 || f.spacing_ <= 0.0 ||
      f.aps_ == 0 || f.rows_ == 0 || f.cols_ == 0) {
    throw FormatError("field file header has degenerate dimensions",
                      r.offset());
  }
  f.rssi_.resize(f.rows_ * f.cols_ * f.aps_);
  for (float& v : f.rssi_) {
    v = r.get_f32();
  }
  if (!r.at_end()) {
    throw FormatError("trailing bytes after field payload", r.offset());
  }
  return f;
}

}  // namespace trajloc
