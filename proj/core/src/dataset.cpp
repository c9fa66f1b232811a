// core/src/dataset.cpp

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

#include "trajloc/mobility/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"
#include "trajloc/parallel.hpp"
#include "trajloc/rng.hpp"

namespace trajloc {

namespace {
constexpr char kDatasetMagic[4] = {'W', 'T', 'R', 'J'};
constexpr std::uint16_t kDatasetVersion = 1;
constexpr std::uint16_t kFlagLabeled = 1 << 0;
constexpr std::uint16_t kFlagPaths = 1 << 1;
}  // namespace

void FeatureConfig::validate() const {
  if (noise_var < 0.0) {
    throw ConfigError("features: noise_var must be >= 0");
  }
  if (norm_lo >= norm_hi) {
    throw ConfigError("features: norm_lo must be below norm_hi");
  }
}

void TrajectoryDataset::validate() const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    const Trajectory& tr = items[i];
    const std::string tag = "dataset item " + std::to_string(i);
    if (tr.m != m || tr.t != t) {
      throw DataError(tag + ": shape mismatch");
    }
    if (tr.features.size() != m * t) {
      throw DataError(tag + ": feature buffer size mismatch");
    }
    if (t < 2) {
      throw DataError(tag + ": t must be >= 2");
    }
    for (float v : tr.features) {
      if (!(v >= 0.0f && v <= 1.0f)) {
        throw DataError(tag + ": feature outside [0, 1]");
      }
    }
    if (labeled && !tr.label) {
      throw DataError(tag + ": labeled dataset with unlabeled item");
    }
    if (tr.label && !tr.path.empty() && !(tr.path.back() == *tr.label)) {
      throw DataError(tag + ": label does not match path endpoint");
    }
    if (!tr.path.empty() && tr.path.size() != t) {
      throw DataError(tag + ": path length differs from t");
    }
  }
}

Trajectory attach_features(const std::vector<Point2>& path,
                           const RadioField& field, const FeatureConfig& fc,
                           std::uint64_t seed) {
  fc.validate();
  Trajectory tr;
  tr.m = field.ap_count();
  tr.t = path.size();
  tr.features.resize(tr.m * tr.t);
  tr.path = path;

  const double noise_std = std::sqrt(fc.noise_var);
  const double scale = 1.0 / (fc.norm_hi - fc.norm_lo);
  Rng rng(seed);
  for (std::size_t j = 0; j < tr.t; ++j) {
    const std::span<const float> rssi = field.rssi_at(path[j]);
    for (std::size_t ap = 0; ap < tr.m; ++ap) {
      const double noise = noise_std * rng.gaussian();
      float feat = 0.0f;
      if (!is_out_of_range(rssi[ap])) {
        const double noisy = rssi[ap] + noise;
        feat = static_cast<float>(
            std::clamp((noisy - fc.norm_lo) * scale, 0.0, 1.0));
      }
      tr.at(ap, j) = feat;
    }
  }
  return tr;
}

TrajectoryDataset gen_dataset(const RadioField& field,
                              const DatasetGenConfig& cfg, std::size_t count,
                              std::uint64_t seed) {
  if (count < 1) {
    throw ConfigError("gen_dataset: count must be >= 1");
  }
  cfg.mobility.validate();
  cfg.features.validate();

  TrajectoryDataset ds;
  ds.m = field.ap_count();
  ds.t = cfg.mobility.t;
  ds.labeled = cfg.labeled;
  ds.items.resize(count);

  parallel_for(static_cast<std::int64_t>(count),
               [&](std::int64_t begin, std::int64_t end) {
                 for (std::int64_t i = begin; i < end; ++i) {
                   const std::uint64_t item_seed =
                       hash_combine(seed, static_cast<std::uint64_t>(i));
                   const std::vector<Point2> path = gen_path(
                       field, cfg.mobility, derive_seed(item_seed, "path"));
                   Trajectory tr = attach_features(
                       path, field, cfg.features, derive_seed(item_seed, "rssi"));
                   if (cfg.labeled) {
                     tr.label = path.back();
                   }
                   if (!cfg.keep_paths) {
                     tr.path.clear();
                   }
                   ds.items[static_cast<std::size_t>(i)] = std::move(tr);
                 }
               });
  return ds;
}

void write_dataset(const TrajectoryDataset& ds, const std::string& path) {
  const bool has_paths =
      !ds.items.empty() &&
      std::all_of(ds.items.begin(), ds.items.end(),
                  [](const Trajectory& tr) { return !tr.path.empty(); });
  ByteWriter w;
  w.put_magic(kDatasetMagic);
  w.put_u16(kDatasetVersion);
  std::uint16_t flags = 0;
  if (ds.labeled) {
    flags |= kFlagLabeled;
  }
  if (has_paths) {
    flags |= kFlagPaths;
  }
  w.put_u16(flags);
  w.put_u16(static_cast<std::uint16_t>(ds.m));
  w.put_u16(static_cast<std::uint16_t>(ds.t));
  w.put_u64(ds.items.size());
  for (const Trajectory& tr : ds.items) {
    for (float v : tr.features) {
      w.put_f32(v);
    }
    if (ds.labeled) {
      w.put_f32(static_cast<float>(tr.label->x));
      w.put_f32(static_cast<float>(tr.label->y));
    }
    if (has_paths) {
      for (const Point2& p : tr.path) {
        w.put_f32(static_cast<float>(p.x));
        w.put_f32(static_cast<float>(p.y));
      }
    }
  }
  w.save(path);
}

TrajectoryDataset read_dataset(const std::string& path) {
  ByteReader r = ByteReader::from_file(path);
  r.expect_magic(kDatasetMagic, "trajectory dataset");
  const std::uint16_t version = r.get_u16();
  if (version != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(version),
                      r.offset() - 2);
  }
  const std::uint16_t flags = r.get_u16();
  TrajectoryDataset ds;
  ds.labeled = (flags & kFlagLabeled) != 0;
  const bool has_paths = (flags & kFlagPaths) != 0;
  ds.m = r.get_u16();
  ds.t = r.get_u16();
  const std::uint64_t count = r.get_u64();
  if (ds.m == 0 || ds.t < 2) {
    throw FormatError("dataset header has degenerate shape", r.offset());
  }
  ds.items.resize(count);
  for (Trajectory& tr : ds.items) {
    tr.m = ds.m;
    tr.t = ds.t;
    tr.features.resize(ds.m * ds.t);
    for (float& v : tr.features) {
      v = r.get_f32();
    }
    if (ds.labeled) {
      Point2 label;
      label.x = r.get_f32();
      label.y = r.get_f32();
      tr.label = label;
    }
    if (has_paths) {
      tr.path.resize(ds.t);
      for (Point2& p : tr.path) {
        p.x = r.get_f32();
        p.y = r.get_f32();
      }
    }
  }
  if (!r.at_end()) {
    throw FormatError("trailing bytes after dataset payload", r.offset());
  }
  return ds;
}

TrajectoryDataset strip_labels(const TrajectoryDataset& ds) {
  TrajectoryDataset out = ds;
  out.labeled = false;
  for (Trajectory& tr : out.items) {
    tr.label.reset();
  }
  return out;
}

}  // namespace trajloc
