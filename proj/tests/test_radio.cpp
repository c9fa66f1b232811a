// tests/test_radio.cpp

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

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"
#include "trajloc/parallel.hpp"
#include "trajloc/radio/field.hpp"
#include "trajloc/radio/propagation.hpp"
#include "trajloc/rng.hpp"

using namespace trajloc;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

ApDeployment two_ap_deployment(double width, double height) {
  ApDeployment d;
  d.positions = {{width * 0.25, height * 0.25}, {width * 0.75, height * 0.75}};
  return d;
}

}  // namespace

TEST_SUITE("radio") {

TEST_CASE("path_loss matches the closed form") {
  PropagationParams p;
  SUBCASE("reference distance gives pl_d0") {
    CHECK(path_loss(p.d0, p, 0.0) == doctest::Approx(p.pl_d0).epsilon(1e-12));
  }
  SUBCASE("one decade with n=4 adds exactly 40 dB") {
    p.n = 4.0;
    CHECK(path_loss(10.0 * p.d0, p, 0.0) == p.pl_d0 + 40.0);
  }
  SUBCASE("doubling distance with n=4, pl_d0=40, chi=1.5") {
    p.n = 4.0;
    p.pl_d0 = 40.0;
    // 40 + 40*log10(2) + 1.5, evaluated independently.
    CHECK(path_loss(2.0 * p.d0, p, 1.5) ==
          doctest::Approx(53.54119982655925).epsilon(1e-12));
  }
}

TEST_CASE("path_loss rejects non-positive distances") {
  PropagationParams p;
  CHECK_THROWS_AS(path_loss(0.0, p, 0.0), DataError);
  CHECK_THROWS_AS(path_loss(-1.0, p, 0.0), DataError);
}

TEST_CASE("path_loss is monotone in d and linear in chi") {
  PropagationParams p;
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double d = rng.uniform(0.01, 100.0);
    const double step = rng.uniform(0.01, 10.0);
    const double chi = rng.gaussian();
    const double delta = rng.uniform(-5.0, 5.0);
    CHECK(path_loss(d + step, p, chi) > path_loss(d, p, chi));
    CHECK(path_loss(d, p, chi + delta) ==
          doctest::Approx(path_loss(d, p, chi) + delta).epsilon(1e-12));
  }
}

TEST_CASE("rssi_from_ap honors range and reference clamping") {
  PropagationParams p;
  p.sigma = 0.0;
  SUBCASE("beyond d_f returns the sentinel") {
    const float v = rssi_from_ap({0.0, 0.0}, {31.0, 0.0}, p, 0.0);
    CHECK(is_out_of_range(v));
  }
  SUBCASE("at the reference distance") {
    const float v = rssi_from_ap({0.0, 0.0}, {p.d0, 0.0}, p, 0.0);
    CHECK(v == doctest::Approx(p.tx_power - p.pl_d0));
  }
  SUBCASE("below d0 clamps to d0") {
    const float v = rssi_from_ap({0.0, 0.0}, {0.01, 0.0}, p, 0.0);
    CHECK(v == doctest::Approx(p.tx_power - p.pl_d0));
  }
}

TEST_CASE("rssi_from_ap equals an independent recomputation under one seed") {
  PropagationParams p;
  p.sigma = 1.0;
  Rng rng(12345);
  const float got = rssi_from_ap({0.0, 0.0}, {15.0, 0.0}, p, rng);

  Rng rng2(12345);
  const double chi = p.sigma * rng2.gaussian();
  const double expected =
      p.tx_power - (p.pl_d0 + 10.0 * p.n * std::log10(15.0 / p.d0) + chi);
  // Storage is f32; the recomputation must round through float once too.
  CHECK(got == static_cast<float>(expected));
}

TEST_CASE("grid_points survives inexact spacing quotients") {
  CHECK(grid_points(60.0, 0.1) == 601);
  CHECK(grid_points(120.0, 0.1) == 1201);
  CHECK(grid_points(1.0, 1.0) == 2);
  CHECK(grid_points(30.0, 0.5) == 61);
}

TEST_CASE("sample_field produces the spec grid shapes") {
  PropagationParams params;
  SUBCASE("60x60 m at 0.1 m spacing with 18 APs") {
    const ApDeployment d =
        ApDeployment::random(18, 60.0, 60.0, params, 1);
    const RadioField f = sample_field(d, 60.0, 60.0, 0.1, 1);
    CHECK(f.rows() == 601);
    CHECK(f.cols() == 601);
    CHECK(f.ap_count() == 18);
  }
  SUBCASE("120x120 m at 0.1 m spacing") {
    const ApDeployment d = ApDeployment::random(1, 120.0, 120.0, params, 2);
    const RadioField f = sample_field(d, 120.0, 120.0, 0.1, 2);
    CHECK(f.rows() == 1201);
    CHECK(f.cols() == 1201);
  }
  SUBCASE("1x1 m at 1.0 m spacing with 1 AP") {
    ApDeployment d;
    d.positions = {{0.5, 0.5}};
    const RadioField f = sample_field(d, 1.0, 1.0, 1.0, 3);
    CHECK(f.rows() == 2);
    CHECK(f.cols() == 2);
    CHECK(f.ap_count() == 1);
  }
}

TEST_CASE("sample_field with sigma=0 equals the closed form everywhere") {
  ApDeployment d = two_ap_deployment(10.0, 8.0);
  d.params.sigma = 0.0;
  d.params.d_f = 50.0;
  const RadioField f = sample_field(d, 10.0, 8.0, 0.5, 9);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      const Point2 q = f.grid_point(r, c);
      for (std::size_t ap = 0; ap < f.ap_count(); ++ap) {
        const double dist = std::max(distance(d.positions[ap], q),
                                     d.params.d0);
        const double expected =
            d.params.tx_power -
            (d.params.pl_d0 + 10.0 * d.params.n * std::log10(dist / d.params.d0));
        // Stored as f32: compare against the once-rounded closed form
        // within 1e-9 relative.
        const double rel =
            std::abs(f.at(r, c, ap) - static_cast<float>(expected)) /
            std::max(std::abs(expected), 1e-12);
        CHECK(rel < 1e-9);
      }
    }
  }
}

TEST_CASE("sentinel appears iff distance exceeds d_f") {
  ApDeployment d;
  d.positions = {{0.0, 0.0}};
  d.params.d_f = 5.0;
  const RadioField f = sample_field(d, 10.0, 10.0, 0.5, 11);
  for (std::size_t r = 0; r < f.rows(); ++r) {
    for (std::size_t c = 0; c < f.cols(); ++c) {
      const double dist = distance(f.grid_point(r, c), d.positions[0]);
      CHECK(is_out_of_range(f.at(r, c, 0)) == (dist > d.params.d_f));
    }
  }
}

TEST_CASE("finite field entries never exceed the reference-distance RSSI") {
  ApDeployment d = two_ap_deployment(6.0, 6.0);
  d.params.sigma = 4.0;  // large shadowing to stress the cap
  const RadioField f = sample_field(d, 6.0, 6.0, 0.25, 13);
  const float cap =
      static_cast<float>(d.params.tx_power - d.params.pl_d0);
  for (float v : f.raw()) {
    if (!is_out_of_range(v)) {
      CHECK(v <= cap);
    }
  }
}

TEST_CASE("sample_field is bitwise deterministic and thread-count invariant") {
  ApDeployment d = two_ap_deployment(12.0, 12.0);
  const RadioField a = sample_field(d, 12.0, 12.0, 0.1, 99);
  const RadioField b = sample_field(d, 12.0, 12.0, 0.1, 99);
  CHECK(a.raw() == b.raw());

  const int saved = worker_count();
  set_worker_count(1);
  const RadioField serial = sample_field(d, 12.0, 12.0, 0.1, 99);
  set_worker_count(saved);
  CHECK(serial.raw() == a.raw());

  const RadioField other_seed = sample_field(d, 12.0, 12.0, 0.1, 100);
  CHECK(other_seed.raw() != a.raw());
}

TEST_CASE("rssi_at snaps to the nearest grid point with lower-index ties") {
  ApDeployment d = two_ap_deployment(2.0, 2.0);
  d.params.sigma = 0.0;
  const RadioField f = sample_field(d, 2.0, 2.0, 0.1, 5);

  SUBCASE("exactly on a grid point") {
    const auto v = f.rssi_at({0.3, 0.5});
    const auto expected = f.at_grid(5, 3);
    CHECK(std::equal(v.begin(), v.end(), expected.begin()));
  }
  SUBCASE("nearest rounding") {
    CHECK(f.nearest_grid({0.04, 0.04}) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(f.nearest_grid({0.06, 0.14}) == std::pair<std::size_t, std::size_t>{1, 1});
  }
  SUBCASE("half-way ties go to the lower index") {
    CHECK(f.nearest_grid({0.05, 0.05}) == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(f.nearest_grid({0.15, 0.25}) == std::pair<std::size_t, std::size_t>{2, 1});
  }
  SUBCASE("outside the bounds") {
    CHECK_THROWS_AS(f.rssi_at({-0.1, 0.0}), DataError);
    CHECK_THROWS_AS(f.rssi_at({0.0, 2.3}), DataError);
  }
}

TEST_CASE("field file round-trips bitwise") {
  ApDeployment d = two_ap_deployment(4.0, 3.0);
  const RadioField f = sample_field(d, 4.0, 3.0, 0.5, 21);
  const std::string path = temp_path("trajloc_test_field.wfld");
  f.save(path);
  const std::string path2 = temp_path("trajloc_test_field2.wfld");
  RadioField::load(path).save(path2);
  CHECK(file_hash(path) == file_hash(path2));

  const RadioField g = RadioField::load(path);
  CHECK(g.raw() == f.raw());
  CHECK(g.width() == f.width());
  CHECK(g.spacing() == f.spacing());
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("corrupted field magic is rejected with offset 0") {
  ApDeployment d = two_ap_deployment(4.0, 3.0);
  const RadioField f = sample_field(d, 4.0, 3.0, 0.5, 21);
  const std::string path = temp_path("trajloc_test_field_bad.wfld");
  f.save(path);
  {
    std::fstream file(path, std::ios::in | std::ios::out | std::ios::binary);
    file.put('X');
  }
  try {
    RadioField::load(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 0);
  }
  std::remove(path.c_str());
}

TEST_CASE("deployment validation") {
  PropagationParams params;
  SUBCASE("AP outside bounds") {
    ApDeployment d;
    d.positions = {{11.0, 1.0}};
    d.params = params;
    CHECK_THROWS_AS(d.validate(10.0, 10.0), ConfigError);
  }
  SUBCASE("empty list") {
    ApDeployment d;
    d.params = params;
    CHECK_THROWS_AS(d.validate(10.0, 10.0), ConfigError);
  }
  SUBCASE("zero-area field") {
    const ApDeployment d = ApDeployment::random(2, 10.0, 10.0, params, 1);
    CHECK_THROWS_AS(sample_field(d, 0.0, 10.0, 0.5, 1), ConfigError);
  }
  SUBCASE("bad propagation parameters") {
    PropagationParams bad = params;
    bad.d_f = bad.d0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}

}  // TEST_SUITE
