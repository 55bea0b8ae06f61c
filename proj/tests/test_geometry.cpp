// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>

#include "rootlets/geometry.hpp"
#include "test_util.hpp"

using namespace rootlets;
using namespace rootlets::testing;

namespace {

// straight tube of the given voxel radius along the slice axis
LabelMap make_cylinder(std::size_t n_slices, double spacing, double cx,
                       double cy, double radius_vox = 3.0,
                       std::size_t nx = 16, std::size_t ny = 16) {
  LabelMap m(make_geometry(nx, ny, n_slices, spacing));
  for (std::size_t k = 0; k < n_slices; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        double dx = static_cast<double>(i) - cx;
        double dy = static_cast<double>(j) - cy;
        if (dx * dx + dy * dy <= radius_vox * radius_vox)
          m.at(i, j, k) = 1;
      }
  return m;
}

}  // namespace

TEST_CASE("straight cylinder gives a straight centerline") {
  const double sp = 0.8;
  LabelMap cyl = make_cylinder(80, sp, 8.0, 8.0);
  Centerline cl = extract_centerline(cyl, 15);
  REQUIRE(cl.points.size() == 80);
  for (const auto& p : cl.points) {
    CHECK(p.mm[0] == doctest::Approx(8.0 * sp).epsilon(1e-12));
    CHECK(p.mm[1] == doctest::Approx(8.0 * sp).epsilon(1e-12));
  }
  for (std::size_t k = 0; k < cl.arc_mm.size(); ++k)
    CHECK(std::abs(cl.arc_mm[k] - static_cast<double>(k) * sp) < 1e-9);
}

TEST_CASE("translated cylinder gives a translated centerline") {
  LabelMap a = make_cylinder(40, 1.0, 5.0, 8.0);
  LabelMap b = make_cylinder(40, 1.0, 10.0, 8.0, 3.0, 21, 16);
  Centerline ca = extract_centerline(a, 5);
  Centerline cb = extract_centerline(b, 5);
  REQUIRE(ca.points.size() == cb.points.size());
  for (std::size_t k = 0; k < ca.points.size(); ++k) {
    CHECK((cb.points[k].mm - ca.points[k].mm -
           Eigen::Vector3d(5.0, 0.0, 0.0))
              .norm() < 1e-9);
    CHECK(std::abs(ca.arc_mm[k] - cb.arc_mm[k]) < 1e-9);
  }
}

TEST_CASE("helix arc length matches the closed form within 1.5%") {
  const double R = 10.0, pitch = 40.0, sp = 1.0, cord_r = 3.0;
  const std::size_t nz = 80, nxy = 36;
  LabelMap m(make_geometry(nxy, nxy, nz, sp));
  const double c0 = 0.5 * static_cast<double>(nxy - 1);
  for (std::size_t k = 0; k < nz; ++k) {
    double phase = 2.0 * M_PI * static_cast<double>(k) * sp / pitch;
    double cx = c0 + R * std::cos(phase);
    double cy = c0 + R * std::sin(phase);
    for (std::size_t j = 0; j < nxy; ++j)
      for (std::size_t i = 0; i < nxy; ++i) {
        double dx = static_cast<double>(i) - cx;
        double dy = static_cast<double>(j) - cy;
        if (dx * dx + dy * dy <= cord_r * cord_r) m.at(i, j, k) = 1;
      }
  }
  Centerline cl = extract_centerline(m, 3);
  const double analytic = static_cast<double>(nz - 1) * sp *
                          std::sqrt(1.0 + std::pow(2.0 * M_PI * R / pitch, 2));
  CHECK(std::abs(cl.arc_mm.back() - analytic) / analytic < 0.015);
}

TEST_CASE("arc_length_between") {
  LabelMap cyl = make_cylinder(80, 0.8, 8.0, 8.0);
  Centerline cl = extract_centerline(cyl, 15);

  CHECK(arc_length_between(cl, 33, 33) == 0.0);
  CHECK(arc_length_between(cl, 20, 60) == doctest::Approx(32.0).epsilon(1e-9));
  CHECK_THROWS_AS(arc_length_between(cl, 0, 100), RangeError);
}

TEST_CASE("curved arc length dominates the chord and equals the polyline sum") {
  // bowed tube: centroid drifts sinusoidally in x
  const std::size_t nz = 60;
  LabelMap m(make_geometry(32, 16, nz, 1.0));
  for (std::size_t k = 0; k < nz; ++k) {
    double cx = 12.0 + 6.0 * std::sin(M_PI * static_cast<double>(k) / nz);
    for (std::size_t j = 0; j < 16; ++j)
      for (std::size_t i = 0; i < 32; ++i) {
        double dx = static_cast<double>(i) - cx;
        double dy = static_cast<double>(j) - 8.0;
        if (dx * dx + dy * dy <= 9.0) m.at(i, j, k) = 1;
      }
  }
  Centerline cl = extract_centerline(m, 5);
  double arc = arc_length_between(cl, 5, 55);
  auto ia = cl.entry_for_slice(5);
  auto ib = cl.entry_for_slice(55);
  double chord = (cl.points[ib].mm - cl.points[ia].mm).norm();
  CHECK(arc >= chord - 1e-9);

  double polyline = 0.0;
  for (std::size_t k = ia; k < ib; ++k)
    polyline += (cl.points[k + 1].mm - cl.points[k].mm).norm();
  CHECK(arc == doctest::Approx(polyline).epsilon(1e-12));
}

TEST_CASE("pmj distances on a straight cord") {
  const double sp = 0.8;
  LabelMap cyl = make_cylinder(80, sp, 8.0, 8.0);
  Centerline cl = extract_centerline(cyl, 15);

  SUBCASE("pmj on the rostral endpoint, 50 slices away") {
    PmjPoint pmj{cl.points.back().mm};
    CHECK(pmj_distance(cl, pmj, 79 - 50) ==
          doctest::Approx(50 * sp).epsilon(1e-9));
  }
  SUBCASE("pmj at the target slice is distance zero") {
    PmjPoint pmj{cl.points[30].mm};
    CHECK(pmj_distance(cl, pmj, 30) == doctest::Approx(0.0));
  }
  SUBCASE("pmj 2 mm rostral of the cord adds its offset") {
    Eigen::Vector3d tip = cl.points.back().mm;
    PmjPoint pmj{tip + Eigen::Vector3d(0, 0, 2.0)};
    double expected = arc_length_between(cl, 79, 40) + 2.0;
    CHECK(pmj_distance(cl, pmj, 40) ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("pmj distance is locally Lipschitz in the slice argument") {
  LabelMap cyl = make_cylinder(50, 0.8, 8.0, 8.0);
  Centerline cl = extract_centerline(cyl, 15);
  PmjPoint pmj{cl.points.back().mm};
  for (int s = 1; s < 49; ++s) {
    double d0 = pmj_distance(cl, pmj, s);
    double d1 = pmj_distance(cl, pmj, s + 1);
    double step = cl.arc_mm[cl.entry_for_slice(s + 1)] -
                  cl.arc_mm[cl.entry_for_slice(s)];
    CHECK(std::abs(d1 - d0) <= step + 1e-12);
  }
}

TEST_CASE("gaps in the cord are bridged by interpolation") {
  LabelMap cyl = make_cylinder(40, 1.0, 8.0, 8.0);
  // empty out two interior slices
  for (std::size_t j = 0; j < 16; ++j)
    for (std::size_t i = 0; i < 16; ++i) {
      cyl.at(i, j, 20) = 0;
      cyl.at(i, j, 21) = 0;
    }
  Centerline cl = extract_centerline(cyl, 1);
  CHECK(cl.points.size() == 40);  // gap filled
  bool clamped = true;
  double d = arc_length_between(cl, 10, 30, &clamped);
  CHECK(d == doctest::Approx(20.0).epsilon(1e-9));
  CHECK_FALSE(clamped);  // interior gap slices are covered after filling
}

TEST_CASE("slices outside the covered range clamp and flag") {
  LabelMap cyl = make_cylinder(40, 1.0, 8.0, 8.0);
  for (std::size_t k = 0; k < 5; ++k)  // cord absent on the lowest slices
    for (std::size_t j = 0; j < 16; ++j)
      for (std::size_t i = 0; i < 16; ++i) cyl.at(i, j, k) = 0;
  Centerline cl = extract_centerline(cyl, 1);
  bool clamped = false;
  double d = arc_length_between(cl, 2, 30, &clamped);
  CHECK(clamped);
  CHECK(d == doctest::Approx(25.0).epsilon(1e-9));  // measured from slice 5
}

TEST_CASE("smoothing window 1 reproduces the raw centroids") {
  std::mt19937 rng(16);
  LabelMap m(make_geometry(16, 16, 20, 1.0));
  // ragged blob per slice
  for (std::size_t k = 0; k < 20; ++k) {
    std::uniform_int_distribution<int> pos(4, 11);
    for (int n = 0; n < 12; ++n) m.at(pos(rng), pos(rng), k) = 1;
  }
  Centerline cl = extract_centerline(m, 1);
  for (const auto& p : cl.points) {
    double sx = 0, sy = 0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < 16; ++j)
      for (std::size_t i = 0; i < 16; ++i)
        if (m.at(i, j, static_cast<std::size_t>(p.slice))) {
          sx += static_cast<double>(i);
          sy += static_cast<double>(j);
          ++count;
        }
    CHECK(p.mm[0] == doctest::Approx(sx / count).epsilon(1e-12));
    CHECK(p.mm[1] == doctest::Approx(sy / count).epsilon(1e-12));
  }
}

TEST_CASE("degenerate inputs") {
  LabelMap empty(make_geometry(8, 8, 8));
  CHECK_THROWS_AS(extract_centerline(empty, 15), DegenerateInputError);

  LabelMap one_slice(make_geometry(8, 8, 8));
  one_slice.at(4, 4, 3) = 1;
  CHECK_THROWS_AS(extract_centerline(one_slice, 15), GeometryError);

  LabelMap ok = make_cylinder(10, 1.0, 8.0, 8.0);
  CHECK_THROWS_AS(extract_centerline(ok, 4), ArgumentError);  // even window
}
