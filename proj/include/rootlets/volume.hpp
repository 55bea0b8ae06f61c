// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rootlets/errors.hpp"

namespace rootlets {

using Affine = Eigen::Matrix4d;  // voxel index -> physical mm, last row 0 0 0 1

// Grid geometry shared by all volume flavours. Spacing and orientation are
// derived from the affine, never stored separately.
struct Geometry {
  std::array<std::size_t, 3> dims{0, 0, 0};
  Affine affine = Affine::Identity();

  std::size_t voxel_count() const { return dims[0] * dims[1] * dims[2]; }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    return i + dims[0] * (j + dims[1] * k);
  }

  Eigen::Vector3d spacing() const {
    return {affine.block<3, 1>(0, 0).norm(), affine.block<3, 1>(0, 1).norm(),
            affine.block<3, 1>(0, 2).norm()};
  }

  // Physical coordinate of a (possibly fractional) voxel index.
  Eigen::Vector3d voxel_to_mm(const Eigen::Vector3d& voxel) const {
    return affine.block<3, 3>(0, 0) * voxel + affine.block<3, 1>(0, 3);
  }

  Eigen::Vector3d mm_to_voxel(const Eigen::Vector3d& mm) const {
    return affine.block<3, 3>(0, 0).inverse() *
           (mm - affine.block<3, 1>(0, 3));
  }

  bool same_grid(const Geometry& other, double tol = 1e-4) const {
    return dims == other.dims &&
           (affine - other.affine).cwiseAbs().maxCoeff() <= tol;
  }

  // True when every voxel axis maps to a single physical axis (no shear).
  bool axis_aligned(double tol = 1e-6) const;
};

template <typename T>
struct Grid {
  Geometry geom;
  std::vector<T> data;

  Grid() = default;
  explicit Grid(Geometry g, T fill = T{})
      : geom(std::move(g)), data(geom.voxel_count(), fill) {}
  Grid(Geometry g, std::vector<T> d) : geom(std::move(g)), data(std::move(d)) {}

  T& at(std::size_t i, std::size_t j, std::size_t k) {
    return data[geom.index(i, j, k)];
  }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const {
    return data[geom.index(i, j, k)];
  }
};

using ScalarVolume = Grid<float>;
using LabelMap = Grid<std::uint8_t>;  // 0 background, 2..8 rootlet classes

// What read_nifti yields: geometry plus the decoded payload in its native
// (post-scaling) representation, so round trips stay bit-exact.
struct Volume3D {
  Geometry geom;
  std::variant<std::vector<std::uint8_t>, std::vector<std::int16_t>,
               std::vector<std::int32_t>, std::vector<float>,
               std::vector<double>>
      data;

  template <typename T>
  Grid<T> as() const;

  ScalarVolume as_scalar() const { return as<float>(); }
  LabelMap as_labels() const;

  template <typename T>
  static Volume3D from(const Grid<T>& g) {
    return Volume3D{g.geom, g.data};
  }
};

// Physical landmark (mm). PMJ positions are carried this way regardless of
// whether they arrived as a labelled voxel or a JSON coordinate.
struct PmjPoint {
  Eigen::Vector3d mm;
};

// ---------------------------------------------------------------------------
// Orientation codes
//
// Three letters, one per voxel axis, naming the physical direction the index
// increases toward: R/L (right/left), A/P (anterior/posterior), S/I
// (superior/inferior). Identity affine -> "RAS"; diag(-1,-1,-1) -> "LPI".

// Derive the code from the affine's dominant axis directions.
std::string orientation_of(const Affine& affine);

// Validate a code string: 3 letters covering all three physical axes.
bool valid_orientation_code(const std::string& code);

// Sign (+1/-1) and physical axis (0=RL, 1=AP, 2=SI) of a code letter.
int letter_axis(char c);
int letter_sign(char c);

}  // namespace rootlets
