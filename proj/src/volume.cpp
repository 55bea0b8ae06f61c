// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/volume.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace rootlets {

namespace {

constexpr char kPositiveLetter[3] = {'R', 'A', 'S'};
constexpr char kNegativeLetter[3] = {'L', 'P', 'I'};

}  // namespace

bool Geometry::axis_aligned(double tol) const {
  for (int col = 0; col < 3; ++col) {
    Eigen::Vector3d c = affine.block<3, 1>(0, col);
    double n = c.norm();
    if (n <= 0.0) return false;
    c /= n;
    int dominant;
    c.cwiseAbs().maxCoeff(&dominant);
    for (int row = 0; row < 3; ++row) {
      if (row != dominant && std::abs(c[row]) > tol) return false;
    }
  }
  return true;
}

int letter_axis(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'R':
    case 'L':
      return 0;
    case 'A':
    case 'P':
      return 1;
    case 'S':
    case 'I':
      return 2;
    default:
      throw ArgumentError(std::string("invalid orientation letter '") + c +
                          "'");
  }
}

int letter_sign(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'R':
    case 'A':
    case 'S':
      return +1;
    default:
      letter_axis(c);  // throws on junk
      return -1;
  }
}

bool valid_orientation_code(const std::string& code) {
  if (code.size() != 3) return false;
  bool seen[3] = {false, false, false};
  for (char c : code) {
    int axis;
    try {
      axis = letter_axis(c);
    } catch (const ArgumentError&) {
      return false;
    }
    if (seen[axis]) return false;
    seen[axis] = true;
  }
  return true;
}

std::string orientation_of(const Affine& affine) {
  Eigen::Matrix3d dir = affine.block<3, 3>(0, 0);
  if (std::abs(dir.determinant()) < 1e-12)
    throw GeometryError("orientation_of: singular affine");

  // Greedy assignment: repeatedly take the largest remaining |entry| so each
  // voxel axis claims a distinct physical axis even under mild obliquity.
  Eigen::Matrix3d mag = dir.cwiseAbs();
  std::string code = "???";
  bool row_used[3] = {false, false, false};
  bool col_used[3] = {false, false, false};
  for (int step = 0; step < 3; ++step) {
    int best_r = -1, best_c = -1;
    double best = -1.0;
    for (int r = 0; r < 3; ++r) {
      if (row_used[r]) continue;
      for (int c = 0; c < 3; ++c) {
        if (col_used[c]) continue;
        if (mag(r, c) > best) {
          best = mag(r, c);
          best_r = r;
          best_c = c;
        }
      }
    }
    row_used[best_r] = true;
    col_used[best_c] = true;
    code[best_c] = dir(best_r, best_c) >= 0 ? kPositiveLetter[best_r]
                                            : kNegativeLetter[best_r];
  }
  return code;
}

template <typename T>
Grid<T> Volume3D::as() const {
  Grid<T> out;
  out.geom = geom;
  std::visit(
      [&](const auto& src) {
        out.data.assign(src.begin(), src.end());
      },
      data);
  return out;
}

template Grid<std::uint8_t> Volume3D::as<std::uint8_t>() const;
template Grid<std::int16_t> Volume3D::as<std::int16_t>() const;
template Grid<std::int32_t> Volume3D::as<std::int32_t>() const;
template Grid<float> Volume3D::as<float>() const;
template Grid<double> Volume3D::as<double>() const;

LabelMap Volume3D::as_labels() const {
  LabelMap out;
  out.geom = geom;
  out.data.resize(geom.voxel_count());
  std::visit(
      [&](const auto& src) {
        for (std::size_t i = 0; i < src.size(); ++i) {
          double v = static_cast<double>(src[i]);
          double r = std::round(v);
          if (std::abs(v - r) > 1e-6 || r < 0 || r > 255)
            throw ContractError("as_labels: non-integer or out-of-range value");
          out.data[i] = static_cast<std::uint8_t>(r);
        }
      },
      data);
  return out;
}

}  // namespace rootlets
