// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "rootlets/volume.hpp"

namespace rootlets {

enum class Interpolation { kLinear, kNearest };

struct ResampleSpec {
  Eigen::Vector3d spacing_mm;  // all components > 0
  Interpolation interpolation = Interpolation::kLinear;
};

enum class ElementShape { kBall, kCube, kCross };

struct StructuringElement {
  ElementShape shape = ElementShape::kBall;
  int radius = 3;  // voxels, >= 1

  // Integer offsets inside the footprint (includes the origin).
  std::vector<std::array<int, 3>> offsets() const;
};

// Axis permutation + flips only; every voxel keeps its physical coordinate.
template <typename T>
Grid<T> reorient(const Grid<T>& vol, const std::string& target_code);

Volume3D reorient(const Volume3D& vol, const std::string& target_code);

// Whole-volume z-score with the population standard deviation (divide by N).
// Throws DegenerateInputError on zero-variance input.
ScalarVolume zscore_normalize(const ScalarVolume& vol);

// Isotropic(-capable) grid resampling: output dims ceil(dims*old/new),
// samples at output voxel centers, edge-clamped. Trilinear for scalars;
// labels must use nearest.
ScalarVolume resample_iso(const ScalarVolume& vol, const ResampleSpec& spec);
LabelMap resample_iso(const LabelMap& vol, const ResampleSpec& spec);

// Binary dilation: a voxel is set iff some input voxel lies inside the
// element footprint centered on it.
LabelMap dilate(const LabelMap& mask, const StructuringElement& elem);

}  // namespace rootlets
