// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "rootlets/volume.hpp"

namespace rootlets {

// Smoothed per-slice cord centerline with a cumulative arc-length table.
// Slice axis is the third voxel axis (superior-inferior by precondition).
struct Centerline {
  struct Point {
    int slice;            // axial slice index
    Eigen::Vector3d mm;   // physical position of the (smoothed) centroid
  };
  std::vector<Point> points;      // slice indices strictly increasing
  std::vector<double> arc_mm;     // cumulative, arc_mm[0] == 0
  int smooth_window = 1;
  std::size_t n_slices = 0;       // slice count of the source volume

  int first_slice() const { return points.front().slice; }
  int last_slice() const { return points.back().slice; }

  // Index of the centerline entry for a slice; empty/uncovered slices map to
  // the nearest covered one, reported through `clamped`.
  std::size_t entry_for_slice(int slice, bool* clamped = nullptr) const;
};

// Per-slice center of mass in physical coordinates, interior gaps filled by
// linear interpolation, in-plane coordinates smoothed with a centered moving
// average (shrunken windows at the edges). Window must be odd.
Centerline extract_centerline(const LabelMap& cord, int smooth_window = 15);

// Arc length along the centerline between two slices (mm). `clamped`, when
// given, reports that an endpoint fell on an uncovered slice.
double arc_length_between(const Centerline& cl, int slice_a, int slice_b,
                          bool* clamped = nullptr);

// Distance from the PMJ to a slice: arc length from the PMJ's nearest
// centerline point plus the Euclidean gap to that point, so a PMJ sitting
// rostral of the cord mask extends the distance instead of being dropped.
double pmj_distance(const Centerline& cl, const PmjPoint& pmj, int slice,
                    bool* clamped = nullptr);

// CSV dump: slice_index,x_mm,y_mm,z_mm,cumulative_mm with a header row.
std::string centerline_csv(const Centerline& cl);

}  // namespace rootlets
