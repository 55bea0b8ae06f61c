// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

namespace rootlets {

std::size_t Centerline::entry_for_slice(int slice, bool* clamped) const {
  if (slice < 0 || static_cast<std::size_t>(slice) >= n_slices)
    throw RangeError("slice " + std::to_string(slice) +
                     " outside volume range");
  if (clamped) *clamped = false;
  if (slice <= first_slice()) {
    if (clamped) *clamped = slice != first_slice();
    return 0;
  }
  if (slice >= last_slice()) {
    if (clamped) *clamped = slice != last_slice();
    return points.size() - 1;
  }
  // interior slices are contiguous after gap filling
  return static_cast<std::size_t>(slice - first_slice());
}

Centerline extract_centerline(const LabelMap& cord, int smooth_window) {
  if (smooth_window < 1 || smooth_window % 2 == 0)
    throw ArgumentError("smoothing window must be a positive odd integer");
  if (!cord.geom.axis_aligned())
    throw GeometryError("extract_centerline: sheared affines not supported");
  const std::string code = orientation_of(cord.geom.affine);
  if (letter_axis(code[2]) != 2)
    throw GeometryError(
        "extract_centerline: third voxel axis must be superior-inferior "
        "(volume orientation " +
        code + ")");

  const auto& d = cord.geom.dims;

  // raw per-slice centroids in voxel coordinates
  std::vector<std::optional<Eigen::Vector3d>> centroid(d[2]);
  for (std::size_t k = 0; k < d[2]; ++k) {
    double sx = 0, sy = 0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < d[1]; ++j)
      for (std::size_t i = 0; i < d[0]; ++i)
        if (cord.at(i, j, k)) {
          sx += static_cast<double>(i);
          sy += static_cast<double>(j);
          ++count;
        }
    if (count > 0)
      centroid[k] = Eigen::Vector3d(sx / count, sy / count,
                                    static_cast<double>(k));
  }

  int first = -1, last = -1;
  for (std::size_t k = 0; k < d[2]; ++k)
    if (centroid[k]) {
      if (first < 0) first = static_cast<int>(k);
      last = static_cast<int>(k);
    }
  if (first < 0) throw DegenerateInputError("extract_centerline: empty mask");
  if (first == last)
    throw GeometryError("extract_centerline: fewer than 2 nonempty slices");

  // fill interior gaps by linear interpolation between covered neighbours
  for (int k = first + 1; k < last; ++k) {
    if (centroid[k]) continue;
    int lo = k - 1;
    int hi = k + 1;
    while (!centroid[hi]) ++hi;
    double t = static_cast<double>(k - lo) / static_cast<double>(hi - lo);
    Eigen::Vector3d v = (1.0 - t) * (*centroid[lo]) + t * (*centroid[hi]);
    v[2] = static_cast<double>(k);
    centroid[k] = v;
  }

  const int count = last - first + 1;
  std::vector<Eigen::Vector3d> raw(count);
  for (int k = 0; k < count; ++k) raw[k] = *centroid[first + k];

  // centered moving average of the in-plane coordinates; the slice coordinate
  // is left untouched
  const int half = smooth_window / 2;
  std::vector<Eigen::Vector3d> smooth(count);
  for (int k = 0; k < count; ++k) {
    int w = std::min({half, k, count - 1 - k});
    double sx = 0, sy = 0;
    for (int u = k - w; u <= k + w; ++u) {
      sx += raw[u][0];
      sy += raw[u][1];
    }
    double width = 2.0 * w + 1.0;
    smooth[k] = {sx / width, sy / width, raw[k][2]};
  }

  Centerline cl;
  cl.smooth_window = smooth_window;
  cl.n_slices = d[2];
  cl.points.reserve(count);
  cl.arc_mm.reserve(count);
  for (int k = 0; k < count; ++k) {
    Centerline::Point p;
    p.slice = first + k;
    p.mm = cord.geom.voxel_to_mm(smooth[k]);
    cl.points.push_back(p);
    if (k == 0)
      cl.arc_mm.push_back(0.0);
    else
      cl.arc_mm.push_back(cl.arc_mm.back() +
                          (cl.points[k].mm - cl.points[k - 1].mm).norm());
  }
  return cl;
}

double arc_length_between(const Centerline& cl, int slice_a, int slice_b,
                          bool* clamped) {
  bool ca = false, cb = false;
  std::size_t ia = cl.entry_for_slice(slice_a, &ca);
  std::size_t ib = cl.entry_for_slice(slice_b, &cb);
  if (clamped) *clamped = ca || cb;
  return std::abs(cl.arc_mm[ib] - cl.arc_mm[ia]);
}

double pmj_distance(const Centerline& cl, const PmjPoint& pmj, int slice,
                    bool* clamped) {
  if (!pmj.mm.allFinite())
    throw ArgumentError("pmj_distance: PMJ coordinate must be finite");
  std::size_t target = cl.entry_for_slice(slice, clamped);

  std::size_t nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cl.points.size(); ++i) {
    double dist = (cl.points[i].mm - pmj.mm).norm();
    if (dist < best) {
      best = dist;
      nearest = i;
    }
  }
  return std::abs(cl.arc_mm[target] - cl.arc_mm[nearest]) + best;
}

std::string centerline_csv(const Centerline& cl) {
  std::string out = "slice_index,x_mm,y_mm,z_mm,cumulative_mm\n";
  char line[160];
  for (std::size_t i = 0; i < cl.points.size(); ++i) {
    const auto& p = cl.points[i];
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f,%.6f,%.6f\n", p.slice,
                  p.mm[0], p.mm[1], p.mm[2], cl.arc_mm[i]);
    out += line;
  }
  return out;
}

}  // namespace rootlets
