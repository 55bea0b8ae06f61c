// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/levels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rootlets/kernels.hpp"

namespace rootlets {

namespace {

// +1 when increasing slice index moves superior (rostral), -1 otherwise.
int superior_step(const Affine& affine) {
  return letter_sign(orientation_of(affine)[2]) > 0 ? +1 : -1;
}

}  // namespace

std::map<int, LabelMap> intersect_rootlets_cord(const LabelMap& rootlets,
                                                const LabelMap& cord,
                                                const StructuringElement& elem) {
  if (!rootlets.geom.same_grid(cord.geom))
    throw ContractError("intersect_rootlets_cord: grids do not match");

  const LabelMap dilated = dilate(cord, elem);
  const std::size_t n = rootlets.geom.voxel_count();

  std::map<int, LabelMap> out;
  for (int cls = 2; cls <= 8; ++cls) {
    LabelMap indicator(rootlets.geom);
    kernels::ops().mask_eq_u8(rootlets.data.data(), indicator.data.data(), n,
                              static_cast<std::uint8_t>(cls));
    LabelMap inter(rootlets.geom);
    kernels::ops().and_u8(indicator.data.data(), dilated.data.data(),
                          inter.data.data(), n);
    out.emplace(cls, std::move(inter));
  }
  return out;
}

std::vector<LevelExtent> level_extents(
    const std::map<int, LabelMap>& intersections, const Centerline& cl,
    const PmjPoint& pmj) {
  if (cl.points.empty())
    throw ContractError("level_extents: empty centerline");

  std::vector<LevelExtent> out;
  for (const auto& [cls, mask] : intersections) {
    LevelExtent e;
    e.level = cls;

    const auto& d = mask.geom.dims;
    int lo = -1, hi = -1;
    for (std::size_t k = 0; k < d[2]; ++k) {
      bool any = false;
      for (std::size_t j = 0; j < d[1] && !any; ++j)
        for (std::size_t i = 0; i < d[0] && !any; ++i)
          if (mask.at(i, j, k)) any = true;
      if (any) {
        if (lo < 0) lo = static_cast<int>(k);
        hi = static_cast<int>(k);
      }
    }
    if (lo < 0) {
      out.push_back(e);  // stays flagged empty
      continue;
    }

    const int step = superior_step(mask.geom.affine);
    e.empty = false;
    e.rostral_slice = step > 0 ? hi : lo;
    e.caudal_slice = step > 0 ? lo : hi;
    // round toward the rostral slice on even spans
    int sum = e.rostral_slice + e.caudal_slice;
    e.mid_slice = (sum + (sum % 2 != 0 ? step : 0)) / 2;

    bool clamped = false;
    bool c = false;
    e.pmj_rostral_mm = pmj_distance(cl, pmj, e.rostral_slice, &c);
    clamped |= c;
    e.pmj_mid_mm = pmj_distance(cl, pmj, e.mid_slice, &c);
    clamped |= c;
    e.pmj_caudal_mm = pmj_distance(cl, pmj, e.caudal_slice, &c);
    clamped |= c;
    e.length_mm = e.pmj_caudal_mm - e.pmj_rostral_mm;
    e.clipped_at_volume_edge =
        clamped || lo == 0 || hi == static_cast<int>(d[2]) - 1;
    out.push_back(e);
  }
  return out;
}

SpinalLevelMap project_levels(const std::vector<LevelExtent>& extents,
                              const LabelMap& cord) {
  SpinalLevelMap out;
  out.flattened = LabelMap(cord.geom);
  const auto& d = cord.geom.dims;

  // ascending level order so the lower class claims overlaps in the export
  std::vector<LevelExtent> sorted = extents;
  std::sort(sorted.begin(), sorted.end(),
            [](const LevelExtent& a, const LevelExtent& b) {
              return a.level < b.level;
            });

  for (const auto& e : sorted) {
    LabelMap channel(cord.geom);
    if (!e.empty) {
      const int k_lo = std::min(e.rostral_slice, e.caudal_slice);
      const int k_hi = std::max(e.rostral_slice, e.caudal_slice);
      for (int k = k_lo; k <= k_hi; ++k) {
        for (std::size_t j = 0; j < d[1]; ++j) {
          for (std::size_t i = 0; i < d[0]; ++i) {
            if (!cord.at(i, j, static_cast<std::size_t>(k))) continue;
            channel.at(i, j, static_cast<std::size_t>(k)) = 1;
            auto& flat = out.flattened.at(i, j, static_cast<std::size_t>(k));
            if (flat == 0) flat = static_cast<std::uint8_t>(e.level);
          }
        }
      }
    }
    out.channels.emplace(e.level, std::move(channel));
  }
  return out;
}

std::map<int, double> level_lengths(const std::vector<LevelExtent>& extents) {
  std::map<int, double> out;
  for (const auto& e : extents)
    if (!e.empty) out[e.level] = e.pmj_caudal_mm - e.pmj_rostral_mm;
  return out;
}

std::string level_extents_csv(const std::vector<LevelExtent>& extents) {
  std::string out =
      "level,rostral_slice,caudal_slice,mid_slice,pmj_rostral_mm,pmj_mid_mm,"
      "pmj_caudal_mm,length_mm,flags\n";
  char line[256];
  for (const auto& e : extents) {
    std::string flags;
    if (e.empty) flags += "empty";
    if (e.clipped_at_volume_edge)
      flags += flags.empty() ? "clipped_at_volume_edge"
                             : ";clipped_at_volume_edge";
    if (e.empty) {
      std::snprintf(line, sizeof(line), "%d,,,,,,,,%s\n", e.level,
                    flags.c_str());
    } else {
      std::snprintf(line, sizeof(line),
                    "%d,%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%s\n", e.level,
                    e.rostral_slice, e.caudal_slice, e.mid_slice,
                    e.pmj_rostral_mm, e.pmj_mid_mm, e.pmj_caudal_mm,
                    e.length_mm, flags.c_str());
    }
    out += line;
  }
  return out;
}

}  // namespace rootlets
