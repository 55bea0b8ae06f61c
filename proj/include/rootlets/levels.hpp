// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <vector>

#include "rootlets/geometry.hpp"
#include "rootlets/preprocess.hpp"
#include "rootlets/volume.hpp"

namespace rootlets {

// Per spinal level: slice extent of the rootlet/dilated-cord intersection and
// PMJ arc-length distances to the rostral, middle, and caudal slices.
// "Rostral" always means the physically superior slice; which index is larger
// follows from the volume's slice-axis direction.
struct LevelExtent {
  int level = 0;           // 2..8 (C2..C8)
  int rostral_slice = -1;
  int caudal_slice = -1;
  int mid_slice = -1;      // mean of the two, rounded toward rostral
  double pmj_rostral_mm = 0.0;
  double pmj_mid_mm = 0.0;
  double pmj_caudal_mm = 0.0;
  double length_mm = 0.0;  // pmj_caudal_mm - pmj_rostral_mm
  bool empty = true;
  bool clipped_at_volume_edge = false;
};

struct SpinalLevelMap {
  std::map<int, LabelMap> channels;  // one binary volume per level
  LabelMap flattened;                // overlaps resolved to the lower class
};

// Per class c in 2..8: rootlet indicator AND dilated cord. Classes with an
// empty intersection are present in the map but all-zero.
std::map<int, LabelMap> intersect_rootlets_cord(
    const LabelMap& rootlets, const LabelMap& cord,
    const StructuringElement& elem = {});

std::vector<LevelExtent> level_extents(
    const std::map<int, LabelMap>& intersections, const Centerline& cl,
    const PmjPoint& pmj);

SpinalLevelMap project_levels(const std::vector<LevelExtent>& extents,
                              const LabelMap& cord);

// Arc-length level lengths; empty extents are excluded, not zero.
std::map<int, double> level_lengths(const std::vector<LevelExtent>& extents);

// CSV report, one row per level (header included).
std::string level_extents_csv(const std::vector<LevelExtent>& extents);

}  // namespace rootlets
