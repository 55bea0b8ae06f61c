// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rootlets/levels.hpp"
#include "rootlets/volume.hpp"

namespace rootlets {

enum class CurveMode { kStraight, kBowed, kHelical };

struct RootletSpec {
  int level = 0;           // 2..8
  int caudal_slice = 0;    // inferior end of the attachment span
  int rostral_slice = 0;   // superior end, >= caudal_slice
  double angle_deg = 0.0;  // obliquity from the axial plane, caudally directed
  double radius_mm = 1.0;  // in-plane half-width of the rootlet beam
};

struct PhantomSpec {
  std::array<std::size_t, 3> dims{64, 64, 128};
  double spacing_mm = 0.8;           // isotropic
  double cord_radius_mm = 4.0;
  CurveMode curve = CurveMode::kStraight;
  double bow_amplitude_mm = 0.0;     // kBowed
  double helix_radius_mm = 10.0;     // kHelical
  double helix_pitch_mm = 40.0;      // kHelical
  std::vector<RootletSpec> rootlets;
  int pmj_slice = -1;                // default: near the superior end
  double noise_sd = 0.0;
  std::uint64_t seed = 0;
  bool allow_overlap = false;
};

struct PhantomBundle {
  ScalarVolume image;
  LabelMap cord;
  LabelMap rootlets;
  PmjPoint pmj;
  std::vector<LevelExtent> truth;  // analytic extents per rootlet level
};

// Synthetic cervical volume in a +S-ascending grid (slice index grows toward
// superior): dark cord tube inside a bright canal, rootlet beams attached to
// the posterior cord wall, deterministic noise per seed.
PhantomBundle generate_phantom(const PhantomSpec& spec);

// A spec with seven plausible levels filling the volume, C2 most superior.
PhantomSpec default_phantom_spec();

struct ResampleStudyEntry {
  double spacing_mm = 0.0;
  std::map<int, double> pmj_mid_mm;  // recovered per level
  double mae_mm = 0.0;               // vs the native-resolution run
  std::vector<int> dropped_levels;
};

// The resolution-study protocol at desk scale: masks resampled nearest and
// the full level pipeline re-run per target spacing, MAE against native.
std::vector<ResampleStudyEntry> perturb_resample_study(
    const PhantomBundle& phantom, const std::vector<double>& spacings_mm,
    const StructuringElement& elem = {}, int smooth_window = 15);

}  // namespace rootlets
