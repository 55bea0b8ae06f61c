// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "rootlets/metrics.hpp"

namespace rootlets {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Continuous cord center curve, parameterized by physical z (mm).
struct CenterCurve {
  const PhantomSpec& spec;
  double cx0, cy0, z_max;

  explicit CenterCurve(const PhantomSpec& s)
      : spec(s),
        cx0(0.5 * static_cast<double>(s.dims[0] - 1) * s.spacing_mm),
        cy0(0.5 * static_cast<double>(s.dims[1] - 1) * s.spacing_mm),
        z_max(static_cast<double>(s.dims[2] - 1) * s.spacing_mm) {}

  Eigen::Vector2d at(double z) const {
    switch (spec.curve) {
      case CurveMode::kStraight:
        return {cx0, cy0};
      case CurveMode::kBowed:
        return {cx0 + spec.bow_amplitude_mm * std::sin(kPi * z / z_max), cy0};
      case CurveMode::kHelical: {
        double phase = 2.0 * kPi * z / spec.helix_pitch_mm;
        return {cx0 + spec.helix_radius_mm * std::cos(phase),
                cy0 + spec.helix_radius_mm * std::sin(phase)};
      }
    }
    return {cx0, cy0};
  }

  // Arc length between two physical z values by fine trapezoidal sums.
  double arc_length(double z_a, double z_b) const {
    if (z_a > z_b) std::swap(z_a, z_b);
    if (spec.curve == CurveMode::kStraight) return z_b - z_a;
    const int steps = 4096;
    double total = 0.0;
    Eigen::Vector2d prev = at(z_a);
    for (int s = 1; s <= steps; ++s) {
      double z = z_a + (z_b - z_a) * static_cast<double>(s) / steps;
      Eigen::Vector2d cur = at(z);
      double dz = (z_b - z_a) / steps;
      total += std::sqrt((cur - prev).squaredNorm() + dz * dz);
      prev = cur;
    }
    return total;
  }
};

void validate_spec(const PhantomSpec& spec) {
  if (spec.dims[0] == 0 || spec.dims[1] == 0 || spec.dims[2] == 0)
    throw ArgumentError("phantom: empty dims");
  if (spec.spacing_mm <= 0.0)
    throw ArgumentError("phantom: spacing must be positive");
  if (spec.cord_radius_mm <= 0.0)
    throw ArgumentError("phantom: cord radius must be positive");

  std::vector<RootletSpec> sorted = spec.rootlets;
  std::sort(sorted.begin(), sorted.end(),
            [](const RootletSpec& a, const RootletSpec& b) {
              return a.caudal_slice < b.caudal_slice;
            });
  const int nz = static_cast<int>(spec.dims[2]);
  for (const auto& r : sorted) {
    if (r.level < 2 || r.level > 8)
      throw ArgumentError("phantom: rootlet level must be in 2..8");
    if (r.caudal_slice > r.rostral_slice)
      throw ArgumentError("phantom: caudal slice above rostral slice");
    if (r.caudal_slice < 0 || r.rostral_slice >= nz)
      throw ArgumentError("phantom: rootlet span outside volume");
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    // one empty slice between spans keeps the constructed classes separated
    if (!spec.allow_overlap &&
        sorted[i].caudal_slice <= sorted[i - 1].rostral_slice + 1)
      throw ArgumentError("phantom: overlapping or touching rootlet spans");
    // C2 most superior: level numbers descend as the slice index grows
    if (sorted[i].level >= sorted[i - 1].level)
      throw ArgumentError("phantom: levels must ascend caudally");
  }
}

}  // namespace

PhantomBundle generate_phantom(const PhantomSpec& spec) {
  validate_spec(spec);

  Geometry geom;
  geom.dims = spec.dims;
  geom.affine = Affine::Identity() * spec.spacing_mm;
  geom.affine(3, 3) = 1.0;

  const double sp = spec.spacing_mm;
  const auto& d = spec.dims;
  const CenterCurve curve(spec);
  const double beam_len = 5.0 * sp;  // reaches past the 3-voxel dilation band

  PhantomBundle out;
  out.cord = LabelMap(geom);
  out.rootlets = LabelMap(geom);
  out.image = ScalarVolume(geom);

  for (std::size_t k = 0; k < d[2]; ++k) {
    const double z = static_cast<double>(k) * sp;
    const Eigen::Vector2d c = curve.at(z);
    const double wall_y = c[1] - spec.cord_radius_mm;
    for (std::size_t j = 0; j < d[1]; ++j) {
      const double y = static_cast<double>(j) * sp;
      for (std::size_t i = 0; i < d[0]; ++i) {
        const double x = static_cast<double>(i) * sp;
        const double r2 =
            (x - c[0]) * (x - c[0]) + (y - c[1]) * (y - c[1]);
        const bool in_cord = r2 <= spec.cord_radius_mm * spec.cord_radius_mm;
        if (in_cord) out.cord.at(i, j, k) = 1;

        float intensity = 100.0f;  // tissue background
        const double canal_r = spec.cord_radius_mm + 3.0;
        if (r2 <= canal_r * canal_r) intensity = 300.0f;  // bright CSF
        if (in_cord) intensity = 50.0f;

        if (!in_cord) {
          const double depth = wall_y - y;  // posterior distance past the wall
          for (const auto& rl : spec.rootlets) {
            if (depth < 0.0 || depth > beam_len) break;  // same for every beam
            if (std::abs(x - c[0]) > rl.radius_mm) continue;
            // oblique beams drift caudally (toward lower slices) with depth
            const double shear =
                depth * std::tan(rl.angle_deg * kPi / 180.0) / sp;
            const double attach = static_cast<double>(k) + shear;
            if (attach >= static_cast<double>(rl.caudal_slice) - 0.49 &&
                attach <= static_cast<double>(rl.rostral_slice) + 0.49) {
              out.rootlets.at(i, j, k) = static_cast<std::uint8_t>(rl.level);
              intensity = 40.0f;
              break;
            }
          }
        }
        out.image.at(i, j, k) = intensity;
      }
    }
  }

  // deterministic noise: mt19937_64 + std::normal_distribution, row-major
  if (spec.noise_sd > 0.0) {
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<float> noise(0.0f,
                                          static_cast<float>(spec.noise_sd));
    for (float& v : out.image.data) v += noise(rng);
  }

  const int pmj_slice =
      spec.pmj_slice >= 0 ? spec.pmj_slice : static_cast<int>(d[2]) - 2;
  if (pmj_slice < 0 || pmj_slice >= static_cast<int>(d[2]))
    throw ArgumentError("phantom: PMJ slice outside volume");
  const double pmj_z = static_cast<double>(pmj_slice) * sp;
  const Eigen::Vector2d pmj_c = curve.at(pmj_z);
  out.pmj.mm = {pmj_c[0], pmj_c[1], pmj_z};

  for (const auto& rl : spec.rootlets) {
    LevelExtent e;
    e.level = rl.level;
    e.empty = false;
    e.rostral_slice = rl.rostral_slice;
    e.caudal_slice = rl.caudal_slice;
    int sum = rl.rostral_slice + rl.caudal_slice;
    e.mid_slice = (sum + (sum % 2 != 0 ? 1 : 0)) / 2;
    e.pmj_rostral_mm = curve.arc_length(
        static_cast<double>(rl.rostral_slice) * sp, pmj_z);
    e.pmj_mid_mm =
        curve.arc_length(static_cast<double>(e.mid_slice) * sp, pmj_z);
    e.pmj_caudal_mm =
        curve.arc_length(static_cast<double>(rl.caudal_slice) * sp, pmj_z);
    e.length_mm = e.pmj_caudal_mm - e.pmj_rostral_mm;
    out.truth.push_back(e);
  }
  return out;
}

PhantomSpec default_phantom_spec() {
  PhantomSpec spec;
  spec.dims = {64, 64, 128};
  spec.spacing_mm = 0.8;
  spec.cord_radius_mm = 4.0;
  spec.pmj_slice = 124;
  int rostral = 114;
  for (int level = 2; level <= 8; ++level) {
    RootletSpec r;
    r.level = level;
    r.rostral_slice = rostral;
    r.caudal_slice = rostral - 9;  // ten-slice spans
    r.radius_mm = 1.2;
    spec.rootlets.push_back(r);
    rostral = r.caudal_slice - 5;
  }
  return spec;
}

std::vector<ResampleStudyEntry> perturb_resample_study(
    const PhantomBundle& phantom, const std::vector<double>& spacings_mm,
    const StructuringElement& elem, int smooth_window) {
  auto run = [&](const LabelMap& rootlets,
                 const LabelMap& cord) -> std::map<int, double> {
    Centerline cl = extract_centerline(cord, smooth_window);
    auto inter = intersect_rootlets_cord(rootlets, cord, elem);
    std::map<int, double> mids;
    for (const auto& e : level_extents(inter, cl, phantom.pmj))
      if (!e.empty) mids[e.level] = e.pmj_mid_mm;
    return mids;
  };

  const std::map<int, double> native = run(phantom.rootlets, phantom.cord);

  std::vector<ResampleStudyEntry> out;
  for (double s : spacings_mm) {
    ResampleSpec rs{{s, s, s}, Interpolation::kNearest};
    LabelMap cord_r = resample_iso(phantom.cord, rs);
    LabelMap rootlets_r = resample_iso(phantom.rootlets, rs);
    // the image channel is resampled linearly for parity with real runs,
    // though only the masks feed the level pipeline
    ResampleSpec img_rs{{s, s, s}, Interpolation::kLinear};
    (void)resample_iso(phantom.image, img_rs);

    ResampleStudyEntry entry;
    entry.spacing_mm = s;
    entry.pmj_mid_mm = run(rootlets_r, cord_r);
    MaeResult mae = mae_levels(native, entry.pmj_mid_mm);
    entry.mae_mm = mae.mae_mm;
    entry.dropped_levels = mae.skipped_levels;
    out.push_back(entry);
  }
  return out;
}

}  // namespace rootlets
