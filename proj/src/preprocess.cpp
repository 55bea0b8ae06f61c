// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "rootlets/kernels.hpp"

namespace rootlets {

namespace {

struct AxisMap {
  int src[3];     // source axis feeding each target axis
  bool flip[3];   // whether that source axis is reversed
};

AxisMap resolve_axis_map(const std::string& current,
                         const std::string& target) {
  AxisMap m{};
  for (int t = 0; t < 3; ++t) {
    int want_axis = letter_axis(target[t]);
    int want_sign = letter_sign(target[t]);
    int found = -1;
    for (int k = 0; k < 3; ++k) {
      if (letter_axis(current[k]) == want_axis) {
        found = k;
        break;
      }
    }
    m.src[t] = found;
    m.flip[t] = letter_sign(current[found]) != want_sign;
  }
  return m;
}

Geometry reoriented_geometry(const Geometry& g, const AxisMap& m) {
  Geometry out;
  // old_index = P * new_index (affine 4x4, last row 0 0 0 1)
  Affine p = Affine::Zero();
  p(3, 3) = 1.0;
  for (int t = 0; t < 3; ++t) {
    int k = m.src[t];
    out.dims[t] = g.dims[k];
    p(k, t) = m.flip[t] ? -1.0 : 1.0;
    if (m.flip[t]) p(k, 3) += static_cast<double>(g.dims[k] - 1);
  }
  out.affine = g.affine * p;
  return out;
}

}  // namespace

template <typename T>
Grid<T> reorient(const Grid<T>& vol, const std::string& target_code) {
  if (!valid_orientation_code(target_code))
    throw ArgumentError("invalid orientation code \"" + target_code + "\"");
  const std::string current = orientation_of(vol.geom.affine);
  if (current == target_code) return vol;

  const AxisMap m = resolve_axis_map(current, target_code);
  Grid<T> out(reoriented_geometry(vol.geom, m));

  const auto& d = vol.geom.dims;
  std::size_t old_idx[3];
  for (std::size_t k2 = 0; k2 < out.geom.dims[2]; ++k2) {
    for (std::size_t k1 = 0; k1 < out.geom.dims[1]; ++k1) {
      for (std::size_t k0 = 0; k0 < out.geom.dims[0]; ++k0) {
        const std::size_t new_idx[3] = {k0, k1, k2};
        for (int t = 0; t < 3; ++t) {
          int k = m.src[t];
          old_idx[k] = m.flip[t] ? d[k] - 1 - new_idx[t] : new_idx[t];
        }
        out.at(k0, k1, k2) = vol.at(old_idx[0], old_idx[1], old_idx[2]);
      }
    }
  }
  return out;
}

template Grid<std::uint8_t> reorient(const Grid<std::uint8_t>&,
                                     const std::string&);
template Grid<std::int16_t> reorient(const Grid<std::int16_t>&,
                                     const std::string&);
template Grid<std::int32_t> reorient(const Grid<std::int32_t>&,
                                     const std::string&);
template Grid<float> reorient(const Grid<float>&, const std::string&);
template Grid<double> reorient(const Grid<double>&, const std::string&);

Volume3D reorient(const Volume3D& vol, const std::string& target_code) {
  Volume3D out;
  std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        Grid<T> g{vol.geom, v};
        Grid<T> r = reorient(g, target_code);
        out.geom = r.geom;
        out.data = std::move(r.data);
      },
      vol.data);
  return out;
}

ScalarVolume zscore_normalize(const ScalarVolume& vol) {
  const std::size_t n = vol.geom.voxel_count();
  if (n < 2) throw DegenerateInputError("zscore_normalize: fewer than 2 voxels");

  double sum = 0.0, sumsq = 0.0;
  kernels::ops().moments_f32(vol.data.data(), n, &sum, &sumsq);
  const double mean = sum / static_cast<double>(n);
  const double var = sumsq / static_cast<double>(n) - mean * mean;
  const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
  if (sd < 1e-12 * std::max(1.0, std::abs(mean)))
    throw DegenerateInputError("zscore_normalize: zero-variance input");

  ScalarVolume out = vol;
  kernels::ops().scale_shift_f32(out.data.data(), n,
                                 static_cast<float>(-mean),
                                 static_cast<float>(1.0 / sd));
  return out;
}

namespace {

Geometry resampled_geometry(const Geometry& g, const Eigen::Vector3d& new_sp) {
  if (!(new_sp.array() > 0.0).all())
    throw ArgumentError("resample_iso: target spacing must be positive");
  if (!g.axis_aligned())
    throw GeometryError("resample_iso: sheared affines are not supported");

  const Eigen::Vector3d old_sp = g.spacing();
  Geometry out;
  out.affine = g.affine;
  for (int k = 0; k < 3; ++k) {
    double exact = static_cast<double>(g.dims[k]) * old_sp[k] / new_sp[k];
    out.dims[k] =
        static_cast<std::size_t>(std::max(1.0, std::ceil(exact - 1e-6)));
    out.affine.block<3, 1>(0, k) =
        g.affine.block<3, 1>(0, k) / old_sp[k] * new_sp[k];
  }
  return out;
}

template <typename T, typename Sampler>
Grid<T> resample_grid(const Grid<T>& vol, const Geometry& target,
                      Sampler sample) {
  Grid<T> out(target);
  const Geometry& src_geom = vol.geom;
  const Eigen::Matrix3d inv =
      src_geom.affine.block<3, 3>(0, 0).inverse().eval();
  const Eigen::Vector3d off = src_geom.affine.block<3, 1>(0, 3);
  for (std::size_t k = 0; k < target.dims[2]; ++k) {
    for (std::size_t j = 0; j < target.dims[1]; ++j) {
      for (std::size_t i = 0; i < target.dims[0]; ++i) {
        Eigen::Vector3d mm = target.voxel_to_mm(
            {static_cast<double>(i), static_cast<double>(j),
             static_cast<double>(k)});
        Eigen::Vector3d src = inv * (mm - off);
        for (int a = 0; a < 3; ++a)
          src[a] = std::clamp(src[a], 0.0,
                              static_cast<double>(vol.geom.dims[a] - 1));
        out.at(i, j, k) = sample(src);
      }
    }
  }
  return out;
}

}  // namespace

ScalarVolume resample_iso(const ScalarVolume& vol, const ResampleSpec& spec) {
  Geometry target = resampled_geometry(vol.geom, spec.spacing_mm);
  if (spec.interpolation == Interpolation::kNearest) {
    return resample_grid<float>(vol, target, [&](const Eigen::Vector3d& s) {
      return vol.at(static_cast<std::size_t>(std::lround(s[0])),
                    static_cast<std::size_t>(std::lround(s[1])),
                    static_cast<std::size_t>(std::lround(s[2])));
    });
  }
  return resample_grid<float>(vol, target, [&](const Eigen::Vector3d& s) {
    const auto& d = vol.geom.dims;
    std::size_t i0[3];
    double f[3];
    for (int a = 0; a < 3; ++a) {
      double fl = std::floor(s[a]);
      i0[a] = static_cast<std::size_t>(fl);
      if (i0[a] + 1 >= d[a]) i0[a] = d[a] >= 2 ? d[a] - 2 : 0;
      f[a] = s[a] - static_cast<double>(i0[a]);
      f[a] = std::clamp(f[a], 0.0, 1.0);
    }
    auto v = [&](int di, int dj, int dk) -> double {
      std::size_t ii = std::min(i0[0] + di, d[0] - 1);
      std::size_t jj = std::min(i0[1] + dj, d[1] - 1);
      std::size_t kk = std::min(i0[2] + dk, d[2] - 1);
      return vol.at(ii, jj, kk);
    };
    double c00 = v(0, 0, 0) * (1 - f[0]) + v(1, 0, 0) * f[0];
    double c10 = v(0, 1, 0) * (1 - f[0]) + v(1, 1, 0) * f[0];
    double c01 = v(0, 0, 1) * (1 - f[0]) + v(1, 0, 1) * f[0];
    double c11 = v(0, 1, 1) * (1 - f[0]) + v(1, 1, 1) * f[0];
    double c0 = c00 * (1 - f[1]) + c10 * f[1];
    double c1 = c01 * (1 - f[1]) + c11 * f[1];
    return static_cast<float>(c0 * (1 - f[2]) + c1 * f[2]);
  });
}

LabelMap resample_iso(const LabelMap& vol, const ResampleSpec& spec) {
  if (spec.interpolation != Interpolation::kNearest)
    throw ContractError("resample_iso: label maps require nearest neighbour");
  Geometry target = resampled_geometry(vol.geom, spec.spacing_mm);
  return resample_grid<std::uint8_t>(vol, target,
                                     [&](const Eigen::Vector3d& s) {
    return vol.at(static_cast<std::size_t>(std::lround(s[0])),
                  static_cast<std::size_t>(std::lround(s[1])),
                  static_cast<std::size_t>(std::lround(s[2])));
  });
}

std::vector<std::array<int, 3>> StructuringElement::offsets() const {
  if (radius < 1) throw ArgumentError("structuring element radius must be >= 1");
  std::vector<std::array<int, 3>> out;
  const int r = radius;
  for (int z = -r; z <= r; ++z) {
    for (int y = -r; y <= r; ++y) {
      for (int x = -r; x <= r; ++x) {
        bool inside = false;
        switch (shape) {
          case ElementShape::kBall:
            inside = x * x + y * y + z * z <= r * r;
            break;
          case ElementShape::kCube:
            inside = true;  // loop bounds are the Chebyshev ball
            break;
          case ElementShape::kCross:
            inside = std::abs(x) + std::abs(y) + std::abs(z) <= r;
            break;
        }
        if (inside) out.push_back({x, y, z});
      }
    }
  }
  return out;
}

LabelMap dilate(const LabelMap& mask, const StructuringElement& elem) {
  for (std::uint8_t v : mask.data)
    if (v > 1) throw ContractError("dilate: mask must be binary");

  const auto offsets = elem.offsets();
  const auto& d = mask.geom.dims;
  LabelMap out(mask.geom);
  const int nx = static_cast<int>(d[0]);
  const int ny = static_cast<int>(d[1]);
  const int nz = static_cast<int>(d[2]);
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (!mask.at(i, j, k)) continue;
        for (const auto& o : offsets) {
          int x = i + o[0], y = j + o[1], z = k + o[2];
          if (x < 0 || y < 0 || z < 0 || x >= nx || y >= ny || z >= nz)
            continue;
          out.at(x, y, z) = 1;
        }
      }
    }
  }
  return out;
}

}  // namespace rootlets
