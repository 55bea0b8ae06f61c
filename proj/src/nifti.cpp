// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/nifti.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

namespace rootlets {

namespace {

// NIfTI-1 datatype codes
constexpr std::int16_t DT_UINT8 = 2;
constexpr std::int16_t DT_INT16 = 4;
constexpr std::int16_t DT_INT32 = 8;
constexpr std::int16_t DT_FLOAT32 = 16;
constexpr std::int16_t DT_FLOAT64 = 64;

struct NiftiHeader {
  std::int32_t sizeof_hdr;
  char data_type[10];
  char db_name[18];
  std::int32_t extents;
  std::int16_t session_error;
  char regular;
  char dim_info;
  std::int16_t dim[8];
  float intent_p1;
  float intent_p2;
  float intent_p3;
  std::int16_t intent_code;
  std::int16_t datatype;
  std::int16_t bitpix;
  std::int16_t slice_start;
  float pixdim[8];
  float vox_offset;
  float scl_slope;
  float scl_inter;
  std::int16_t slice_end;
  char slice_code;
  char xyzt_units;
  float cal_max;
  float cal_min;
  float slice_duration;
  float toffset;
  std::int32_t glmax;
  std::int32_t glmin;
  char descrip[80];
  char aux_file[24];
  std::int16_t qform_code;
  std::int16_t sform_code;
  float quatern_b;
  float quatern_c;
  float quatern_d;
  float qoffset_x;
  float qoffset_y;
  float qoffset_z;
  float srow_x[4];
  float srow_y[4];
  float srow_z[4];
  char intent_name[16];
  char magic[4];
};

static_assert(sizeof(NiftiHeader) == 348, "NIfTI-1 header must pack to 348");

struct GzReader {
  gzFile f;
  explicit GzReader(const std::filesystem::path& p)
      : f(gzopen(p.string().c_str(), "rb")) {
    if (!f) throw IoError("cannot open " + p.string());
  }
  ~GzReader() {
    if (f) gzclose(f);
  }
  GzReader(const GzReader&) = delete;
  GzReader& operator=(const GzReader&) = delete;

  void read_exact(void* dst, std::size_t n, const char* what) {
    int got = gzread(f, dst, static_cast<unsigned>(n));
    if (got < 0 || static_cast<std::size_t>(got) != n)
      throw IoError(std::string("truncated NIfTI file while reading ") + what);
  }
  void skip(std::size_t n) {
    std::vector<char> junk(4096);
    while (n > 0) {
      std::size_t chunk = n < junk.size() ? n : junk.size();
      read_exact(junk.data(), chunk, "extension bytes");
      n -= chunk;
    }
  }
};

Affine affine_from_qform(const NiftiHeader& h) {
  double b = h.quatern_b, c = h.quatern_c, d = h.quatern_d;
  double a2 = 1.0 - (b * b + c * c + d * d);
  double a = a2 > 0.0 ? std::sqrt(a2) : 0.0;
  double qfac = h.pixdim[0] < 0.0f ? -1.0 : 1.0;

  Eigen::Matrix3d r;
  r << a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c),
      2 * (b * c + a * d), a * a + c * c - b * b - d * d, 2 * (c * d - a * b),
      2 * (b * d - a * c), 2 * (c * d + a * b), a * a + d * d - b * b - c * c;

  Affine out = Affine::Identity();
  for (int col = 0; col < 3; ++col) {
    double scale = static_cast<double>(h.pixdim[col + 1]);
    if (col == 2) scale *= qfac;
    out.block<3, 1>(0, col) = r.col(col) * scale;
  }
  out(0, 3) = h.qoffset_x;
  out(1, 3) = h.qoffset_y;
  out(2, 3) = h.qoffset_z;
  return out;
}

template <typename T>
std::vector<T> read_payload(GzReader& in, std::size_t n) {
  std::vector<T> v(n);
  in.read_exact(v.data(), n * sizeof(T), "voxel data");
  return v;
}

template <typename Src>
void apply_scaling(Volume3D& vol, const std::vector<Src>& raw, float slope,
                   float inter) {
  if constexpr (std::is_same_v<Src, double>) {
    std::vector<double> scaled(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      scaled[i] = raw[i] * slope + inter;
    vol.data = std::move(scaled);
  } else {
    std::vector<float> scaled(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      scaled[i] = static_cast<float>(raw[i]) * slope + inter;
    vol.data = std::move(scaled);
  }
}

template <typename T>
std::int16_t datatype_code() {
  if constexpr (std::is_same_v<T, std::uint8_t>) return DT_UINT8;
  if constexpr (std::is_same_v<T, std::int16_t>) return DT_INT16;
  if constexpr (std::is_same_v<T, std::int32_t>) return DT_INT32;
  if constexpr (std::is_same_v<T, float>) return DT_FLOAT32;
  if constexpr (std::is_same_v<T, double>) return DT_FLOAT64;
}

bool gzip_path(const std::filesystem::path& p) {
  const std::string s = p.string();
  return s.size() > 3 && s.compare(s.size() - 3, 3, ".gz") == 0;
}

}  // namespace

Volume3D read_nifti(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw IoError("no such file: " + path.string());
  GzReader in(path);

  NiftiHeader h{};
  in.read_exact(&h, sizeof(h), "header");

  if (h.sizeof_hdr != 348) {
    if (h.sizeof_hdr == 0x5C010000)
      throw UnsupportedError("byte-swapped NIfTI files are not supported");
    throw FormatError("not a NIfTI-1 file (sizeof_hdr != 348)");
  }
  if (std::memcmp(h.magic, "n+1", 4) != 0)
    throw FormatError("bad NIfTI magic (expected \"n+1\\0\")");
  if (h.dim[0] < 3 || h.dim[0] > 7)
    throw UnsupportedError("only 3-D NIfTI volumes are supported");
  for (int d = 4; d <= h.dim[0]; ++d)
    if (h.dim[d] > 1)
      throw UnsupportedError("only 3-D NIfTI volumes are supported");
  for (int d = 1; d <= 3; ++d)
    if (h.dim[d] <= 0) throw FormatError("nonpositive dimension in header");

  Volume3D vol;
  vol.geom.dims = {static_cast<std::size_t>(h.dim[1]),
                   static_cast<std::size_t>(h.dim[2]),
                   static_cast<std::size_t>(h.dim[3])};

  if (h.sform_code > 0) {
    Affine a = Affine::Identity();
    for (int col = 0; col < 4; ++col) {
      a(0, col) = h.srow_x[col];
      a(1, col) = h.srow_y[col];
      a(2, col) = h.srow_z[col];
    }
    vol.geom.affine = a;
  } else if (h.qform_code > 0) {
    vol.geom.affine = affine_from_qform(h);
  } else {
    Affine a = Affine::Identity();
    for (int col = 0; col < 3; ++col)
      a(col, col) = h.pixdim[col + 1] != 0.0f ? h.pixdim[col + 1] : 1.0;
    vol.geom.affine = a;
  }

  if (h.vox_offset < 348.0f)
    throw FormatError("vox_offset smaller than the header");
  in.skip(static_cast<std::size_t>(h.vox_offset) - sizeof(NiftiHeader));

  const std::size_t n = vol.geom.voxel_count();
  const bool scaled = h.scl_slope != 0.0f &&
                      !(h.scl_slope == 1.0f && h.scl_inter == 0.0f);

  switch (h.datatype) {
    case DT_UINT8: {
      auto raw = read_payload<std::uint8_t>(in, n);
      if (scaled)
        apply_scaling(vol, raw, h.scl_slope, h.scl_inter);
      else
        vol.data = std::move(raw);
      break;
    }
    case DT_INT16: {
      auto raw = read_payload<std::int16_t>(in, n);
      if (scaled)
        apply_scaling(vol, raw, h.scl_slope, h.scl_inter);
      else
        vol.data = std::move(raw);
      break;
    }
    case DT_INT32: {
      auto raw = read_payload<std::int32_t>(in, n);
      if (scaled)
        apply_scaling(vol, raw, h.scl_slope, h.scl_inter);
      else
        vol.data = std::move(raw);
      break;
    }
    case DT_FLOAT32: {
      auto raw = read_payload<float>(in, n);
      if (scaled)
        apply_scaling(vol, raw, h.scl_slope, h.scl_inter);
      else
        vol.data = std::move(raw);
      break;
    }
    case DT_FLOAT64: {
      auto raw = read_payload<double>(in, n);
      if (scaled)
        apply_scaling(vol, raw, h.scl_slope, h.scl_inter);
      else
        vol.data = std::move(raw);
      break;
    }
    default:
      throw UnsupportedError("unsupported NIfTI datatype code " +
                             std::to_string(h.datatype));
  }
  return vol;
}

void write_nifti(const Volume3D& vol, const std::filesystem::path& path) {
  const auto& dims = vol.geom.dims;
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0)
    throw ArgumentError("write_nifti: empty dims");
  const std::size_t n = vol.geom.voxel_count();
  std::size_t have =
      std::visit([](const auto& v) { return v.size(); }, vol.data);
  if (have != n)
    throw ContractError("write_nifti: data length does not match dims");

  NiftiHeader h{};
  h.sizeof_hdr = 348;
  h.regular = 'r';
  h.dim[0] = 3;
  h.dim[1] = static_cast<std::int16_t>(dims[0]);
  h.dim[2] = static_cast<std::int16_t>(dims[1]);
  h.dim[3] = static_cast<std::int16_t>(dims[2]);
  for (int d = 4; d <= 7; ++d) h.dim[d] = 1;

  Eigen::Vector3d sp = vol.geom.spacing();
  h.pixdim[0] = 1.0f;
  for (int k = 0; k < 3; ++k) h.pixdim[k + 1] = static_cast<float>(sp[k]);

  std::visit(
      [&](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        h.datatype = datatype_code<T>();
        h.bitpix = static_cast<std::int16_t>(8 * sizeof(T));
      },
      vol.data);

  h.vox_offset = 352.0f;
  h.scl_slope = 1.0f;
  h.scl_inter = 0.0f;
  h.qform_code = 0;
  h.sform_code = 1;
  for (int col = 0; col < 4; ++col) {
    h.srow_x[col] = static_cast<float>(vol.geom.affine(0, col));
    h.srow_y[col] = static_cast<float>(vol.geom.affine(1, col));
    h.srow_z[col] = static_cast<float>(vol.geom.affine(2, col));
  }
  std::memcpy(h.magic, "n+1", 4);

  const char pad[4] = {0, 0, 0, 0};
  if (gzip_path(path)) {
    gzFile f = gzopen(path.string().c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path.string());
    bool ok = gzwrite(f, &h, sizeof(h)) == static_cast<int>(sizeof(h)) &&
              gzwrite(f, pad, 4) == 4;
    std::visit(
        [&](const auto& v) {
          using T = typename std::decay_t<decltype(v)>::value_type;
          std::size_t bytes = v.size() * sizeof(T);
          ok = ok && gzwrite(f, v.data(), static_cast<unsigned>(bytes)) ==
                         static_cast<int>(bytes);
        },
        vol.data);
    ok = gzclose(f) == Z_OK && ok;
    if (!ok) throw IoError("failed writing " + path.string());
  } else {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path.string());
    bool ok = std::fwrite(&h, 1, sizeof(h), f) == sizeof(h) &&
              std::fwrite(pad, 1, 4, f) == 4;
    std::visit(
        [&](const auto& v) {
          using T = typename std::decay_t<decltype(v)>::value_type;
          std::size_t bytes = v.size() * sizeof(T);
          ok = ok && std::fwrite(v.data(), 1, bytes, f) == bytes;
        },
        vol.data);
    ok = std::fclose(f) == 0 && ok;
    if (!ok) throw IoError("failed writing " + path.string());
  }
}

}  // namespace rootlets
