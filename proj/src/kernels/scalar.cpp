// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/kernels.hpp"

namespace rootlets::kernels {

namespace {

void moments_f32_scalar(const float* x, std::size_t n, double* sum,
                        double* sumsq) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = x[i];
    s += v;
    s2 += v * v;
  }
  *sum = s;
  *sumsq = s2;
}

void scale_shift_f32_scalar(float* x, std::size_t n, float shift,
                            float scale) {
  for (std::size_t i = 0; i < n; ++i) x[i] = (x[i] + shift) * scale;
}

std::size_t count_eq_u8_scalar(const std::uint8_t* x, std::size_t n,
                               std::uint8_t v) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (x[i] == v);
  return c;
}

void overlap_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                       std::size_t n, std::uint8_t la, std::uint8_t lb,
                       std::size_t* na, std::size_t* nb, std::size_t* nab) {
  std::size_t ca = 0, cb = 0, cab = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool ia = a[i] == la;
    bool ib = b[i] == lb;
    ca += ia;
    cb += ib;
    cab += ia && ib;
  }
  *na = ca;
  *nb = cb;
  *nab = cab;
}

void and_u8_scalar(const std::uint8_t* a, const std::uint8_t* b,
                   std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] != 0 && b[i] != 0) ? 1 : 0;
}

void mask_eq_u8_scalar(const std::uint8_t* x, std::uint8_t* out, std::size_t n,
                       std::uint8_t v) {
  for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] == v) ? 1 : 0;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops ops{moments_f32_scalar, scale_shift_f32_scalar,
                       count_eq_u8_scalar, overlap_u8_scalar,
                       and_u8_scalar,      mask_eq_u8_scalar,
                       "scalar"};
  return ops;
}

}  // namespace rootlets::kernels
