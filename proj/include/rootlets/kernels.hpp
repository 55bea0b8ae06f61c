// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace rootlets::kernels {

// Hot voxel loops, dispatched at runtime. Every entry has a scalar reference
// implementation and (on x86-64 with AVX2) a vectorized variant; the two are
// equivalence-tested against each other.
struct Ops {
  // sum and sum of squares, accumulated in double
  void (*moments_f32)(const float* x, std::size_t n, double* sum,
                      double* sumsq);
  // x <- (x + shift) * scale, elementwise
  void (*scale_shift_f32)(float* x, std::size_t n, float shift, float scale);
  // number of elements equal to v
  std::size_t (*count_eq_u8)(const std::uint8_t* x, std::size_t n,
                             std::uint8_t v);
  // na = #{a==la}, nb = #{b==lb}, nab = #{a==la && b==lb}
  void (*overlap_u8)(const std::uint8_t* a, const std::uint8_t* b,
                     std::size_t n, std::uint8_t la, std::uint8_t lb,
                     std::size_t* na, std::size_t* nb, std::size_t* nab);
  // out = (a != 0 && b != 0) ? 1 : 0
  void (*and_u8)(const std::uint8_t* a, const std::uint8_t* b,
                 std::uint8_t* out, std::size_t n);
  // out = (x == v) ? 1 : 0
  void (*mask_eq_u8)(const std::uint8_t* x, std::uint8_t* out, std::size_t n,
                     std::uint8_t v);
  const char* name;
};

const Ops& scalar_ops();

#if defined(__x86_64__)
bool avx2_supported();
const Ops& avx2_ops();
#endif

// Best available implementation. ROOTLET_LEVELS_SIMD=scalar forces the
// reference kernels.
const Ops& ops();

}  // namespace rootlets::kernels
