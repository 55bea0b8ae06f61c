// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

// Compiled with -mavx2 for this translation unit only; callers must gate on
// avx2_supported() before touching avx2_ops().

#include "rootlets/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace rootlets::kernels {

namespace {

void moments_f32_avx2(const float* x, std::size_t n, double* sum,
                      double* sumsq) {
  __m256d acc_s = _mm256_setzero_pd();
  __m256d acc_s2 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_cvtps_pd(_mm_loadu_ps(x + i));
    acc_s = _mm256_add_pd(acc_s, v);
    acc_s2 = _mm256_fmadd_pd(v, v, acc_s2);
  }
  alignas(32) double lanes_s[4], lanes_s2[4];
  _mm256_store_pd(lanes_s, acc_s);
  _mm256_store_pd(lanes_s2, acc_s2);
  double s = lanes_s[0] + lanes_s[1] + lanes_s[2] + lanes_s[3];
  double s2 = lanes_s2[0] + lanes_s2[1] + lanes_s2[2] + lanes_s2[3];
  for (; i < n; ++i) {
    double v = x[i];
    s += v;
    s2 += v * v;
  }
  *sum = s;
  *sumsq = s2;
}

void scale_shift_f32_avx2(float* x, std::size_t n, float shift, float scale) {
  const __m256 vshift = _mm256_set1_ps(shift);
  const __m256 vscale = _mm256_set1_ps(scale);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    v = _mm256_mul_ps(_mm256_add_ps(v, vshift), vscale);
    _mm256_storeu_ps(x + i, v);
  }
  for (; i < n; ++i) x[i] = (x[i] + shift) * scale;
}

std::size_t count_eq_u8_avx2(const std::uint8_t* x, std::size_t n,
                             std::uint8_t v) {
  const __m256i needle = _mm256_set1_epi8(static_cast<char>(v));
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i chunk =
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i));
    unsigned mask = static_cast<unsigned>(
        _mm256_movemask_epi8(_mm256_cmpeq_epi8(chunk, needle)));
    c += static_cast<std::size_t>(__builtin_popcount(mask));
  }
  for (; i < n; ++i) c += (x[i] == v);
  return c;
}

void overlap_u8_avx2(const std::uint8_t* a, const std::uint8_t* b,
                     std::size_t n, std::uint8_t la, std::uint8_t lb,
                     std::size_t* na, std::size_t* nb, std::size_t* nab) {
  const __m256i va = _mm256_set1_epi8(static_cast<char>(la));
  const __m256i vb = _mm256_set1_epi8(static_cast<char>(lb));
  std::size_t ca = 0, cb = 0, cab = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i ca_mask = _mm256_cmpeq_epi8(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)), va);
    __m256i cb_mask = _mm256_cmpeq_epi8(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)), vb);
    unsigned ma = static_cast<unsigned>(_mm256_movemask_epi8(ca_mask));
    unsigned mb = static_cast<unsigned>(_mm256_movemask_epi8(cb_mask));
    ca += static_cast<std::size_t>(__builtin_popcount(ma));
    cb += static_cast<std::size_t>(__builtin_popcount(mb));
    cab += static_cast<std::size_t>(__builtin_popcount(ma & mb));
  }
  for (; i < n; ++i) {
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

void and_u8_avx2(const std::uint8_t* a, const std::uint8_t* b,
                 std::uint8_t* out, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi8(1);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i nz_a = _mm256_cmpeq_epi8(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)), zero);
    __m256i nz_b = _mm256_cmpeq_epi8(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)), zero);
    // both nonzero <=> neither compares equal to zero
    __m256i both = _mm256_andnot_si256(_mm256_or_si256(nz_a, nz_b), one);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), both);
  }
  for (; i < n; ++i) out[i] = (a[i] != 0 && b[i] != 0) ? 1 : 0;
}

void mask_eq_u8_avx2(const std::uint8_t* x, std::uint8_t* out, std::size_t n,
                     std::uint8_t v) {
  const __m256i needle = _mm256_set1_epi8(static_cast<char>(v));
  const __m256i one = _mm256_set1_epi8(1);
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i eq = _mm256_cmpeq_epi8(
        _mm256_loadu_si256(reinterpret_cast<const __m256i*>(x + i)), needle);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i),
                        _mm256_and_si256(eq, one));
  }
  for (; i < n; ++i) out[i] = (x[i] == v) ? 1 : 0;
}

}  // namespace

bool avx2_supported() { return __builtin_cpu_supports("avx2"); }

const Ops& avx2_ops() {
  static const Ops ops{moments_f32_avx2, scale_shift_f32_avx2,
                       count_eq_u8_avx2, overlap_u8_avx2,
                       and_u8_avx2,      mask_eq_u8_avx2,
                       "avx2"};
  return ops;
}

}  // namespace rootlets::kernels

#endif  // __x86_64__
