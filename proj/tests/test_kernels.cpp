// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <random>
#include <vector>

#include "rootlets/kernels.hpp"

using namespace rootlets;

namespace {

// sizes chosen to exercise vector bodies and scalar tails
const std::vector<std::size_t> kSizes = {0, 1, 3, 31, 32, 33, 100, 1024, 4097};

}  // namespace

TEST_CASE("scalar and dispatched kernels agree") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<float> real(-10.0f, 10.0f);
  std::uniform_int_distribution<int> byte(0, 8);

  const auto& ref = kernels::scalar_ops();
  const auto& hot = kernels::ops();
  INFO("active kernels: " << hot.name);

  for (std::size_t n : kSizes) {
    std::vector<float> x(n);
    for (auto& v : x) v = real(rng);
    std::vector<std::uint8_t> a(n), b(n);
    for (auto& v : a) v = static_cast<std::uint8_t>(byte(rng));
    for (auto& v : b) v = static_cast<std::uint8_t>(byte(rng));

    double s_ref, s2_ref, s_hot, s2_hot;
    ref.moments_f32(x.data(), n, &s_ref, &s2_ref);
    hot.moments_f32(x.data(), n, &s_hot, &s2_hot);
    CHECK(s_hot == doctest::Approx(s_ref).epsilon(1e-9));
    CHECK(s2_hot == doctest::Approx(s2_ref).epsilon(1e-9));

    std::vector<float> y1 = x, y2 = x;
    ref.scale_shift_f32(y1.data(), n, 1.5f, 0.25f);
    hot.scale_shift_f32(y2.data(), n, 1.5f, 0.25f);
    CHECK(y1 == y2);

    for (std::uint8_t v : {0, 1, 5}) {
      CHECK(ref.count_eq_u8(a.data(), n, v) == hot.count_eq_u8(a.data(), n, v));
    }

    std::size_t na_r, nb_r, nab_r, na_h, nb_h, nab_h;
    ref.overlap_u8(a.data(), b.data(), n, 3, 3, &na_r, &nb_r, &nab_r);
    hot.overlap_u8(a.data(), b.data(), n, 3, 3, &na_h, &nb_h, &nab_h);
    CHECK(na_r == na_h);
    CHECK(nb_r == nb_h);
    CHECK(nab_r == nab_h);

    std::vector<std::uint8_t> o1(n), o2(n), m1(n), m2(n);
    ref.and_u8(a.data(), b.data(), o1.data(), n);
    hot.and_u8(a.data(), b.data(), o2.data(), n);
    CHECK(o1 == o2);
    ref.mask_eq_u8(a.data(), m1.data(), n, 4);
    hot.mask_eq_u8(a.data(), m2.data(), n, 4);
    CHECK(m1 == m2);
  }
}

TEST_CASE("counting kernels are exact") {
  std::vector<std::uint8_t> a(1000, 0);
  for (std::size_t i = 0; i < a.size(); i += 7) a[i] = 2;
  CHECK(kernels::ops().count_eq_u8(a.data(), a.size(), 2) == 143);
  CHECK(kernels::ops().count_eq_u8(a.data(), a.size(), 0) == 857);
  CHECK(kernels::ops().count_eq_u8(a.data(), a.size(), 9) == 0);
}

#if defined(__x86_64__)
TEST_CASE("avx2 kernels run when the cpu supports them") {
  if (!kernels::avx2_supported()) return;
  CHECK(std::string(kernels::avx2_ops().name) == "avx2");
}
#endif
