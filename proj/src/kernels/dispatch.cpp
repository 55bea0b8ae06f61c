// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <cstdlib>
#include <cstring>

#include "rootlets/kernels.hpp"

namespace rootlets::kernels {

namespace {

const Ops& select() {
  const char* force = std::getenv("ROOTLET_LEVELS_SIMD");
  if (force && std::strcmp(force, "scalar") == 0) return scalar_ops();
#if defined(__x86_64__)
  if (avx2_supported()) return avx2_ops();
#endif
  return scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops& selected = select();
  return selected;
}

}  // namespace rootlets::kernels
