// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "rootlets/volume.hpp"

namespace rootlets {

// STAPLE EM defaults. Initialization 0.9999 avoids the p=q=1 fixed point;
// the foreground prior is the mean rater foreground fraction, held fixed.
struct StapleOptions {
  double tol = 1e-6;
  int max_iter = 100;
  double init_p = 0.9999;
  double init_q = 0.9999;
  double clamp = 1e-7;  // p, q, W kept inside [clamp, 1-clamp]
};

struct StapleResult {
  std::vector<double> sensitivity;  // p, one per rater
  std::vector<double> specificity;  // q, one per rater
  std::vector<double> posterior;    // W, one per voxel
  int iterations = 0;
  bool converged = false;
};

struct RaterSet {
  std::vector<LabelMap> maps;       // identical grids, labels in {0} u {2..8}
  std::vector<std::string> names;   // optional, defaults rater-1..N
};

struct MulticlassStapleResult {
  LabelMap consensus;
  std::map<int, StapleResult> per_class;
  std::vector<std::string> warnings;  // classes degenerate for all raters
};

// Binary STAPLE (Warfield et al. 2004 E/M updates) over >= 2 masks sharing
// one grid. Throws DegenerateInputError when every mask is empty.
StapleResult staple_binary(const std::vector<LabelMap>& masks,
                           const StapleOptions& opts = {});

// Independent binary STAPLE per class 2..8 on the indicator masks; consensus
// label is the argmax class where the posterior exceeds 0.5 (ties to the
// lower class), background otherwise.
MulticlassStapleResult staple_multiclass(const RaterSet& raters,
                                         const StapleOptions& opts = {});

}  // namespace rootlets
