// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <vector>

#include "rootlets/volume.hpp"

namespace rootlets {

enum class CovConvention { kSample, kPopulation };

struct DiceResult {
  double value = 0.0;
  bool both_empty = false;  // empty-vs-empty is reported as 1.0, flagged
};

struct MulticlassDice {
  std::map<int, DiceResult> per_class;  // classes present in truth
  std::vector<int> absent_classes;      // requested but missing from truth
  double mean = 0.0;
  double sd = 0.0;  // sample sd across classes present in truth
};

// 2|A^B| / (|A|+|B|) on binary volumes sharing a grid.
DiceResult dice(const LabelMap& pred, const LabelMap& truth);

// Per-class binary Dice on label indicators for the given classes.
MulticlassDice dice_multiclass(const LabelMap& pred, const LabelMap& truth,
                               const std::vector<int>& classes = {2, 3, 4, 5,
                                                                  6, 7, 8});

// 100 * sd / mean. Sample (N-1) convention by default; the rater counts are
// small enough that the choice is material.
double cov_percent(const std::vector<double>& values,
                   CovConvention convention = CovConvention::kSample);

// Mean |test - reference| over levels present in both maps.
struct MaeResult {
  double mae_mm = 0.0;
  std::vector<int> skipped_levels;  // present on one side only
};
MaeResult mae_levels(const std::map<int, double>& reference,
                     const std::map<int, double>& test);

}  // namespace rootlets
