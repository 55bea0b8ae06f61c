// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/metrics.hpp"

#include <cmath>

#include "rootlets/kernels.hpp"

namespace rootlets {

namespace {

DiceResult dice_for_label(const LabelMap& pred, const LabelMap& truth,
                          std::uint8_t lp, std::uint8_t lt) {
  const std::size_t n = pred.geom.voxel_count();
  std::size_t na = 0, nb = 0, nab = 0;
  kernels::ops().overlap_u8(pred.data.data(), truth.data.data(), n, lp, lt,
                            &na, &nb, &nab);
  DiceResult r;
  if (na + nb == 0) {
    r.value = 1.0;
    r.both_empty = true;
  } else {
    r.value = 2.0 * static_cast<double>(nab) / static_cast<double>(na + nb);
  }
  return r;
}

}  // namespace

DiceResult dice(const LabelMap& pred, const LabelMap& truth) {
  if (!pred.geom.same_grid(truth.geom))
    throw ContractError("dice: grids do not match");
  for (std::uint8_t v : pred.data)
    if (v > 1) throw ContractError("dice: pred must be binary");
  for (std::uint8_t v : truth.data)
    if (v > 1) throw ContractError("dice: truth must be binary");
  return dice_for_label(pred, truth, 1, 1);
}

MulticlassDice dice_multiclass(const LabelMap& pred, const LabelMap& truth,
                               const std::vector<int>& classes) {
  if (!pred.geom.same_grid(truth.geom))
    throw ContractError("dice_multiclass: grids do not match");

  MulticlassDice out;
  const std::size_t n = truth.geom.voxel_count();
  for (int cls : classes) {
    std::uint8_t c = static_cast<std::uint8_t>(cls);
    if (kernels::ops().count_eq_u8(truth.data.data(), n, c) == 0) {
      out.absent_classes.push_back(cls);
      continue;
    }
    out.per_class[cls] = dice_for_label(pred, truth, c, c);
  }

  if (!out.per_class.empty()) {
    double sum = 0.0;
    for (const auto& [cls, r] : out.per_class) sum += r.value;
    out.mean = sum / static_cast<double>(out.per_class.size());
    if (out.per_class.size() > 1) {
      double ss = 0.0;
      for (const auto& [cls, r] : out.per_class) {
        double dlt = r.value - out.mean;
        ss += dlt * dlt;
      }
      out.sd = std::sqrt(ss / static_cast<double>(out.per_class.size() - 1));
    }
  }
  return out;
}

double cov_percent(const std::vector<double>& values,
                   CovConvention convention) {
  if (values.size() < 2)
    throw ArgumentError("cov: at least 2 values required");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (std::abs(mean) < 1e-9)
    throw DegenerateInputError("cov: mean is (near) zero");
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double denom = convention == CovConvention::kSample
                           ? static_cast<double>(values.size() - 1)
                           : static_cast<double>(values.size());
  return 100.0 * std::sqrt(ss / denom) / mean;
}

MaeResult mae_levels(const std::map<int, double>& reference,
                     const std::map<int, double>& test) {
  MaeResult out;
  double sum = 0.0;
  std::size_t shared = 0;
  for (const auto& [level, ref] : reference) {
    auto it = test.find(level);
    if (it == test.end()) {
      out.skipped_levels.push_back(level);
      continue;
    }
    sum += std::abs(it->second - ref);
    ++shared;
  }
  for (const auto& [level, t] : test)
    if (!reference.count(level)) out.skipped_levels.push_back(level);
  if (shared == 0)
    throw DegenerateInputError("mae_levels: no level present in both maps");
  out.mae_mm = sum / static_cast<double>(shared);
  return out;
}

}  // namespace rootlets
