// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include "rootlets/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "rootlets/kernels.hpp"

namespace rootlets {

namespace {

constexpr int kMaxRaters = 32;

void validate_grids(const std::vector<LabelMap>& masks) {
  if (masks.size() < 2)
    throw ContractError("staple: at least 2 raters required");
  if (masks.size() > kMaxRaters)
    throw ContractError("staple: too many raters");
  for (std::size_t j = 1; j < masks.size(); ++j)
    if (!masks[j].geom.same_grid(masks[0].geom))
      throw ContractError("staple: rater grids do not match");
}

double clamp_prob(double v, double eps) {
  return std::clamp(v, eps, 1.0 - eps);
}

}  // namespace

StapleResult staple_binary(const std::vector<LabelMap>& masks,
                           const StapleOptions& opts) {
  validate_grids(masks);
  if (opts.tol <= 0.0) throw ArgumentError("staple: tol must be positive");
  if (opts.max_iter < 1) throw ArgumentError("staple: max_iter must be >= 1");
  const std::size_t n = masks[0].geom.voxel_count();
  const int num_raters = static_cast<int>(masks.size());

  for (const auto& m : masks)
    for (std::uint8_t v : m.data)
      if (v > 1) throw ContractError("staple_binary: masks must be binary");

  // Voxels collapse onto 2^J rater-response patterns; the EM arithmetic only
  // depends on pattern counts, so run it per pattern instead of per voxel.
  std::vector<std::uint32_t> pattern(n, 0);
  std::size_t total_fg = 0;
  for (int j = 0; j < num_raters; ++j) {
    const auto& d = masks[j].data;
    for (std::size_t i = 0; i < n; ++i)
      if (d[i]) pattern[i] |= (1u << j);
    total_fg += kernels::ops().count_eq_u8(d.data(), n, 1);
  }
  if (total_fg == 0)
    throw DegenerateInputError("staple_binary: all rater masks are empty");

  std::map<std::uint32_t, std::size_t> counts;
  for (std::uint32_t p : pattern) ++counts[p];

  const double prior =
      static_cast<double>(total_fg) / (static_cast<double>(n) * num_raters);

  StapleResult res;
  res.sensitivity.assign(num_raters, opts.init_p);
  res.specificity.assign(num_raters, opts.init_q);

  std::map<std::uint32_t, double> w_pat;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    res.iterations = iter;

    // E-step
    w_pat.clear();
    for (const auto& [pat, count] : counts) {
      (void)count;
      double a = prior, b = 1.0 - prior;
      for (int j = 0; j < num_raters; ++j) {
        bool on = (pat >> j) & 1u;
        a *= on ? res.sensitivity[j] : 1.0 - res.sensitivity[j];
        b *= on ? 1.0 - res.specificity[j] : res.specificity[j];
      }
      double w = (a + b) > 0.0 ? a / (a + b) : 0.5;
      w_pat[pat] = clamp_prob(w, opts.clamp);
    }

    // M-step
    double sum_w = 0.0, sum_not_w = 0.0;
    std::vector<double> sum_w_on(num_raters, 0.0);
    std::vector<double> sum_not_w_off(num_raters, 0.0);
    for (const auto& [pat, count] : counts) {
      double w = w_pat[pat];
      double c = static_cast<double>(count);
      sum_w += c * w;
      sum_not_w += c * (1.0 - w);
      for (int j = 0; j < num_raters; ++j) {
        if ((pat >> j) & 1u)
          sum_w_on[j] += c * w;
        else
          sum_not_w_off[j] += c * (1.0 - w);
      }
    }

    double max_delta = 0.0;
    for (int j = 0; j < num_raters; ++j) {
      double p = clamp_prob(sum_w > 0.0 ? sum_w_on[j] / sum_w : 0.5,
                            opts.clamp);
      double q = clamp_prob(
          sum_not_w > 0.0 ? sum_not_w_off[j] / sum_not_w : 0.5, opts.clamp);
      max_delta = std::max({max_delta, std::abs(p - res.sensitivity[j]),
                            std::abs(q - res.specificity[j])});
      res.sensitivity[j] = p;
      res.specificity[j] = q;
    }
    if (max_delta < opts.tol) {
      res.converged = true;
      break;
    }
  }

  res.posterior.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.posterior[i] = w_pat[pattern[i]];
  return res;
}

MulticlassStapleResult staple_multiclass(const RaterSet& raters,
                                         const StapleOptions& opts) {
  validate_grids(raters.maps);
  const std::size_t n = raters.maps[0].geom.voxel_count();
  for (const auto& m : raters.maps)
    for (std::uint8_t v : m.data)
      if (v == 1 || v > 8)
        throw ContractError(
            "staple_multiclass: labels must be 0 or in 2..8");

  MulticlassStapleResult out;
  out.consensus = LabelMap(raters.maps[0].geom);

  std::vector<double> best_w(n, 0.0);
  std::vector<std::uint8_t> best_label(n, 0);

  for (int cls = 2; cls <= 8; ++cls) {
    bool present = false;
    std::vector<LabelMap> indicators;
    indicators.reserve(raters.maps.size());
    for (const auto& m : raters.maps) {
      LabelMap ind(m.geom);
      kernels::ops().mask_eq_u8(m.data.data(), ind.data.data(), n,
                                static_cast<std::uint8_t>(cls));
      if (!present &&
          kernels::ops().count_eq_u8(ind.data.data(), n, 1) > 0)
        present = true;
      indicators.push_back(std::move(ind));
    }
    if (!present) continue;

    StapleResult r;
    try {
      r = staple_binary(indicators, opts);
    } catch (const DegenerateInputError&) {
      out.warnings.push_back("class " + std::to_string(cls) +
                             " degenerate for all raters; omitted");
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      // strict > keeps ties on the lower (more rostral) class
      if (r.posterior[i] >= 0.5 && r.posterior[i] > best_w[i]) {
        best_w[i] = r.posterior[i];
        best_label[i] = static_cast<std::uint8_t>(cls);
      }
    }
    out.per_class.emplace(cls, std::move(r));
  }

  out.consensus.data = std::move(best_label);
  return out;
}

}  // namespace rootlets
