// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "rootlets/consensus.hpp"
#include "staple_oracle.hpp"
#include "test_util.hpp"

using namespace rootlets;
using namespace rootlets::testing;

TEST_CASE("unanimity is a fixed point") {
  std::mt19937 rng(11);
  LabelMap m = random_binary_mask(make_geometry(5, 5, 5), rng, 0.3);
  StapleResult r = staple_binary({m, m, m});
  CHECK(r.converged);
  for (std::size_t i = 0; i < m.data.size(); ++i)
    CHECK((r.posterior[i] >= 0.5) == (m.data[i] != 0));
}

TEST_CASE("majority prevails on a single disputed voxel") {
  Geometry g = make_geometry(4, 4, 1);
  LabelMap a(g), b(g), c(g);
  a.at(1, 1, 0) = 1;
  b.at(1, 1, 0) = 1;
  // rater c leaves the voxel unset
  StapleResult r = staple_binary({a, b, c});
  CHECK(r.posterior[g.index(1, 1, 0)] > 0.5);

  StapleResult oracle = staple_oracle({a, b, c});
  for (std::size_t i = 0; i < r.posterior.size(); ++i)
    CHECK(r.posterior[i] == doctest::Approx(oracle.posterior[i]).epsilon(1e-9));
}

TEST_CASE("two raters with disjoint single-voxel masks match the oracle") {
  Geometry g = make_geometry(4, 4, 1);
  LabelMap a(g), b(g);
  a.at(0, 0, 0) = 1;
  b.at(3, 3, 0) = 1;
  StapleResult r = staple_binary({a, b});
  StapleResult oracle = staple_oracle({a, b});
  REQUIRE(r.iterations == oracle.iterations);
  for (std::size_t i = 0; i < r.posterior.size(); ++i)
    CHECK(std::abs(r.posterior[i] - oracle.posterior[i]) < 1e-9);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(r.sensitivity[j] - oracle.sensitivity[j]) < 1e-6);
    CHECK(std::abs(r.specificity[j] - oracle.specificity[j]) < 1e-6);
  }
}

TEST_CASE("oracle equivalence on random small grids") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 6);
    Geometry g = make_geometry(dim(rng), dim(rng), dim(rng));
    int raters = std::uniform_int_distribution<int>(2, 3)(rng);
    std::vector<LabelMap> masks;
    bool any = false;
    for (int j = 0; j < raters; ++j) {
      masks.push_back(random_binary_mask(g, rng, 0.4));
      for (auto v : masks.back().data) any = any || v;
    }
    if (!any) continue;
    StapleResult r = staple_binary(masks);
    StapleResult oracle = staple_oracle(masks);
    for (std::size_t i = 0; i < r.posterior.size(); ++i)
      CHECK(std::abs(r.posterior[i] - oracle.posterior[i]) < 1e-9);
    for (int j = 0; j < raters; ++j) {
      CHECK(std::abs(r.sensitivity[j] - oracle.sensitivity[j]) < 1e-6);
      CHECK(std::abs(r.specificity[j] - oracle.specificity[j]) < 1e-6);
    }
  }
}

TEST_CASE("rater order does not matter") {
  std::mt19937 rng(13);
  Geometry g = make_geometry(5, 5, 3);
  std::vector<LabelMap> masks;
  for (int j = 0; j < 4; ++j)
    masks.push_back(random_binary_mask(g, rng, 0.35));
  StapleResult forward = staple_binary(masks);

  std::vector<LabelMap> shuffled = {masks[2], masks[0], masks[3], masks[1]};
  StapleResult perm = staple_binary(shuffled);
  for (std::size_t i = 0; i < forward.posterior.size(); ++i)
    CHECK(std::abs(forward.posterior[i] - perm.posterior[i]) < 1e-12);
  CHECK(std::abs(forward.sensitivity[2] - perm.sensitivity[0]) < 1e-12);
  CHECK(std::abs(forward.specificity[1] - perm.specificity[3]) < 1e-12);
}

TEST_CASE("duplicating a rater never flips a unanimous voxel") {
  // raters are noisy copies of one truth; near-independent raters can push
  // the EM into the flipped regime where this property does not hold
  std::mt19937 rng(14);
  Geometry g = make_geometry(5, 5, 4);
  LabelMap truth = random_binary_mask(g, rng, 0.3);
  std::bernoulli_distribution flip(0.1);
  std::vector<LabelMap> masks;
  for (int j = 0; j < 3; ++j) {
    LabelMap m = truth;
    for (auto& v : m.data)
      if (flip(rng)) v = v ? 0 : 1;
    masks.push_back(m);
  }
  StapleResult before = staple_binary(masks);
  masks.push_back(masks[0]);
  StapleResult after = staple_binary(masks);

  for (std::size_t i = 0; i < g.voxel_count(); ++i) {
    bool unanimous_fg = true, unanimous_bg = true;
    for (int j = 0; j < 3; ++j) {
      unanimous_fg = unanimous_fg && masks[j].data[i];
      unanimous_bg = unanimous_bg && !masks[j].data[i];
    }
    if (unanimous_fg) {
      CHECK(before.posterior[i] >= 0.5);
      CHECK(after.posterior[i] >= 0.5);
    }
    if (unanimous_bg) {
      CHECK(before.posterior[i] < 0.5);
      CHECK(after.posterior[i] < 0.5);
    }
  }
}

TEST_CASE("degenerate and contract errors") {
  Geometry g = make_geometry(3, 3, 3);
  LabelMap empty(g);
  CHECK_THROWS_AS(staple_binary({empty, empty}), DegenerateInputError);

  LabelMap other(make_geometry(3, 3, 4));
  CHECK_THROWS_AS(staple_binary({empty, other}), ContractError);

  LabelMap one(g);
  one.at(0, 0, 0) = 1;
  CHECK_THROWS_AS(staple_binary({one}), ContractError);
}

TEST_CASE("multiclass consensus") {
  Geometry g = make_geometry(4, 4, 2);

  SUBCASE("unanimous raters reproduce the common labelmap") {
    LabelMap m(g);
    m.at(0, 0, 0) = 2;
    m.at(1, 1, 0) = 5;
    m.at(2, 2, 1) = 8;
    RaterSet raters{{m, m, m}, {}};
    auto res = staple_multiclass(raters);
    CHECK(res.consensus.data == m.data);
  }

  SUBCASE("two votes for class 3 beat one vote for class 4") {
    LabelMap a(g), b(g), c(g);
    a.at(1, 1, 0) = 3;
    b.at(1, 1, 0) = 3;
    c.at(1, 1, 0) = 4;
    // anchor voxels so neither class is empty for the other raters
    a.at(3, 3, 1) = 3;
    b.at(3, 3, 1) = 3;
    c.at(3, 3, 1) = 3;
    a.at(0, 3, 1) = 4;
    b.at(0, 3, 1) = 4;
    c.at(0, 3, 1) = 4;
    auto res = staple_multiclass({{a, b, c}, {}});
    CHECK(res.consensus.at(1, 1, 0) == 3);
    CHECK(res.consensus.at(3, 3, 1) == 3);
    CHECK(res.consensus.at(0, 3, 1) == 4);
  }

  SUBCASE("absent classes cannot appear") {
    std::mt19937 rng(15);
    LabelMap a(g), b(g);
    std::bernoulli_distribution coin(0.4);
    for (std::size_t i = 0; i < g.voxel_count(); ++i) {
      if (coin(rng)) a.data[i] = 5;
      if (coin(rng)) b.data[i] = 5;
    }
    a.at(0, 0, 0) = 5;  // guarantee nonempty
    auto res = staple_multiclass({{a, b}, {}});
    std::set<int> labels(res.consensus.data.begin(),
                         res.consensus.data.end());
    for (int l : labels) CHECK((l == 0 || l == 5));
    CHECK(res.per_class.count(5) == 1);
    CHECK(res.per_class.size() == 1);
  }

  SUBCASE("label 1 is rejected") {
    LabelMap a(g), b(g);
    a.at(0, 0, 0) = 1;
    CHECK_THROWS_AS(staple_multiclass({{a, b}, {}}), ContractError);
  }
}
