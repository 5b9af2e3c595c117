// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small dictionaries and instances shared by the unit tests.

#pragma once

#include <numbers>
#include <random>

#include "jointcs/correlation.hpp"
#include "jointcs/dictionary.hpp"
#include "jointcs/rng.hpp"

namespace jointcs::testing {

inline Dictionary orthonormal_basis(Index n) { return Dictionary::from_matrix(Eigen::MatrixXd::Identity(n, n)); }

inline Dictionary random_dictionary(Index n, Index k, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd atoms(n, k);
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < n; ++r) atoms(r, c) = normal(rng);
    atoms.col(c).normalize();
  }
  return Dictionary::from_matrix(std::move(atoms));
}

// 6x6 image, two orientations, nine centers: 18 atoms.
inline Dictionary tiny_image_dictionary() {
  Gaussian2DGrid grid;
  grid.width = 6;
  grid.height = 6;
  grid.thetas = {0.0, std::numbers::pi / 2};
  grid.sxs = {2.0};
  grid.sys = {1.0};
  for (int ty = 1; ty < 6; ty += 2) {
    for (int tx = 1; tx < 6; tx += 2) grid.translations.emplace_back(tx, ty);
  }
  return build_gaussian_2d_dictionary(grid);
}

// A random partial injection on [0, k) defined on about `keep` of the atoms.
inline TransformPtr random_partial_map(Index k, double keep, std::mt19937_64& rng, const std::string& label) {
  std::vector<Index> targets(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) targets[static_cast<std::size_t>(i)] = i;
  std::shuffle(targets.begin(), targets.end(), rng);
  std::bernoulli_distribution defined(keep);
  for (auto& t : targets) {
    if (!defined(rng)) t = AtomTransform::kOutside;
  }
  return std::make_shared<const AtomTransform>(CustomTransform{label}, std::move(targets));
}

}  // namespace jointcs::testing
