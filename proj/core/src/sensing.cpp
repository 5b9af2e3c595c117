// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/sensing.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "jointcs/rng.hpp"

namespace jointcs {

SensingMatrix sample_sensing_matrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("sample_sensing_matrix: dimensions must be >= 1");
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  SensingMatrix a{Eigen::MatrixXd(m, n), seed, false};
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < n; ++c) a.entries(r, c) = scale * normal(rng);
  }
  return a;
}

SensingMatrix identity_sensing(Index n) {
  if (n < 1) throw std::invalid_argument("identity_sensing: dimension must be >= 1");
  return SensingMatrix{Eigen::MatrixXd::Identity(n, n), 0, true};
}

std::vector<SensingMatrix> sample_view_matrices(Index m, Index n, Index views,
                                                std::uint64_t master_seed) {
  std::vector<SensingMatrix> out;
  out.reserve(static_cast<std::size_t>(views));
  for (Index j = 0; j < views; ++j) {
    out.push_back(sample_sensing_matrix(m, n, derive_seed(master_seed, static_cast<std::uint64_t>(j))));
  }
  return out;
}

Eigen::VectorXd measure(const SensingMatrix& a, const Eigen::VectorXd& y) {
  if (a.cols() != y.size()) throw std::invalid_argument("measure: dimension mismatch");
  if (a.identity) return y;
  return a.entries * y;
}

MeasurementSet measure_ensemble(std::vector<SensingMatrix> matrices,
                                const std::vector<Eigen::VectorXd>& signals) {
  if (matrices.size() != signals.size()) {
    throw std::invalid_argument("measure_ensemble: one matrix per signal required");
  }
  MeasurementSet set;
  set.measurements.reserve(signals.size());
  for (std::size_t j = 0; j < signals.size(); ++j) {
    if (matrices[j].rows() != matrices.front().rows() ||
        matrices[j].cols() != matrices.front().cols()) {
      throw std::invalid_argument("measure_ensemble: views must share M and N");
    }
    set.measurements.push_back(measure(matrices[j], signals[j]));
  }
  set.matrices = std::move(matrices);
  return set;
}

}  // namespace jointcs
