// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace jointcs {

using Index = Eigen::Index;

/// M x N sensing matrix with i.i.d. N(0, 1/M) entries, or the N x N identity
/// in test mode.
struct SensingMatrix {
  Eigen::MatrixXd entries;
  std::uint64_t seed = 0;
  bool identity = false;

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

/// Deterministic given (M, N, seed). Entries are drawn row by row.
SensingMatrix sample_sensing_matrix(Index m, Index n, std::uint64_t seed);

/// Test-only: the exact identity, so s = y.
SensingMatrix identity_sensing(Index n);

/// One independent matrix per view, seeded from derive_seed(master_seed, view).
std::vector<SensingMatrix> sample_view_matrices(Index m, Index n, Index views,
                                                std::uint64_t master_seed);

Eigen::VectorXd measure(const SensingMatrix& a, const Eigen::VectorXd& y);

/// Per-view matrices and the compressed vectors s_j = A_j y_j.
struct MeasurementSet {
  std::vector<SensingMatrix> matrices;
  std::vector<Eigen::VectorXd> measurements;

  Index views() const { return static_cast<Index>(matrices.size()); }
  Index rows() const { return matrices.empty() ? 0 : matrices.front().rows(); }
  Index cols() const { return matrices.empty() ? 0 : matrices.front().cols(); }
};

/// Applies matrices[j] to signals[j]. All matrices must share one shape.
MeasurementSet measure_ensemble(std::vector<SensingMatrix> matrices,
                                const std::vector<Eigen::VectorXd>& signals);

}  // namespace jointcs
