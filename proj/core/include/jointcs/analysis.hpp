// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "jointcs/correlation.hpp"

namespace jointcs {

/// C1 = 8e / sqrt(6 pi), the variance constant of the deviation tail bound.
double tail_constant_c1();
/// C2 = 2 sqrt(2) e, the scale constant of the deviation tail bound.
double tail_constant_c2();
/// C = (32e / sqrt(6 pi) + 4 sqrt(2) e)^-1 = (4 C1 + 2 C2)^-1.
double recovery_constant();

/// sum_j |truth_j intersect estimate_j| / (S J).
double recovery_rate(std::span<const Support> truth, std::span<const Support> estimate, Index sparsity);

/// Mean over views of ||y_j - yhat_j||^2 / N.
double mse(std::span<const Eigen::VectorXd> signals, std::span<const Eigen::VectorXd> reconstructions);

/// Fraction of trials whose estimated vector differs from the truth.
double transform_error_rate(const TransformVector& truth, std::span<const TransformVector> estimates);
double transform_error_rate(std::span<const TransformVector> truths,
                            std::span<const TransformVector> estimates);

struct BoundInputs {
  Index sparsity = 1;
  Index views = 1;
  Index atoms = 1;
  double candidates = 1.0;  // |T|, may exceed integer range
  double measurements = 0.0;
  double eta = 0.0;
  double min_energy = 1.0;
  double max_energy = 1.0;
};

struct BoundValue {
  double value = 0.0;
  bool vacuous = false;  // value <= 0, no information
};

/// Lower bound on P(R >= 1 - alpha):
/// 1 - 4 S J K |T| exp(-C M J eta^2 alpha^2 m_y^2 / M_y^2). Unclamped.
/// Throws std::invalid_argument unless 0 < alpha <= 1.
BoundValue recovery_probability_bound(const BoundInputs& in, double alpha);

/// Measurements per sensor beyond which P(R >= 1 - alpha) -> 1 as J grows
/// when |T| ~ exp(beta J): beta M_y^2 / (C eta^2 alpha^2 m_y^2). With beta = 0
/// (subexponential candidate growth) the threshold is 1.
double measurement_threshold(double beta, double eta, double alpha, double min_energy, double max_energy);

/// 2 exp(-J M tau^2 / (C1 Bu^2 Bv^2 + C2 tau Bu Bv)).
/// Throws std::invalid_argument for tau <= 0.
double deviation_tail_bound(double tau, Index views, Index measurements, double bound_u, double bound_v);

struct TailEstimate {
  double frequency = 0.0;
  double bound = 0.0;
  double standard_error = 0.0;  // binomial, sqrt(p (1 - p) / trials)
  Index exceedances = 0;
  Index trials = 0;
};

/// Monte-Carlo frequency of (1/J) |sum_j A_j u_j . A_j v_j - u_j . v_j| >= tau
/// over fresh Gaussian matrices, next to the analytic tail bound (evaluated
/// with Bu = max ||u_j||, Bv = max ||v_j||).
TailEstimate deviation_tail_empirical(std::span<const Eigen::VectorXd> u, std::span<const Eigen::VectorXd> v,
                                      Index measurements, double tau, Index trials, std::uint64_t seed);

}  // namespace jointcs
