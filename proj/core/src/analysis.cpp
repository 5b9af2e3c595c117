// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "jointcs/rng.hpp"

namespace jointcs {

double tail_constant_c1() { return 8.0 * std::numbers::e / std::sqrt(6.0 * std::numbers::pi); }

double tail_constant_c2() { return 2.0 * std::numbers::sqrt2 * std::numbers::e; }

double recovery_constant() {
  return 1.0 / (32.0 * std::numbers::e / std::sqrt(6.0 * std::numbers::pi) +
                4.0 * std::numbers::sqrt2 * std::numbers::e);
}

double recovery_rate(std::span<const Support> truth, std::span<const Support> estimate, Index sparsity) {
  if (truth.size() != estimate.size() || truth.empty()) {
    throw std::invalid_argument("recovery_rate: one estimated support per true support required");
  }
  if (sparsity < 1) throw std::invalid_argument("recovery_rate: sparsity must be >= 1");
  Index hits = 0;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    if (static_cast<Index>(truth[j].size()) != sparsity ||
        static_cast<Index>(estimate[j].size()) != sparsity) {
      throw std::invalid_argument("recovery_rate: supports must have exactly S atoms");
    }
    Support a = truth[j];
    Support b = estimate[j];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    Support common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    hits += static_cast<Index>(common.size());
  }
  return static_cast<double>(hits) / static_cast<double>(sparsity * static_cast<Index>(truth.size()));
}

double mse(std::span<const Eigen::VectorXd> signals, std::span<const Eigen::VectorXd> reconstructions) {
  if (signals.size() != reconstructions.size() || signals.empty()) {
    throw std::invalid_argument("mse: one reconstruction per signal required");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < signals.size(); ++j) {
    if (signals[j].size() != reconstructions[j].size() || signals[j].size() == 0) {
      throw std::invalid_argument("mse: shape mismatch");
    }
    total += (signals[j] - reconstructions[j]).squaredNorm() / static_cast<double>(signals[j].size());
  }
  return total / static_cast<double>(signals.size());
}

double transform_error_rate(const TransformVector& truth, std::span<const TransformVector> estimates) {
  if (estimates.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& e : estimates) wrong += (e == truth) ? 0 : 1;
  return static_cast<double>(wrong) / static_cast<double>(estimates.size());
}

double transform_error_rate(std::span<const TransformVector> truths,
                            std::span<const TransformVector> estimates) {
  if (truths.size() != estimates.size()) {
    throw std::invalid_argument("transform_error_rate: trial counts differ");
  }
  if (estimates.empty()) return 0.0;
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) wrong += (estimates[i] == truths[i]) ? 0 : 1;
  return static_cast<double>(wrong) / static_cast<double>(estimates.size());
}

BoundValue recovery_probability_bound(const BoundInputs& in, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("recovery_probability_bound: alpha must be in (0, 1]");
  }
  const double ratio = in.min_energy / in.max_energy;
  const double exponent = -recovery_constant() * in.measurements * static_cast<double>(in.views) *
                          in.eta * in.eta * alpha * alpha * ratio * ratio;
  const double prefactor = 4.0 * static_cast<double>(in.sparsity) * static_cast<double>(in.views) *
                           static_cast<double>(in.atoms) * in.candidates;
  BoundValue out;
  out.value = 1.0 - prefactor * std::exp(exponent);
  out.vacuous = out.value <= 0.0;
  return out;
}

double measurement_threshold(double beta, double eta, double alpha, double min_energy, double max_energy) {
  if (beta == 0.0) return 1.0;
  const double ratio = max_energy / min_energy;
  return beta / (recovery_constant() * eta * eta * alpha * alpha) * ratio * ratio;
}

double deviation_tail_bound(double tau, Index views, Index measurements, double bound_u, double bound_v) {
  if (!(tau > 0.0)) throw std::invalid_argument("deviation_tail_bound: tau must be > 0");
  const double b = bound_u * bound_v;
  const double denom = tail_constant_c1() * b * b + tail_constant_c2() * tau * b;
  return 2.0 * std::exp(-static_cast<double>(views) * static_cast<double>(measurements) * tau * tau / denom);
}

TailEstimate deviation_tail_empirical(std::span<const Eigen::VectorXd> u, std::span<const Eigen::VectorXd> v,
                                      Index measurements, double tau, Index trials, std::uint64_t seed) {
  if (u.empty() || u.size() != v.size()) {
    throw std::invalid_argument("deviation_tail_empirical: u and v must be nonempty and equally long");
  }
  if (trials < 1 || measurements < 1) {
    throw std::invalid_argument("deviation_tail_empirical: trials and measurements must be >= 1");
  }
  const Index n = u.front().size();
  double bu = 0.0;
  double bv = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j].size() != n || v[j].size() != n) {
      throw std::invalid_argument("deviation_tail_empirical: vectors must share one length");
    }
    bu = std::max(bu, u[j].norm());
    bv = std::max(bv, v[j].norm());
  }
  const auto views = static_cast<Index>(u.size());

  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(measurements));
  Eigen::VectorXd row(n);
  TailEstimate out;
  out.trials = trials;
  for (Index t = 0; t < trials; ++t) {
    double deviation = 0.0;
    for (Index j = 0; j < views; ++j) {
      const auto& uj = u[static_cast<std::size_t>(j)];
      const auto& vj = v[static_cast<std::size_t>(j)];
      double product = 0.0;
      for (Index m = 0; m < measurements; ++m) {
        for (Index c = 0; c < n; ++c) row(c) = scale * normal(rng);
        product += row.dot(uj) * row.dot(vj);
      }
      deviation += product - uj.dot(vj);
    }
    if (std::abs(deviation) / static_cast<double>(views) >= tau) ++out.exceedances;
  }
  out.frequency = static_cast<double>(out.exceedances) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.frequency * (1.0 - out.frequency) / static_cast<double>(trials));
  out.bound = deviation_tail_bound(tau, views, measurements, bu, bv);
  return out;
}

}  // namespace jointcs
