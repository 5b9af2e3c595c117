// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jointcs/correlation.hpp"
#include "jointcs/dictionary.hpp"

namespace jointcs {

enum class CoefficientRule {
  kShared,       // x_j = x_1 for every view
  kIndependent,  // fresh magnitudes per view
};

struct EnsembleOptions {
  Index sparsity = 1;
  CoefficientRule rule = CoefficientRule::kShared;
  double magnitude_min = 0.5;
  double magnitude_max = 1.5;
  Index max_attempts = 10000;
  /// When set, every view must have a positive thresholding margin and
  /// nonnegative support correlations. When cleared, the sample is accepted
  /// as drawn (after sign repair) and the margin is only recorded.
  bool enforce_conditions = true;
  std::uint64_t seed = 0;
};

/// Correlated sparse signals y_j = Phi_{supports[j]} coefficients[j] where
/// supports[j] = transforms[j](reference_support).
struct SignalEnsemble {
  Support reference_support;  // ascending
  TransformVector transforms;
  std::vector<Support> supports;
  std::vector<Eigen::VectorXd> coefficients;
  std::vector<Eigen::VectorXd> signals;
  std::vector<double> margins;  // per view
  double eta = 0.0;             // min of margins
  double min_energy = 0.0;      // min_j ||y_j||
  double max_energy = 0.0;      // max_j ||y_j||
  Index attempts = 0;
  std::uint64_t seed = 0;

  Index views() const { return static_cast<Index>(signals.size()); }
  Index sparsity() const { return static_cast<Index>(reference_support.size()); }
};

class EnsembleGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// min over the support of |<y/||y||, phi>| minus max over the complement.
/// Positive iff plain thresholding on y recovers the support.
/// Throws std::invalid_argument for a zero signal or an empty complement.
double thresholding_margin(const Eigen::VectorXd& y, const Support& support, const Dictionary& dict);

/// True iff y . phi >= 0 for every atom in the support.
bool check_positivity(const Eigen::VectorXd& y, const Support& support, const Dictionary& dict);

/// Rejection-samples a reference support and coefficients whose images under
/// `truth` stay in the dictionary, optionally requiring the thresholding and
/// positivity conditions on every view. Atoms with a negative correlation are
/// swapped for their negated twin (coefficient negated) when the dictionary
/// has one. Throws EnsembleGenerationError after max_attempts rejections.
SignalEnsemble generate_ensemble(const Dictionary& dict, const TransformVector& truth,
                                 const EnsembleOptions& options);

/// Lower bound on the margin from the Babel function:
/// sqrt(min_j (|x_min,j| / ||x_j||_inf - mu1(S-1) - mu1(S))^2 / (S (1 + mu1(S-1)))),
/// or 0 when the bracket is not positive for some view.
double margin_lower_bound(const std::vector<Eigen::VectorXd>& coefficients, Index sparsity,
                          double mu1_s_minus_1, double mu1_s);

/// Wraps externally supplied signals (no known supports) into an ensemble
/// shell so they can be measured and decoded.
SignalEnsemble external_ensemble(std::vector<Eigen::VectorXd> signals);

std::string ensemble_to_json(const SignalEnsemble& ensemble);
/// Transforms are re-realized over `dict`.
SignalEnsemble ensemble_from_json(std::string_view text, const Dictionary& dict);

/// Single-column CSV, one sample per row. Blank lines and '#' comments skipped.
Eigen::VectorXd read_signal_csv(const std::filesystem::path& path);

}  // namespace jointcs
