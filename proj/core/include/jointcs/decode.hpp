// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "jointcs/correlation.hpp"
#include "jointcs/dictionary.hpp"
#include "jointcs/sensing.hpp"

namespace jointcs {

/// d_T for one candidate vector: d_T[i] = sum_j s_j . A_j T_j(phi_i).
/// Atoms outside the domain of any summed view are masked out.
struct CorrelationVector {
  Eigen::VectorXd values;
  std::vector<std::uint8_t> valid;

  Index size() const { return values.size(); }
  Index unmasked() const;
};

/// Per-view back-projections c_j = (A_j Phi)^T s_j. Computed once per
/// measurement set; every candidate's d_T is then a gather over these.
class ProjectedMeasurements {
 public:
  ProjectedMeasurements(const MeasurementSet& measurements, const Dictionary& dict);

  Index views() const { return static_cast<Index>(per_view_.size()); }
  Index atoms() const { return per_view_.empty() ? 0 : per_view_.front().size(); }
  const Eigen::VectorXd& view(Index j) const { return per_view_[static_cast<std::size_t>(j)]; }

 private:
  std::vector<Eigen::VectorXd> per_view_;
};

/// Sums views [0, view_limit). view_limit must not exceed either the number of
/// measured views or the number of transforms in `t`.
CorrelationVector correlation_vector(const ProjectedMeasurements& projected, const TransformVector& t,
                                     Index view_limit);
CorrelationVector correlation_vector(const MeasurementSet& measurements, const Dictionary& dict,
                                     const TransformVector& t, Index view_limit);

struct Selection {
  Support support;  // ascending
  double score = 0.0;
};

/// The `s` algebraically largest unmasked entries (ties: lower index first) and
/// their sum. Throws std::invalid_argument if fewer than `s` entries are valid.
Selection select_top_s(const CorrelationVector& d, Index s);

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd reconstruction;
  Index rank = 0;
  bool rank_deficient = false;
};

/// Minimum-norm solution of (A Phi_support) x = s via a complete orthogonal
/// decomposition (relative rank threshold 1e-10), and Phi_support x.
LeastSquaresFit least_squares_reconstruct(const SensingMatrix& a, const Dictionary& dict,
                                          const Support& support, const Eigen::VectorXd& s);

struct DecodeResult {
  Support reference_support;
  TransformVector transforms;
  std::vector<Support> supports;
  std::vector<Eigen::VectorXd> coefficients;
  std::vector<Eigen::VectorXd> reconstructions;
  std::vector<bool> rank_deficient;
  double score = 0.0;
  /// Candidate vectors whose score was evaluated.
  std::uint64_t evaluated = 0;

  bool any_rank_deficient() const;
};

/// Exhaustive joint thresholding: the candidate vector (first in enumeration
/// order on ties) maximizing the top-S score, then per-view least squares.
/// Throws std::invalid_argument when no candidate leaves S valid atoms.
DecodeResult jt_decode(const MeasurementSet& measurements, const Dictionary& dict, Index s,
                       const CandidateSet& candidates);

/// Greedy variant: fixes one view's transform at a time using the partial sum
/// over the views fixed so far.
DecodeResult gjt_decode(const MeasurementSet& measurements, const Dictionary& dict, Index s,
                        const CandidateSet& candidates);

struct ViewEstimate {
  Support support;  // ascending
  double score = 0.0;  // sum of the selected |correlations|
  LeastSquaresFit fit;
};

/// Plain thresholding of one view: top `s` atoms by |<s, A phi_i>|.
ViewEstimate threshold_view(const SensingMatrix& a, const Eigen::VectorXd& s, const Dictionary& dict,
                            Index sparsity);

/// Independent thresholding of every view. `transforms` is left empty and
/// `score` is the sum of the selected absolute correlations.
DecodeResult independent_threshold_decode(const MeasurementSet& measurements, const Dictionary& dict,
                                          Index s);

/// sum_j sum_{phi in T_j(reference)} y_j . phi. Throws OutOfDomainError.
double noiseless_score(const std::vector<Eigen::VectorXd>& signals, const Dictionary& dict,
                       const Support& reference, const TransformVector& t);

/// sum_j sum_{phi in T_j(reference)} s_j . A_j phi. Throws OutOfDomainError.
double compressed_score(const MeasurementSet& measurements, const Dictionary& dict,
                        const Support& reference, const TransformVector& t);

}  // namespace jointcs
