// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace jointcs {
namespace {

constexpr double kRankThreshold = 1e-10;

using ViewMaps = std::vector<const AtomTransform*>;

void gather(const ProjectedMeasurements& projected, const ViewMaps& maps, Index view_limit,
            CorrelationVector& out) {
  const Index k = projected.atoms();
  out.values.setZero(k);
  out.valid.assign(static_cast<std::size_t>(k), 1);
  for (Index j = 0; j < view_limit; ++j) {
    const auto map = maps[static_cast<std::size_t>(j)]->index_map();
    const Eigen::VectorXd& c = projected.view(j);
    for (Index i = 0; i < k; ++i) {
      const Index target = map[static_cast<std::size_t>(i)];
      if (target == AtomTransform::kOutside) {
        out.valid[static_cast<std::size_t>(i)] = 0;
      } else {
        out.values(i) += c(target);
      }
    }
  }
}

// Ranks by key descending, then by index ascending.
Support top_by_key(const Eigen::VectorXd& key, const std::vector<std::uint8_t>* valid, Index s) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(key.size()));
  for (Index i = 0; i < key.size(); ++i) {
    if (!valid || (*valid)[static_cast<std::size_t>(i)]) idx.push_back(i);
  }
  if (static_cast<Index>(idx.size()) < s) {
    throw std::invalid_argument("select_top_s: fewer valid entries than the sparsity");
  }
  auto better = [&key](Index a, Index b) {
    if (key(a) != key(b)) return key(a) > key(b);
    return a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + (s - 1), idx.end(), better);
  Support out(idx.begin(), idx.begin() + s);
  std::sort(out.begin(), out.end());
  return out;
}

void check_sparsity(Index s, const Dictionary& dict) {
  if (s < 1 || s > dict.size()) throw std::invalid_argument("decode: sparsity out of range");
}

void check_measurements(const MeasurementSet& m, const Dictionary& dict) {
  if (m.views() < 1) throw std::invalid_argument("decode: no views");
  if (m.cols() != dict.signal_length()) {
    throw std::invalid_argument("decode: sensing matrices do not match the signal length");
  }
  for (Index j = 0; j < m.views(); ++j) {
    const auto& a = m.matrices[static_cast<std::size_t>(j)];
    if (a.rows() != m.rows() || a.cols() != m.cols() ||
        m.measurements[static_cast<std::size_t>(j)].size() != a.rows()) {
      throw std::invalid_argument("decode: inconsistent measurement dimensions");
    }
  }
}

void reconstruct(const MeasurementSet& m, const Dictionary& dict, DecodeResult& r) {
  r.supports = r.transforms.apply(r.reference_support);
  const auto views = static_cast<std::size_t>(m.views());
  r.coefficients.resize(views);
  r.reconstructions.resize(views);
  r.rank_deficient.resize(views);
  for (std::size_t j = 0; j < views; ++j) {
    auto fit = least_squares_reconstruct(m.matrices[j], dict, r.supports[j], m.measurements[j]);
    r.coefficients[j] = std::move(fit.coefficients);
    r.reconstructions[j] = std::move(fit.reconstruction);
    r.rank_deficient[j] = fit.rank_deficient;
  }
}

}  // namespace

Index CorrelationVector::unmasked() const {
  return static_cast<Index>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

ProjectedMeasurements::ProjectedMeasurements(const MeasurementSet& m, const Dictionary& dict) {
  check_measurements(m, dict);
  per_view_.reserve(static_cast<std::size_t>(m.views()));
  for (Index j = 0; j < m.views(); ++j) {
    const auto& a = m.matrices[static_cast<std::size_t>(j)];
    const auto& s = m.measurements[static_cast<std::size_t>(j)];
    if (a.identity) {
      per_view_.push_back(dict.atoms().transpose() * s);
    } else {
      const Eigen::VectorXd back = a.entries.transpose() * s;
      per_view_.push_back(dict.atoms().transpose() * back);
    }
  }
}

CorrelationVector correlation_vector(const ProjectedMeasurements& projected, const TransformVector& t,
                                     Index view_limit) {
  if (view_limit < 1 || view_limit > projected.views() || view_limit > t.views()) {
    throw std::invalid_argument("correlation_vector: view limit out of range");
  }
  ViewMaps maps;
  for (Index j = 0; j < view_limit; ++j) {
    if (t[j].atom_count() != projected.atoms()) {
      throw std::invalid_argument("correlation_vector: transform realized over a different dictionary");
    }
    maps.push_back(&t[j]);
  }
  CorrelationVector d;
  gather(projected, maps, view_limit, d);
  return d;
}

CorrelationVector correlation_vector(const MeasurementSet& measurements, const Dictionary& dict,
                                     const TransformVector& t, Index view_limit) {
  return correlation_vector(ProjectedMeasurements(measurements, dict), t, view_limit);
}

Selection select_top_s(const CorrelationVector& d, Index s) {
  if (s < 1) throw std::invalid_argument("select_top_s: sparsity must be >= 1");
  Selection sel;
  sel.support = top_by_key(d.values, &d.valid, s);
  for (Index i : sel.support) sel.score += d.values(i);
  return sel;
}

LeastSquaresFit least_squares_reconstruct(const SensingMatrix& a, const Dictionary& dict,
                                          const Support& support, const Eigen::VectorXd& s) {
  if (s.size() != a.rows() || a.cols() != dict.signal_length()) {
    throw std::invalid_argument("least_squares_reconstruct: dimension mismatch");
  }
  LeastSquaresFit fit;
  const auto width = static_cast<Index>(support.size());
  Eigen::MatrixXd sub(dict.signal_length(), width);
  for (Index k = 0; k < width; ++k) {
    const Index atom = support[static_cast<std::size_t>(k)];
    if (atom < 0 || atom >= dict.size()) throw std::out_of_range("least_squares_reconstruct: bad atom");
    sub.col(k) = dict.atom(atom);
  }
  if (width == 0) {
    fit.coefficients.resize(0);
    fit.reconstruction = Eigen::VectorXd::Zero(dict.signal_length());
    return fit;
  }
  const Eigen::MatrixXd system = a.identity ? sub : Eigen::MatrixXd(a.entries * sub);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(kRankThreshold);
  cod.compute(system);
  fit.coefficients = cod.solve(s);
  fit.rank = cod.rank();
  fit.rank_deficient = fit.rank < width;
  fit.reconstruction = sub * fit.coefficients;
  return fit;
}

bool DecodeResult::any_rank_deficient() const {
  return std::any_of(rank_deficient.begin(), rank_deficient.end(), [](bool b) { return b; });
}

DecodeResult jt_decode(const MeasurementSet& measurements, const Dictionary& dict, Index s,
                       const CandidateSet& candidates) {
  check_sparsity(s, dict);
  if (candidates.views() != measurements.views()) {
    throw std::invalid_argument("jt_decode: candidate set and measurements disagree on the view count");
  }
  const auto total = candidates.count();
  if (total == std::numeric_limits<std::uint64_t>::max()) {
    throw std::invalid_argument("jt_decode: candidate set too large for exhaustive search");
  }
  const ProjectedMeasurements projected(measurements, dict);
  const Index views = candidates.views();

  // odometer over per-view choices, last view fastest
  std::vector<Index> choice(static_cast<std::size_t>(views), 0);
  ViewMaps maps(static_cast<std::size_t>(views), candidates.identity().get());
  for (Index v = 1; v < views; ++v) maps[static_cast<std::size_t>(v)] = candidates.candidates(v)[0].get();

  DecodeResult best;
  best.score = -std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<Index> best_choice;
  CorrelationVector d;
  for (std::uint64_t ordinal = 0; ordinal < total; ++ordinal) {
    gather(projected, maps, views, d);
    if (d.unmasked() >= s) {
      Selection sel = select_top_s(d, s);
      if (!found || sel.score > best.score) {
        found = true;
        best.score = sel.score;
        best.reference_support = std::move(sel.support);
        best_choice = choice;
      }
    }
    ++best.evaluated;
    for (Index v = views - 1; v >= 1; --v) {
      const auto& list = candidates.candidates(v);
      auto& c = choice[static_cast<std::size_t>(v)];
      if (++c < static_cast<Index>(list.size())) {
        maps[static_cast<std::size_t>(v)] = list[static_cast<std::size_t>(c)].get();
        break;
      }
      c = 0;
      maps[static_cast<std::size_t>(v)] = list[0].get();
    }
  }
  if (!found) throw std::invalid_argument("jt_decode: every candidate masks too many atoms");
  best.transforms = candidates.vector_from_choice(best_choice);
  reconstruct(measurements, dict, best);
  return best;
}

DecodeResult gjt_decode(const MeasurementSet& measurements, const Dictionary& dict, Index s,
                        const CandidateSet& candidates) {
  check_sparsity(s, dict);
  if (candidates.views() != measurements.views()) {
    throw std::invalid_argument("gjt_decode: candidate set and measurements disagree on the view count");
  }
  const ProjectedMeasurements projected(measurements, dict);
  const Index views = candidates.views();

  DecodeResult r;
  std::vector<Index> choice{0};
  ViewMaps maps{candidates.identity().get()};
  CorrelationVector d;

  if (views == 1) {
    gather(projected, maps, 1, d);
    Selection sel = select_top_s(d, s);
    r.reference_support = std::move(sel.support);
    r.score = sel.score;
    r.evaluated = 1;
  }
  for (Index v = 1; v < views; ++v) {
    const auto& list = candidates.candidates(v);
    maps.push_back(nullptr);
    bool found = false;
    double best_score = -std::numeric_limits<double>::infinity();
    Index best_candidate = 0;
    Support best_support;
    for (std::size_t c = 0; c < list.size(); ++c) {
      maps.back() = list[c].get();
      gather(projected, maps, v + 1, d);
      ++r.evaluated;
      if (d.unmasked() < s) continue;
      Selection sel = select_top_s(d, s);
      if (!found || sel.score > best_score) {
        found = true;
        best_score = sel.score;
        best_candidate = static_cast<Index>(c);
        best_support = std::move(sel.support);
      }
    }
    if (!found) throw std::invalid_argument("gjt_decode: every candidate masks too many atoms");
    maps.back() = list[static_cast<std::size_t>(best_candidate)].get();
    choice.push_back(best_candidate);
    r.reference_support = std::move(best_support);
    r.score = best_score;
  }
  r.transforms = candidates.vector_from_choice(choice);
  reconstruct(measurements, dict, r);
  return r;
}

ViewEstimate threshold_view(const SensingMatrix& a, const Eigen::VectorXd& s, const Dictionary& dict,
                            Index sparsity) {
  check_sparsity(sparsity, dict);
  if (a.cols() != dict.signal_length() || s.size() != a.rows()) {
    throw std::invalid_argument("threshold_view: dimension mismatch");
  }
  const Eigen::VectorXd c = a.identity ? Eigen::VectorXd(dict.atoms().transpose() * s)
                                       : Eigen::VectorXd(dict.atoms().transpose() * (a.entries.transpose() * s));
  ViewEstimate out;
  const Eigen::VectorXd mags = c.cwiseAbs();
  out.support = top_by_key(mags, nullptr, sparsity);
  for (Index i : out.support) out.score += mags(i);
  out.fit = least_squares_reconstruct(a, dict, out.support, s);
  return out;
}

DecodeResult independent_threshold_decode(const MeasurementSet& measurements, const Dictionary& dict,
                                          Index s) {
  check_measurements(measurements, dict);
  DecodeResult r;
  for (Index j = 0; j < measurements.views(); ++j) {
    const auto& a = measurements.matrices[static_cast<std::size_t>(j)];
    const auto& sj = measurements.measurements[static_cast<std::size_t>(j)];
    auto est = threshold_view(a, sj, dict, s);
    r.score += est.score;
    r.supports.push_back(std::move(est.support));
    r.coefficients.push_back(std::move(est.fit.coefficients));
    r.reconstructions.push_back(std::move(est.fit.reconstruction));
    r.rank_deficient.push_back(est.fit.rank_deficient);
  }
  r.reference_support = r.supports.front();
  r.evaluated = static_cast<std::uint64_t>(measurements.views());
  return r;
}

double noiseless_score(const std::vector<Eigen::VectorXd>& signals, const Dictionary& dict,
                       const Support& reference, const TransformVector& t) {
  if (static_cast<Index>(signals.size()) != t.views()) {
    throw std::invalid_argument("noiseless_score: one transform per signal required");
  }
  double total = 0.0;
  for (Index j = 0; j < t.views(); ++j) {
    const auto& y = signals[static_cast<std::size_t>(j)];
    for (Index atom : apply_to_support(t[j], reference)) total += y.dot(dict.atom(atom));
  }
  return total;
}

double compressed_score(const MeasurementSet& measurements, const Dictionary& dict,
                        const Support& reference, const TransformVector& t) {
  if (measurements.views() != t.views()) {
    throw std::invalid_argument("compressed_score: one transform per view required");
  }
  double total = 0.0;
  for (Index j = 0; j < t.views(); ++j) {
    const auto& a = measurements.matrices[static_cast<std::size_t>(j)];
    const auto& sj = measurements.measurements[static_cast<std::size_t>(j)];
    for (Index atom : apply_to_support(t[j], reference)) {
      total += sj.dot(measure(a, dict.atom(atom)));
    }
  }
  return total;
}

}  // namespace jointcs
