// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "jointcs/rng.hpp"
#include "json_io.hpp"
#include "text_io.hpp"

namespace jointcs {
namespace {

Eigen::VectorXd synthesize(const Dictionary& dict, const Support& support, const Eigen::VectorXd& x) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dict.signal_length());
  for (std::size_t k = 0; k < support.size(); ++k) {
    y.noalias() += x(static_cast<Index>(k)) * dict.atom(support[k]);
  }
  return y;
}

// Margin from precomputed correlations c = Phi^T y (unnormalized).
double margin_from_correlations(const Eigen::VectorXd& c, double norm, const Support& support) {
  std::vector<bool> in_support(static_cast<std::size_t>(c.size()), false);
  for (Index i : support) in_support[static_cast<std::size_t>(i)] = true;
  double inside = std::numeric_limits<double>::infinity();
  double outside = 0.0;
  bool complement_empty = true;
  for (Index i = 0; i < c.size(); ++i) {
    const double v = std::abs(c(i)) / norm;
    if (in_support[static_cast<std::size_t>(i)]) {
      inside = std::min(inside, v);
    } else {
      outside = std::max(outside, v);
      complement_empty = false;
    }
  }
  if (complement_empty) throw std::invalid_argument("thresholding_margin: support covers the dictionary");
  return inside - outside;
}

constexpr Index kScanBlock = 256;

// Margin of y against `support`, with the complement scanned in column blocks:
// blocks holding support atoms first (coherent neighbours live there), then the
// rest. With stop_early, returns nullopt once an off-support correlation reaches
// the weakest on-support one, or when a support correlation is negative.
std::optional<double> screened_margin(const Dictionary& dict, const Eigen::VectorXd& y, double norm,
                                      const Support& support, bool stop_early) {
  const Index k_total = dict.size();
  double inside = std::numeric_limits<double>::infinity();
  for (Index atom : support) {
    const double c = y.dot(dict.atom(atom));
    if (stop_early && c < 0.0) return std::nullopt;
    inside = std::min(inside, std::abs(c) / norm);
  }
  const Index blocks = (k_total + kScanBlock - 1) / kScanBlock;
  std::vector<Index> order;
  order.reserve(static_cast<std::size_t>(blocks));
  std::vector<bool> queued(static_cast<std::size_t>(blocks), false);
  for (Index atom : support) {
    const Index b = atom / kScanBlock;
    if (!queued[static_cast<std::size_t>(b)]) {
      queued[static_cast<std::size_t>(b)] = true;
      order.push_back(b);
    }
  }
  for (Index b = 0; b < blocks; ++b) {
    if (!queued[static_cast<std::size_t>(b)]) order.push_back(b);
  }

  Eigen::VectorXd c(kScanBlock);
  double outside = 0.0;
  for (Index b : order) {
    const Index first = b * kScanBlock;
    const Index width = std::min(kScanBlock, k_total - first);
    c.head(width).noalias() = dict.atoms().middleCols(first, width).transpose() * y;
    for (Index i = 0; i < width; ++i) {
      if (std::find(support.begin(), support.end(), first + i) != support.end()) continue;
      outside = std::max(outside, std::abs(c(i)) / norm);
    }
    if (stop_early && outside >= inside) return std::nullopt;
  }
  return inside - outside;
}

void sort_by_reference(Support& reference, std::vector<Eigen::VectorXd>& coeffs) {
  std::vector<std::size_t> order(reference.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return reference[a] < reference[b]; });
  Support sorted(reference.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = reference[order[k]];
  reference = std::move(sorted);
  for (auto& x : coeffs) {
    Eigen::VectorXd permuted(x.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      permuted(static_cast<Index>(k)) = x(static_cast<Index>(order[k]));
    }
    x = std::move(permuted);
  }
}

void finalize_energies(SignalEnsemble& e) {
  e.min_energy = std::numeric_limits<double>::infinity();
  e.max_energy = 0.0;
  for (const auto& y : e.signals) {
    const double n = y.norm();
    e.min_energy = std::min(e.min_energy, n);
    e.max_energy = std::max(e.max_energy, n);
  }
  e.eta = e.margins.empty() ? std::nan("")
                            : *std::min_element(e.margins.begin(), e.margins.end());
}

}  // namespace

double thresholding_margin(const Eigen::VectorXd& y, const Support& support, const Dictionary& dict) {
  if (support.empty()) throw std::invalid_argument("thresholding_margin: empty support");
  for (Index i : support) {
    if (i < 0 || i >= dict.size()) throw std::out_of_range("thresholding_margin: atom index out of range");
  }
  const double norm = y.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("thresholding_margin: zero signal");
  const Eigen::VectorXd c = dict.atoms().transpose() * y;
  return margin_from_correlations(c, norm, support);
}

bool check_positivity(const Eigen::VectorXd& y, const Support& support, const Dictionary& dict) {
  for (Index i : support) {
    if (y.dot(dict.atom(i)) < 0.0) return false;
  }
  return true;
}

SignalEnsemble generate_ensemble(const Dictionary& dict, const TransformVector& truth,
                                 const EnsembleOptions& options) {
  const Index s = options.sparsity;
  const Index views = truth.views();
  if (s < 1) throw std::invalid_argument("generate_ensemble: sparsity must be >= 1");
  if (s >= dict.size()) {
    throw std::invalid_argument("generate_ensemble: sparsity must leave a nonempty complement");
  }
  if (!(options.magnitude_min > 0.0) || options.magnitude_max < options.magnitude_min) {
    throw std::invalid_argument("generate_ensemble: invalid coefficient magnitude range");
  }
  if (truth[0].atom_count() != dict.size()) {
    throw std::invalid_argument("generate_ensemble: transforms realized over a different dictionary");
  }

  std::vector<Index> eligible;
  for (Index i = 0; i < dict.size(); ++i) {
    if (truth.covers({i})) eligible.push_back(i);
  }
  if (static_cast<Index>(eligible.size()) < s) {
    throw EnsembleGenerationError("generate_ensemble: fewer eligible atoms than the sparsity");
  }

  auto rng = make_rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
  std::uniform_real_distribution<double> magnitude(options.magnitude_min, options.magnitude_max);
  std::vector<bool> taken(static_cast<std::size_t>(dict.size()), false);

  for (Index attempt = 1; attempt <= options.max_attempts; ++attempt) {
    Support reference;
    reference.reserve(static_cast<std::size_t>(s));
    Index draws = 0;
    while (static_cast<Index>(reference.size()) < s && draws < 100 * dict.size()) {
      ++draws;
      const Index atom = eligible[pick(rng)];
      if (taken[static_cast<std::size_t>(atom)]) continue;
      const auto twin = dict.negation_of(atom);
      if (twin && taken[static_cast<std::size_t>(*twin)]) continue;
      taken[static_cast<std::size_t>(atom)] = true;
      reference.push_back(atom);
    }
    for (Index atom : reference) taken[static_cast<std::size_t>(atom)] = false;
    if (static_cast<Index>(reference.size()) < s) {
      throw EnsembleGenerationError("generate_ensemble: could not draw distinct support atoms");
    }

    std::vector<Eigen::VectorXd> coeffs(static_cast<std::size_t>(views));
    coeffs[0].resize(s);
    for (Index k = 0; k < s; ++k) coeffs[0](k) = magnitude(rng);
    for (Index j = 1; j < views; ++j) {
      if (options.rule == CoefficientRule::kShared) {
        coeffs[static_cast<std::size_t>(j)] = coeffs[0];
      } else {
        coeffs[static_cast<std::size_t>(j)].resize(s);
        for (Index k = 0; k < s; ++k) coeffs[static_cast<std::size_t>(j)](k) = magnitude(rng);
      }
    }

    // Sign repair on the reference view: phi -> -phi, x -> -x leaves y unchanged.
    {
      const Eigen::VectorXd y0 = synthesize(dict, reference, coeffs[0]);
      for (Index k = 0; k < s; ++k) {
        const Index atom = reference[static_cast<std::size_t>(k)];
        if (y0.dot(dict.atom(atom)) >= 0.0) continue;
        const auto twin = dict.negation_of(atom);
        if (!twin || !truth.covers({*twin})) continue;
        if (std::find(reference.begin(), reference.end(), *twin) != reference.end()) continue;
        reference[static_cast<std::size_t>(k)] = *twin;
        for (auto& x : coeffs) x(k) = -x(k);
      }
    }
    sort_by_reference(reference, coeffs);

    SignalEnsemble e;
    e.reference_support = reference;
    e.transforms = truth;
    e.supports = truth.apply(reference);
    e.coefficients = std::move(coeffs);
    e.signals.reserve(static_cast<std::size_t>(views));
    for (Index j = 0; j < views; ++j) {
      e.signals.push_back(synthesize(dict, e.supports[static_cast<std::size_t>(j)],
                                     e.coefficients[static_cast<std::size_t>(j)]));
    }

    bool accepted = true;
    for (Index j = 0; j < views && accepted; ++j) {
      const auto& y = e.signals[static_cast<std::size_t>(j)];
      const auto& support = e.supports[static_cast<std::size_t>(j)];
      const double norm = y.norm();
      if (!(norm > 0.0)) {
        accepted = false;
        break;
      }
      const auto margin = screened_margin(dict, y, norm, support, options.enforce_conditions);
      if (!margin) {
        accepted = false;
        break;
      }
      e.margins.push_back(*margin);
      if (options.enforce_conditions) accepted = *margin > 0.0;
    }
    if (!accepted) continue;

    e.attempts = attempt;
    e.seed = options.seed;
    finalize_energies(e);
    return e;
  }
  throw EnsembleGenerationError("generate_ensemble: no admissible ensemble after " +
                                std::to_string(options.max_attempts) + " attempts");
}

double margin_lower_bound(const std::vector<Eigen::VectorXd>& coefficients, Index sparsity,
                          double mu1_s_minus_1, double mu1_s) {
  if (coefficients.empty() || sparsity < 1) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : coefficients) {
    const Eigen::VectorXd mags = x.cwiseAbs();
    const double inf_norm = mags.maxCoeff();
    if (!(inf_norm > 0.0)) return 0.0;
    const double base = mags.minCoeff() / inf_norm - mu1_s_minus_1 - mu1_s;
    if (!(base > 0.0)) return 0.0;
    best = std::min(best, base * base / (static_cast<double>(sparsity) * (1.0 + mu1_s_minus_1)));
  }
  return std::sqrt(best);
}

SignalEnsemble external_ensemble(std::vector<Eigen::VectorXd> signals) {
  if (signals.empty()) throw std::invalid_argument("external_ensemble: no signals");
  for (const auto& y : signals) {
    if (y.size() != signals.front().size()) {
      throw std::invalid_argument("external_ensemble: signals must share one length");
    }
  }
  SignalEnsemble e;
  e.signals = std::move(signals);
  finalize_energies(e);
  return e;
}

std::string ensemble_to_json(const SignalEnsemble& e) {
  using detail::json;
  json j;
  j["seed"] = e.seed;
  j["attempts"] = e.attempts;
  j["eta"] = e.eta;
  j["min_energy"] = e.min_energy;
  j["max_energy"] = e.max_energy;
  j["margins"] = e.margins;
  j["reference_support"] = e.reference_support;
  json transforms = json::array();
  for (Index v = 0; v < e.transforms.views(); ++v) {
    transforms.push_back(detail::to_json(e.transforms[v].kind()));
  }
  j["transforms"] = transforms;
  if (e.transforms.views() > 0) {
    j["transform_choice"] = std::vector<Index>(e.transforms.choice().begin(), e.transforms.choice().end());
  }
  j["supports"] = e.supports;
  json coeffs = json::array();
  for (const auto& x : e.coefficients) coeffs.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  j["coefficients"] = coeffs;
  json signals = json::array();
  for (const auto& y : e.signals) signals.push_back(std::vector<double>(y.data(), y.data() + y.size()));
  j["signals"] = signals;
  return j.dump(2);
}

SignalEnsemble ensemble_from_json(std::string_view text, const Dictionary& dict) {
  using detail::json;
  const json j = json::parse(text);
  SignalEnsemble e;
  e.seed = j.at("seed").get<std::uint64_t>();
  e.attempts = j.at("attempts").get<Index>();
  e.margins = j.at("margins").get<std::vector<double>>();
  e.reference_support = j.at("reference_support").get<Support>();
  e.supports = j.at("supports").get<std::vector<Support>>();
  std::vector<TransformPtr> views;
  for (const auto& t : j.at("transforms")) {
    views.push_back(std::make_shared<const AtomTransform>(
        realize_transform(detail::transform_kind_from_json(t), dict)));
  }
  if (!views.empty()) {
    e.transforms = TransformVector(std::move(views), j.value("transform_choice", std::vector<Index>{}));
  }
  for (const auto& x : j.at("coefficients")) {
    const auto v = x.get<std::vector<double>>();
    e.coefficients.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size())));
  }
  for (const auto& y : j.at("signals")) {
    const auto v = y.get<std::vector<double>>();
    e.signals.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size())));
  }
  finalize_energies(e);
  return e;
}

Eigen::VectorXd read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_signal_csv: cannot open " + path.string());
  std::vector<double> samples;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view(line);
    while (!view.empty() && (view.back() == '\r' || view.back() == ' ')) view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    if (view.find(',') != std::string_view::npos) {
      throw std::invalid_argument("read_signal_csv: expected a single column in " + path.string());
    }
    samples.push_back(detail::parse_double(view));
  }
  if (samples.empty()) throw std::invalid_argument("read_signal_csv: no samples in " + path.string());
  return Eigen::Map<const Eigen::VectorXd>(samples.data(), static_cast<Index>(samples.size()));
}

}  // namespace jointcs
