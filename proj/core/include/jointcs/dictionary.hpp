// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

namespace jointcs {

using Index = Eigen::Index;

/// Parameters of a rotated, anisotropically scaled and translated 2D Gaussian.
/// Translations are integer pixel positions on the image grid.
struct Atom2DParams {
  double theta = 0.0;  // radians, in [0, pi]
  double sx = 1.0;
  double sy = 1.0;
  int tx = 0;
  int ty = 0;

  friend bool operator==(const Atom2DParams&, const Atom2DParams&) = default;
};

/// Parameters of a sinusoid-modulated 1D Gaussian, optionally negated.
/// t is the 1-based sample index of the envelope center.
struct Atom1DParams {
  int t = 1;
  double s = 1.0;
  double omega = 0.0;
  int sign = 1;

  friend bool operator==(const Atom1DParams&, const Atom1DParams&) = default;
};

using AtomParams = std::variant<std::monostate, Atom2DParams, Atom1DParams>;

enum class DictionaryVariant { kGaussian2D, kGabor1D, kCustom };

const char* to_string(DictionaryVariant variant);

/// Parameter grid for a 2D Gaussian dictionary sampled on a width x height image.
struct Gaussian2DGrid {
  int width = 0;
  int height = 0;
  std::vector<double> thetas;
  std::vector<double> sxs;
  std::vector<double> sys;
  std::vector<std::pair<int, int>> translations;
};

/// Parameter grid for a 1D modulated-Gaussian dictionary on samples 1..length.
struct Gabor1DGrid {
  int length = 0;
  int t_start = 1;
  int t_step = 1;
  std::vector<double> scales;
  std::vector<double> omegas;
  bool include_negated = true;
};

/// A redundant dictionary: K unit-norm atoms of length N stored as the columns
/// of an N x K matrix, together with the parameter record of every atom.
///
/// Immutable after construction; safe to share between threads.
class Dictionary {
 public:
  Dictionary(Eigen::MatrixXd atoms, std::vector<AtomParams> params,
             DictionaryVariant variant, int width, int height);

  /// Wraps an arbitrary matrix whose columns must already have unit norm.
  static Dictionary from_matrix(Eigen::MatrixXd atoms);

  Index size() const { return atoms_.cols(); }
  Index signal_length() const { return atoms_.rows(); }
  DictionaryVariant variant() const { return variant_; }

  /// Image width (2D) or signal length (1D, custom).
  int width() const { return width_; }
  int height() const { return height_; }

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  auto atom(Index k) const { return atoms_.col(k); }
  const AtomParams& params(Index k) const { return params_.at(static_cast<std::size_t>(k)); }

  std::optional<Index> find(const Atom2DParams& p) const;
  std::optional<Index> find(const Atom1DParams& p) const;

  /// Index of the atom equal to -atom(k) in parameter space, if present.
  std::optional<Index> negation_of(Index k) const;

 private:
  using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
  static Key key_of(const Atom2DParams& p);
  static Key key_of(const Atom1DParams& p);

  Eigen::MatrixXd atoms_;
  std::vector<AtomParams> params_;
  DictionaryVariant variant_;
  int width_;
  int height_;
  std::map<Key, Index> lookup_;
};

/// Samples g(X, Y) = exp(-X^2 - Y^2) for every (translation, theta, sx, sy)
/// tuple, in that nesting order, on the integer pixel grid; normalizes each
/// atom and drops atoms that duplicate an earlier one (theta and theta + pi
/// give the same atom).
///
/// Throws std::invalid_argument on an empty grid, a non-positive scale, or a
/// translation outside the image.
Dictionary build_gaussian_2d_dictionary(const Gaussian2DGrid& grid);

/// Samples exp(-(x - t)^2 / s^2) cos(omega (x - t) / s) for x = 1..length over
/// the (t, s, omega) grid; with include_negated, -g follows each g.
Dictionary build_gabor_1d_dictionary(const Gabor1DGrid& grid);

/// theta = k pi / 6 (k = 0..6), sx in {2, 4}, sy in {1/2, 1}, translations on
/// odd pixel coordinates. On a 32 x 32 image this yields 6144 atoms.
Gaussian2DGrid image_preset_grid(int width = 32, int height = 32);

/// t = 1, 11, 21, ... <= length; s in {4, 8, 16}; omega in {2, 4, ..., 10};
/// both signs. For length 1000 this yields 3000 atoms.
Gabor1DGrid trace_preset_grid(int length = 1000);

/// Inner products of atom `k` with every atom.
Eigen::VectorXd gram_row(const Dictionary& dict, Index k);

/// Cumulative coherence mu1(m): the largest total absolute inner product
/// between one atom and any m other atoms. Requires 0 <= m < K.
double babel_function(const Dictionary& dict, Index m);

/// Babel function for every m in [0, max_m], computed in one pass.
std::vector<double> babel_curve(const Dictionary& dict, Index max_m);

/// Text matrix format: a header block with K, N, variant and grid size,
/// then one CSV row per atom holding its parameters followed by N samples.
void save_dictionary(const Dictionary& dict, const std::filesystem::path& path);
Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace jointcs
