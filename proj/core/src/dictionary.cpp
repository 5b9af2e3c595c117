// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "text_io.hpp"

namespace jointcs {
namespace {

constexpr double kUnitNormTolerance = 1e-9;
constexpr double kDuplicateTolerance = 1e-12;

std::int64_t quantize(double v) { return std::llround(v * 1e9); }

// Keeps the first occurrence of every atom; later atoms equal to a kept one
// within kDuplicateTolerance (max-abs) are dropped. Candidates are bucketed by
// a fixed random projection so only near-equal projections are compared.
class DuplicateFilter {
 public:
  explicit DuplicateFilter(Index length) : weights_(length) {
    // fixed low-discrepancy weights in [0, 1)
    for (Index i = 0; i < length; ++i) {
      const double w = std::fmod(static_cast<double>(i + 1) * std::numbers::sqrt2, 1.0);
      weights_(i) = w;
    }
    window_ = weights_.sum() * kDuplicateTolerance;
  }

  bool is_duplicate(const Eigen::VectorXd& atom, const Eigen::MatrixXd& kept,
                    Index kept_count) const {
    const double sig = weights_.dot(atom);
    auto lo = signatures_.lower_bound(sig - window_);
    auto hi = signatures_.upper_bound(sig + window_);
    for (auto it = lo; it != hi; ++it) {
      if (it->second >= kept_count) continue;
      if ((kept.col(it->second) - atom).cwiseAbs().maxCoeff() <= kDuplicateTolerance) {
        return true;
      }
    }
    return false;
  }

  void add(const Eigen::VectorXd& atom, Index column) {
    signatures_.emplace(weights_.dot(atom), column);
  }

 private:
  Eigen::VectorXd weights_;
  double window_ = 0.0;
  std::multimap<double, Index> signatures_;
};

}  // namespace

const char* to_string(DictionaryVariant variant) {
  switch (variant) {
    case DictionaryVariant::kGaussian2D: return "gaussian2d";
    case DictionaryVariant::kGabor1D: return "gabor1d";
    case DictionaryVariant::kCustom: return "custom";
  }
  return "unknown";
}

Dictionary::Dictionary(Eigen::MatrixXd atoms, std::vector<AtomParams> params,
                       DictionaryVariant variant, int width, int height)
    : atoms_(std::move(atoms)),
      params_(std::move(params)),
      variant_(variant),
      width_(width),
      height_(height) {
  if (atoms_.cols() == 0 || atoms_.rows() == 0) {
    throw std::invalid_argument("Dictionary: empty atom matrix");
  }
  if (static_cast<Index>(params_.size()) != atoms_.cols()) {
    throw std::invalid_argument("Dictionary: one parameter record per atom required");
  }
  for (Index k = 0; k < atoms_.cols(); ++k) {
    if (std::abs(atoms_.col(k).norm() - 1.0) > kUnitNormTolerance) {
      throw std::invalid_argument("Dictionary: atom " + std::to_string(k) + " is not unit norm");
    }
  }
  for (Index k = 0; k < atoms_.cols(); ++k) {
    const auto& p = params_[static_cast<std::size_t>(k)];
    if (const auto* p2 = std::get_if<Atom2DParams>(&p)) {
      lookup_.emplace(key_of(*p2), k);
    } else if (const auto* p1 = std::get_if<Atom1DParams>(&p)) {
      lookup_.emplace(key_of(*p1), k);
    }
  }
}

Dictionary Dictionary::from_matrix(Eigen::MatrixXd atoms) {
  const auto k = static_cast<std::size_t>(atoms.cols());
  const int n = static_cast<int>(atoms.rows());
  return Dictionary(std::move(atoms), std::vector<AtomParams>(k), DictionaryVariant::kCustom, n, 1);
}

Dictionary::Key Dictionary::key_of(const Atom2DParams& p) {
  // theta and theta + pi collide after duplicate removal only through the
  // atom values, so theta is keyed as given.
  return {quantize(p.theta), quantize(p.sx), quantize(p.sy), p.tx, p.ty};
}

Dictionary::Key Dictionary::key_of(const Atom1DParams& p) {
  return {p.t, quantize(p.s), quantize(p.omega), p.sign, -1};
}

std::optional<Index> Dictionary::find(const Atom2DParams& p) const {
  if (variant_ != DictionaryVariant::kGaussian2D) return std::nullopt;
  auto it = lookup_.find(key_of(p));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> Dictionary::find(const Atom1DParams& p) const {
  if (variant_ != DictionaryVariant::kGabor1D) return std::nullopt;
  auto it = lookup_.find(key_of(p));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> Dictionary::negation_of(Index k) const {
  if (const auto* p = std::get_if<Atom1DParams>(&params(k))) {
    Atom1DParams q = *p;
    q.sign = -q.sign;
    return find(q);
  }
  return std::nullopt;
}

Dictionary build_gaussian_2d_dictionary(const Gaussian2DGrid& grid) {
  if (grid.width <= 0 || grid.height <= 0) {
    throw std::invalid_argument("build_gaussian_2d_dictionary: empty image grid");
  }
  if (grid.thetas.empty() || grid.sxs.empty() || grid.sys.empty() || grid.translations.empty()) {
    throw std::invalid_argument("build_gaussian_2d_dictionary: empty parameter list");
  }
  for (double s : grid.sxs) {
    if (!(s > 0.0)) throw std::invalid_argument("build_gaussian_2d_dictionary: scale must be > 0");
  }
  for (double s : grid.sys) {
    if (!(s > 0.0)) throw std::invalid_argument("build_gaussian_2d_dictionary: scale must be > 0");
  }
  for (auto [tx, ty] : grid.translations) {
    if (tx < 0 || tx >= grid.width || ty < 0 || ty >= grid.height) {
      throw std::invalid_argument("build_gaussian_2d_dictionary: translation outside the image");
    }
  }

  const Index n = static_cast<Index>(grid.width) * grid.height;
  const Index upper = static_cast<Index>(grid.thetas.size() * grid.sxs.size() * grid.sys.size() *
                                         grid.translations.size());
  Eigen::MatrixXd atoms(n, upper);
  std::vector<AtomParams> params;
  params.reserve(static_cast<std::size_t>(upper));
  DuplicateFilter filter(n);

  Eigen::VectorXd atom(n);
  Index kept = 0;
  // Translation-major order keeps atoms sharing a center in adjacent columns.
  for (auto [tx, ty] : grid.translations) {
    for (double theta : grid.thetas) {
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      for (double sx : grid.sxs) {
        for (double sy : grid.sys) {
          for (int y = 0; y < grid.height; ++y) {
            for (int x = 0; x < grid.width; ++x) {
              const double dx = x - tx;
              const double dy = y - ty;
              const double u = (dx * c - dy * s) / sx;
              const double v = (dy * c + dx * s) / sy;
              atom(static_cast<Index>(y) * grid.width + x) = std::exp(-u * u - v * v);
            }
          }
          atom /= atom.norm();
          if (filter.is_duplicate(atom, atoms, kept)) continue;
          atoms.col(kept) = atom;
          filter.add(atom, kept);
          params.emplace_back(Atom2DParams{theta, sx, sy, tx, ty});
          ++kept;
        }
      }
    }
  }
  atoms.conservativeResize(Eigen::NoChange, kept);
  return Dictionary(std::move(atoms), std::move(params), DictionaryVariant::kGaussian2D,
                    grid.width, grid.height);
}

Dictionary build_gabor_1d_dictionary(const Gabor1DGrid& grid) {
  if (grid.length <= 0) throw std::invalid_argument("build_gabor_1d_dictionary: length must be > 0");
  if (grid.t_step < 1) throw std::invalid_argument("build_gabor_1d_dictionary: t_step must be >= 1");
  if (grid.scales.empty() || grid.omegas.empty()) {
    throw std::invalid_argument("build_gabor_1d_dictionary: empty parameter list");
  }
  for (double s : grid.scales) {
    if (!(s > 0.0)) throw std::invalid_argument("build_gabor_1d_dictionary: scale must be > 0");
  }
  std::vector<int> ts;
  for (int t = grid.t_start; t <= grid.length; t += grid.t_step) {
    if (t >= 1) ts.push_back(t);
  }
  if (ts.empty()) throw std::invalid_argument("build_gabor_1d_dictionary: empty translation grid");

  const Index n = grid.length;
  const int signs = grid.include_negated ? 2 : 1;
  const Index k = static_cast<Index>(ts.size() * grid.scales.size() * grid.omegas.size()) * signs;
  Eigen::MatrixXd atoms(n, k);
  std::vector<AtomParams> params;
  params.reserve(static_cast<std::size_t>(k));

  Index col = 0;
  for (int t : ts) {
    for (double s : grid.scales) {
      for (double omega : grid.omegas) {
        auto g = atoms.col(col);
        for (Index i = 0; i < n; ++i) {
          const double d = static_cast<double>(i + 1 - t) / s;
          g(i) = std::exp(-d * d) * std::cos(omega * d);
        }
        const double norm = g.norm();
        if (!(norm > 0.0)) throw std::invalid_argument("build_gabor_1d_dictionary: vanishing atom");
        g /= norm;
        params.emplace_back(Atom1DParams{t, s, omega, 1});
        ++col;
        if (grid.include_negated) {
          atoms.col(col) = -atoms.col(col - 1);
          params.emplace_back(Atom1DParams{t, s, omega, -1});
          ++col;
        }
      }
    }
  }
  return Dictionary(std::move(atoms), std::move(params), DictionaryVariant::kGabor1D, grid.length, 1);
}

Gaussian2DGrid image_preset_grid(int width, int height) {
  Gaussian2DGrid grid;
  grid.width = width;
  grid.height = height;
  for (int k = 0; k <= 6; ++k) grid.thetas.push_back(k * std::numbers::pi / 6.0);
  grid.sxs = {2.0, 4.0};
  grid.sys = {0.5, 1.0};
  for (int ty = 1; ty < height; ty += 2) {
    for (int tx = 1; tx < width; tx += 2) grid.translations.emplace_back(tx, ty);
  }
  return grid;
}

Gabor1DGrid trace_preset_grid(int length) {
  Gabor1DGrid grid;
  grid.length = length;
  grid.t_start = 1;
  grid.t_step = 10;
  grid.scales = {4.0, 8.0, 16.0};
  grid.omegas = {2.0, 4.0, 6.0, 8.0, 10.0};
  grid.include_negated = true;
  return grid;
}

Eigen::VectorXd gram_row(const Dictionary& dict, Index k) {
  if (k < 0 || k >= dict.size()) throw std::out_of_range("gram_row: atom index out of range");
  return dict.atoms().transpose() * dict.atom(k);
}

std::vector<double> babel_curve(const Dictionary& dict, Index max_m) {
  const Index k_atoms = dict.size();
  if (max_m < 0 || max_m >= k_atoms) {
    throw std::invalid_argument("babel_function: m must satisfy 0 <= m < K");
  }
  std::vector<double> curve(static_cast<std::size_t>(max_m) + 1, 0.0);
  if (max_m == 0) return curve;

  constexpr Index kBlock = 256;
  const auto& phi = dict.atoms();
  std::vector<double> mags(static_cast<std::size_t>(k_atoms - 1));
  for (Index start = 0; start < k_atoms; start += kBlock) {
    const Index width = std::min(kBlock, k_atoms - start);
    const Eigen::MatrixXd block = phi.transpose() * phi.middleCols(start, width);
    for (Index c = 0; c < width; ++c) {
      const Index self = start + c;
      std::size_t w = 0;
      for (Index i = 0; i < k_atoms; ++i) {
        if (i != self) mags[w++] = std::abs(block(i, c));
      }
      std::partial_sort(mags.begin(), mags.begin() + max_m, mags.end(), std::greater<>());
      double running = 0.0;
      for (Index m = 1; m <= max_m; ++m) {
        running += mags[static_cast<std::size_t>(m - 1)];
        auto& slot = curve[static_cast<std::size_t>(m)];
        slot = std::max(slot, running);
      }
    }
  }
  return curve;
}

double babel_function(const Dictionary& dict, Index m) {
  return babel_curve(dict, m).back();
}

void save_dictionary(const Dictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_dictionary: cannot open " + path.string());
  out << "# jointcs dictionary v1\n";
  out << "K,N,variant,width,height\n";
  out << dict.size() << ',' << dict.signal_length() << ',' << to_string(dict.variant()) << ','
      << dict.width() << ',' << dict.height() << '\n';
  for (Index k = 0; k < dict.size(); ++k) {
    const auto& p = dict.params(k);
    if (const auto* p2 = std::get_if<Atom2DParams>(&p)) {
      out << detail::format_double(p2->theta) << ',' << detail::format_double(p2->sx) << ','
          << detail::format_double(p2->sy) << ',' << p2->tx << ',' << p2->ty;
    } else if (const auto* p1 = std::get_if<Atom1DParams>(&p)) {
      out << p1->t << ',' << detail::format_double(p1->s) << ','
          << detail::format_double(p1->omega) << ',' << p1->sign;
    } else {
      out << '-';
    }
    const auto atom = dict.atom(k);
    for (Index i = 0; i < atom.size(); ++i) out << ',' << detail::format_double(atom(i));
    out << '\n';
  }
  if (!out) throw std::runtime_error("save_dictionary: write failed for " + path.string());
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_dictionary: cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("# jointcs dictionary", 0) != 0) {
    throw std::runtime_error("load_dictionary: missing header in " + path.string());
  }
  std::getline(in, line);  // column names
  std::getline(in, line);
  const auto head = detail::split(line, ',');
  if (head.size() != 5) throw std::runtime_error("load_dictionary: malformed header");
  const Index k = detail::parse_int(head[0]);
  const Index n = detail::parse_int(head[1]);
  const std::string variant_name(head[2]);
  const int width = static_cast<int>(detail::parse_int(head[3]));
  const int height = static_cast<int>(detail::parse_int(head[4]));
  DictionaryVariant variant;
  std::size_t param_fields;
  if (variant_name == "gaussian2d") {
    variant = DictionaryVariant::kGaussian2D;
    param_fields = 5;
  } else if (variant_name == "gabor1d") {
    variant = DictionaryVariant::kGabor1D;
    param_fields = 4;
  } else if (variant_name == "custom") {
    variant = DictionaryVariant::kCustom;
    param_fields = 1;
  } else {
    throw std::runtime_error("load_dictionary: unknown variant '" + variant_name + "'");
  }

  Eigen::MatrixXd atoms(n, k);
  std::vector<AtomParams> params;
  params.reserve(static_cast<std::size_t>(k));
  for (Index col = 0; col < k; ++col) {
    if (!std::getline(in, line)) throw std::runtime_error("load_dictionary: truncated file");
    const auto fields = detail::split(line, ',');
    if (fields.size() != param_fields + static_cast<std::size_t>(n)) {
      throw std::runtime_error("load_dictionary: wrong field count on atom " + std::to_string(col));
    }
    switch (variant) {
      case DictionaryVariant::kGaussian2D:
        params.emplace_back(Atom2DParams{detail::parse_double(fields[0]),
                                         detail::parse_double(fields[1]),
                                         detail::parse_double(fields[2]),
                                         static_cast<int>(detail::parse_int(fields[3])),
                                         static_cast<int>(detail::parse_int(fields[4]))});
        break;
      case DictionaryVariant::kGabor1D:
        params.emplace_back(Atom1DParams{static_cast<int>(detail::parse_int(fields[0])),
                                         detail::parse_double(fields[1]),
                                         detail::parse_double(fields[2]),
                                         static_cast<int>(detail::parse_int(fields[3]))});
        break;
      case DictionaryVariant::kCustom:
        params.emplace_back(std::monostate{});
        break;
    }
    for (Index i = 0; i < n; ++i) {
      atoms(i, col) = detail::parse_double(fields[param_fields + static_cast<std::size_t>(i)]);
    }
  }
  return Dictionary(std::move(atoms), std::move(params), variant, width, height);
}

}  // namespace jointcs
