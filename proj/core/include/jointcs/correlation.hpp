// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "jointcs/dictionary.hpp"

namespace jointcs {

/// Atom indices of a support. Order is meaningful: entry k of a transformed
/// support is the image of entry k of the source support.
using Support = std::vector<Index>;

struct IdentityTransform {
  friend bool operator==(const IdentityTransform&, const IdentityTransform&) = default;
};
struct Translation2D {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Translation2D&, const Translation2D&) = default;
};
struct Translation1D {
  int dt = 0;
  friend bool operator==(const Translation1D&, const Translation1D&) = default;
};
/// A user-supplied index map; `label` identifies it in reports.
struct CustomTransform {
  std::string label;
  friend bool operator==(const CustomTransform&, const CustomTransform&) = default;
};

using TransformKind = std::variant<IdentityTransform, Translation2D, Translation1D, CustomTransform>;

std::string describe(const TransformKind& kind);

/// Raised when a support atom falls outside a transform's domain.
class OutOfDomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A transform realized over one dictionary as a partial, injective map from
/// atom index to atom index. Atoms with no image map to kOutside.
class AtomTransform {
 public:
  static constexpr Index kOutside = -1;

  /// Throws std::invalid_argument if the map is not injective on its domain or
  /// points outside [0, K).
  AtomTransform(TransformKind kind, std::vector<Index> index_map);

  static AtomTransform identity(Index atom_count);

  const TransformKind& kind() const { return kind_; }
  Index atom_count() const { return static_cast<Index>(map_.size()); }
  Index domain_size() const { return domain_size_; }
  bool defined_at(Index atom) const { return map_[static_cast<std::size_t>(atom)] != kOutside; }
  Index operator()(Index atom) const { return map_[static_cast<std::size_t>(atom)]; }
  std::span<const Index> index_map() const { return map_; }

  friend bool operator==(const AtomTransform& a, const AtomTransform& b) { return a.map_ == b.map_; }

 private:
  TransformKind kind_;
  std::vector<Index> map_;
  Index domain_size_ = 0;
};

using TransformPtr = std::shared_ptr<const AtomTransform>;

/// Computes the index map by translating each atom's parameters and looking the
/// result up in the dictionary. Translation kinds must match the dictionary
/// variant; CustomTransform cannot be realized this way.
AtomTransform realize_transform(const TransformKind& kind, const Dictionary& dict);

/// Image of `support` under `transform`, entry by entry.
/// Throws OutOfDomainError if any entry is outside the domain.
Support apply_to_support(const AtomTransform& transform, const Support& support);

/// One transform per view; view 0 is the reference and must be the identity.
class TransformVector {
 public:
  TransformVector() = default;
  /// `choice[v]` records the candidate index picked for view v (0 for view 0).
  TransformVector(std::vector<TransformPtr> views, std::vector<Index> choice = {});

  Index views() const { return static_cast<Index>(views_.size()); }
  const AtomTransform& operator[](Index v) const { return *views_[static_cast<std::size_t>(v)]; }
  const TransformPtr& ptr(Index v) const { return views_[static_cast<std::size_t>(v)]; }
  std::span<const Index> choice() const { return choice_; }

  /// Supports of every view for a reference support.
  std::vector<Support> apply(const Support& reference) const;

  /// True iff every atom of `reference` lies in every view's domain.
  bool covers(const Support& reference) const;

  std::string describe() const;

  /// View-wise equality of the realized index maps.
  friend bool operator==(const TransformVector& a, const TransformVector& b);

 private:
  std::vector<TransformPtr> views_;
  std::vector<Index> choice_;
};

/// Per-view candidate lists for views 1..J-1 (view 0 is always the identity).
/// The candidate vectors are the Cartesian product of the lists.
class CandidateSet {
 public:
  CandidateSet(TransformPtr identity, std::vector<std::vector<TransformPtr>> per_view);

  /// Builds a set where every non-reference view draws from the same list of
  /// kinds, realizing each kind once over `dict` and sharing the result.
  static CandidateSet uniform(const Dictionary& dict, Index views,
                              std::span<const TransformKind> kinds);

  /// Realizes explicit per-view lists; `per_view[v]` serves view v + 1.
  static CandidateSet per_view(const Dictionary& dict,
                               const std::vector<std::vector<TransformKind>>& per_view);

  Index views() const { return static_cast<Index>(per_view_.size()) + 1; }
  const TransformPtr& identity() const { return identity_; }

  /// Candidates for view v in [1, views()).
  const std::vector<TransformPtr>& candidates(Index v) const {
    return per_view_.at(static_cast<std::size_t>(v - 1));
  }

  /// Product of the per-view counts; saturates at UINT64_MAX.
  std::uint64_t count() const;

  /// The ordinal-th vector in lexicographic order (view 1 most significant).
  TransformVector vector_at(std::uint64_t ordinal) const;

  /// Vector made of candidate choice[v] for every view v >= 1.
  TransformVector vector_from_choice(std::span<const Index> choice) const;

  /// Same candidate lists restricted to the first `views` views.
  CandidateSet prefix(Index views) const;

 private:
  TransformPtr identity_;
  std::vector<std::vector<TransformPtr>> per_view_;
};

/// Every candidate vector, lexicographic over views.
std::vector<TransformVector> enumerate_vectors(const CandidateSet& candidates);

}  // namespace jointcs
