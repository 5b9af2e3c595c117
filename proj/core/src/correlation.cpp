// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include "jointcs/correlation.hpp"

#include <limits>
#include <map>
#include <sstream>

namespace jointcs {

std::string describe(const TransformKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, IdentityTransform>) {
          return "identity";
        } else if constexpr (std::is_same_v<K, Translation2D>) {
          return "shift(" + std::to_string(k.dx) + "," + std::to_string(k.dy) + ")";
        } else if constexpr (std::is_same_v<K, Translation1D>) {
          return "shift(" + std::to_string(k.dt) + ")";
        } else {
          return "custom(" + k.label + ")";
        }
      },
      kind);
}

AtomTransform::AtomTransform(TransformKind kind, std::vector<Index> index_map)
    : kind_(std::move(kind)), map_(std::move(index_map)) {
  const Index k = atom_count();
  std::vector<bool> hit(map_.size(), false);
  for (Index target : map_) {
    if (target == kOutside) continue;
    if (target < 0 || target >= k) {
      throw std::invalid_argument("AtomTransform: image index out of range");
    }
    if (hit[static_cast<std::size_t>(target)]) {
      throw std::invalid_argument("AtomTransform: index map is not injective");
    }
    hit[static_cast<std::size_t>(target)] = true;
    ++domain_size_;
  }
}

AtomTransform AtomTransform::identity(Index atom_count) {
  std::vector<Index> map(static_cast<std::size_t>(atom_count));
  for (Index i = 0; i < atom_count; ++i) map[static_cast<std::size_t>(i)] = i;
  return AtomTransform(IdentityTransform{}, std::move(map));
}

AtomTransform realize_transform(const TransformKind& kind, const Dictionary& dict) {
  const Index k = dict.size();
  if (std::holds_alternative<IdentityTransform>(kind)) return AtomTransform::identity(k);

  std::vector<Index> map(static_cast<std::size_t>(k), AtomTransform::kOutside);
  if (const auto* t2 = std::get_if<Translation2D>(&kind)) {
    if (dict.variant() != DictionaryVariant::kGaussian2D) {
      throw std::invalid_argument("realize_transform: 2D translation needs a 2D dictionary");
    }
    for (Index i = 0; i < k; ++i) {
      Atom2DParams p = std::get<Atom2DParams>(dict.params(i));
      p.tx += t2->dx;
      p.ty += t2->dy;
      if (auto target = dict.find(p)) map[static_cast<std::size_t>(i)] = *target;
    }
  } else if (const auto* t1 = std::get_if<Translation1D>(&kind)) {
    if (dict.variant() != DictionaryVariant::kGabor1D) {
      throw std::invalid_argument("realize_transform: 1D translation needs a 1D dictionary");
    }
    for (Index i = 0; i < k; ++i) {
      Atom1DParams p = std::get<Atom1DParams>(dict.params(i));
      p.t += t1->dt;
      if (auto target = dict.find(p)) map[static_cast<std::size_t>(i)] = *target;
    }
  } else {
    throw std::invalid_argument("realize_transform: custom transforms must supply their index map");
  }
  return AtomTransform(kind, std::move(map));
}

Support apply_to_support(const AtomTransform& transform, const Support& support) {
  Support image;
  image.reserve(support.size());
  for (Index atom : support) {
    if (atom < 0 || atom >= transform.atom_count() || !transform.defined_at(atom)) {
      throw OutOfDomainError("apply_to_support: atom " + std::to_string(atom) +
                             " is outside the domain of " + describe(transform.kind()));
    }
    image.push_back(transform(atom));
  }
  return image;
}

TransformVector::TransformVector(std::vector<TransformPtr> views, std::vector<Index> choice)
    : views_(std::move(views)), choice_(std::move(choice)) {
  if (views_.empty()) throw std::invalid_argument("TransformVector: at least one view required");
  for (const auto& v : views_) {
    if (!v) throw std::invalid_argument("TransformVector: null transform");
  }
  const auto& first = *views_.front();
  for (Index i = 0; i < first.atom_count(); ++i) {
    if (first(i) != i) throw std::invalid_argument("TransformVector: view 0 must be the identity");
  }
  if (choice_.empty()) choice_.assign(views_.size(), 0);
  if (choice_.size() != views_.size()) {
    throw std::invalid_argument("TransformVector: choice length must match view count");
  }
}

std::vector<Support> TransformVector::apply(const Support& reference) const {
  std::vector<Support> out;
  out.reserve(views_.size());
  for (const auto& v : views_) out.push_back(apply_to_support(*v, reference));
  return out;
}

bool TransformVector::covers(const Support& reference) const {
  for (const auto& v : views_) {
    for (Index atom : reference) {
      if (!v->defined_at(atom)) return false;
    }
  }
  return true;
}

std::string TransformVector::describe() const {
  std::string out = "[";
  for (std::size_t v = 0; v < views_.size(); ++v) {
    if (v) out += ' ';
    out += jointcs::describe(views_[v]->kind());
  }
  return out + "]";
}

bool operator==(const TransformVector& a, const TransformVector& b) {
  if (a.views_.size() != b.views_.size()) return false;
  for (std::size_t v = 0; v < a.views_.size(); ++v) {
    if (a.views_[v] == b.views_[v]) continue;
    if (!(*a.views_[v] == *b.views_[v])) return false;
  }
  return true;
}

CandidateSet::CandidateSet(TransformPtr identity, std::vector<std::vector<TransformPtr>> per_view)
    : identity_(std::move(identity)), per_view_(std::move(per_view)) {
  if (!identity_) throw std::invalid_argument("CandidateSet: null identity");
  for (const auto& list : per_view_) {
    if (list.empty()) throw std::invalid_argument("CandidateSet: empty candidate list");
    for (const auto& t : list) {
      if (!t || t->atom_count() != identity_->atom_count()) {
        throw std::invalid_argument("CandidateSet: candidate realized over a different dictionary");
      }
    }
  }
}

CandidateSet CandidateSet::uniform(const Dictionary& dict, Index views,
                                   std::span<const TransformKind> kinds) {
  if (views < 1) throw std::invalid_argument("CandidateSet::uniform: views must be >= 1");
  auto identity = std::make_shared<const AtomTransform>(AtomTransform::identity(dict.size()));
  std::vector<TransformPtr> realized;
  realized.reserve(kinds.size());
  for (const auto& kind : kinds) {
    if (std::holds_alternative<IdentityTransform>(kind)) {
      realized.push_back(identity);
    } else {
      realized.push_back(std::make_shared<const AtomTransform>(realize_transform(kind, dict)));
    }
  }
  return CandidateSet(identity, std::vector<std::vector<TransformPtr>>(
                                    static_cast<std::size_t>(views - 1), realized));
}

CandidateSet CandidateSet::per_view(const Dictionary& dict,
                                    const std::vector<std::vector<TransformKind>>& lists) {
  auto identity = std::make_shared<const AtomTransform>(AtomTransform::identity(dict.size()));
  std::map<std::string, TransformPtr> cache;
  std::vector<std::vector<TransformPtr>> per_view;
  for (const auto& kinds : lists) {
    std::vector<TransformPtr> realized;
    for (const auto& kind : kinds) {
      const auto key = describe(kind);
      auto it = cache.find(key);
      if (it == cache.end()) {
        TransformPtr t = std::holds_alternative<IdentityTransform>(kind)
                             ? identity
                             : std::make_shared<const AtomTransform>(realize_transform(kind, dict));
        it = cache.emplace(key, std::move(t)).first;
      }
      realized.push_back(it->second);
    }
    per_view.push_back(std::move(realized));
  }
  return CandidateSet(identity, std::move(per_view));
}

std::uint64_t CandidateSet::count() const {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  for (const auto& list : per_view_) {
    const auto n = static_cast<std::uint64_t>(list.size());
    if (total > kMax / n) return kMax;
    total *= n;
  }
  return total;
}

TransformVector CandidateSet::vector_from_choice(std::span<const Index> choice) const {
  if (static_cast<Index>(choice.size()) != views()) {
    throw std::invalid_argument("CandidateSet: choice length must equal the view count");
  }
  std::vector<TransformPtr> views_out{identity_};
  std::vector<Index> picked{0};
  for (std::size_t v = 0; v < per_view_.size(); ++v) {
    const auto c = choice[v + 1];
    views_out.push_back(per_view_[v].at(static_cast<std::size_t>(c)));
    picked.push_back(c);
  }
  return TransformVector(std::move(views_out), std::move(picked));
}

TransformVector CandidateSet::vector_at(std::uint64_t ordinal) const {
  if (ordinal >= count()) throw std::out_of_range("CandidateSet: ordinal out of range");
  std::vector<Index> choice(per_view_.size() + 1, 0);
  for (std::size_t v = per_view_.size(); v-- > 0;) {
    const auto n = static_cast<std::uint64_t>(per_view_[v].size());
    choice[v + 1] = static_cast<Index>(ordinal % n);
    ordinal /= n;
  }
  return vector_from_choice(choice);
}

CandidateSet CandidateSet::prefix(Index views) const {
  if (views < 1 || views > this->views()) {
    throw std::invalid_argument("CandidateSet::prefix: view count out of range");
  }
  return CandidateSet(identity_, std::vector<std::vector<TransformPtr>>(
                                     per_view_.begin(), per_view_.begin() + (views - 1)));
}

std::vector<TransformVector> enumerate_vectors(const CandidateSet& candidates) {
  const auto n = candidates.count();
  if (n == std::numeric_limits<std::uint64_t>::max()) {
    throw std::length_error("enumerate_vectors: candidate set too large to materialize");
  }
  std::vector<TransformVector> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(candidates.vector_at(i));
  return out;
}

}  // namespace jointcs
