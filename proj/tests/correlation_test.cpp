// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "jointcs/correlation.hpp"

namespace jointcs {
namespace {

const Dictionary& image16() {
  static const Dictionary dict = build_gaussian_2d_dictionary(image_preset_grid(16, 16));
  return dict;
}

TEST(RealizeTransform, IdentityMapsEveryAtomToItself) {
  const auto t = realize_transform(IdentityTransform{}, image16());
  EXPECT_EQ(t.domain_size(), image16().size());
  for (Index i = 0; i < image16().size(); ++i) ASSERT_EQ(t(i), i);
}

TEST(RealizeTransform, TranslationMovesCenterAndKeepsShape) {
  const auto& dict = image16();
  const auto t = realize_transform(Translation2D{2, 0}, dict);
  for (Index i = 0; i < dict.size(); ++i) {
    const auto p = std::get<Atom2DParams>(dict.params(i));
    if (p.tx + 2 >= 16) {
      EXPECT_FALSE(t.defined_at(i));
      continue;
    }
    ASSERT_TRUE(t.defined_at(i));
    const auto q = std::get<Atom2DParams>(dict.params(t(i)));
    EXPECT_EQ(q.tx, p.tx + 2);
    EXPECT_EQ(q.ty, p.ty);
    EXPECT_EQ(q.theta, p.theta);
    EXPECT_EQ(q.sx, p.sx);
    EXPECT_EQ(q.sy, p.sy);
  }
  // the column tx = 15 has no image: 8 rows x 24 shapes
  EXPECT_EQ(t.domain_size(), dict.size() - 8 * 24);
}

TEST(RealizeTransform, OppositeShiftsComposeToIdentity) {
  const auto& dict = image16();
  const auto fwd = realize_transform(Translation2D{2, -2}, dict);
  const auto back = realize_transform(Translation2D{-2, 2}, dict);
  Index checked = 0;
  for (Index i = 0; i < dict.size(); ++i) {
    if (!fwd.defined_at(i)) continue;
    ASSERT_TRUE(back.defined_at(fwd(i)));
    EXPECT_EQ(back(fwd(i)), i);
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(RealizeTransform, OneDimensionalShift) {
  const auto dict = build_gabor_1d_dictionary(trace_preset_grid());
  const auto t = realize_transform(Translation1D{10}, dict);
  for (Index i = 0; i < dict.size(); i += 7) {
    const auto p = std::get<Atom1DParams>(dict.params(i));
    if (p.t + 10 > 1000) {
      EXPECT_FALSE(t.defined_at(i));
    } else {
      auto q = p;
      q.t += 10;
      EXPECT_EQ(t(i), dict.find(q));
    }
  }
}

TEST(RealizeTransform, RejectsMismatchedKinds) {
  const auto trace = build_gabor_1d_dictionary(Gabor1DGrid{40, 1, 10, {4.0}, {2.0}, true});
  EXPECT_THROW(realize_transform(Translation2D{2, 0}, trace), std::invalid_argument);
  EXPECT_THROW(realize_transform(Translation1D{10}, image16()), std::invalid_argument);
  EXPECT_THROW(realize_transform(CustomTransform{"x"}, image16()), std::invalid_argument);
}

TEST(AtomTransform, RejectsNonInjectiveMaps) {
  EXPECT_THROW(AtomTransform(CustomTransform{"c"}, {1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(AtomTransform(CustomTransform{"c"}, {3, 0, 1}), std::invalid_argument);
  EXPECT_NO_THROW(AtomTransform(CustomTransform{"c"}, {2, AtomTransform::kOutside, 0}));
}

TEST(AtomTransform, RealizedMapsAreInjective) {
  const auto& dict = image16();
  for (int dx : {-2, 0, 2}) {
    for (int dy : {-2, 0, 2}) {
      const auto t = realize_transform(Translation2D{dx, dy}, dict);
      std::set<Index> images;
      for (Index i = 0; i < dict.size(); ++i) {
        if (t.defined_at(i)) EXPECT_TRUE(images.insert(t(i)).second);
      }
    }
  }
}

TEST(ApplyToSupport, MapsEntryByEntry) {
  const auto& dict = image16();
  const auto shift = realize_transform(Translation2D{0, 2}, dict);
  const auto id = AtomTransform::identity(dict.size());
  const Support support{3, 40, 100};
  EXPECT_EQ(apply_to_support(id, support), support);
  const auto image = apply_to_support(shift, {40});
  ASSERT_EQ(image.size(), 1u);
  EXPECT_EQ(image[0], shift(40));

  Index outside = 0;
  while (shift.defined_at(outside)) ++outside;
  EXPECT_THROW(apply_to_support(shift, {3, outside}), OutOfDomainError);
}

TEST(TransformVector, FirstViewMustBeIdentity) {
  const auto& dict = image16();
  auto shift = std::make_shared<const AtomTransform>(realize_transform(Translation2D{2, 2}, dict));
  auto id = std::make_shared<const AtomTransform>(AtomTransform::identity(dict.size()));
  EXPECT_THROW(TransformVector({shift, id}), std::invalid_argument);
  EXPECT_THROW(TransformVector(std::vector<TransformPtr>{}), std::invalid_argument);
  const TransformVector t({id, shift});
  EXPECT_EQ(t.views(), 2);
  EXPECT_TRUE(t.covers({0}));
}

TEST(CandidateSet, NineShiftsOverFourViewsGive729Vectors) {
  std::vector<TransformKind> kinds;
  for (int dx : {-2, 0, 2}) {
    for (int dy : {-2, 0, 2}) kinds.push_back(Translation2D{dx, dy});
  }
  const auto set = CandidateSet::uniform(image16(), 4, kinds);
  EXPECT_EQ(set.count(), 729u);
  const auto all = enumerate_vectors(set);
  ASSERT_EQ(all.size(), 729u);
  // lexicographic, view 1 most significant
  EXPECT_EQ(all[1].choice()[3], 1);
  EXPECT_EQ(all[9].choice()[2], 1);
  EXPECT_EQ(all[81].choice()[1], 1);
  EXPECT_EQ(all.back().choice()[1], 8);
  for (std::size_t i = 0; i < all.size(); i += 50) {
    EXPECT_EQ(all[i], set.vector_from_choice(all[i].choice()));
  }
}

TEST(CandidateSet, SmallCounts) {
  const std::vector<TransformKind> three{Translation2D{-2, 0}, Translation2D{0, 0}, Translation2D{2, 0}};
  EXPECT_EQ(enumerate_vectors(CandidateSet::uniform(image16(), 2, three)).size(), 3u);
  const auto single = enumerate_vectors(CandidateSet::uniform(image16(), 1, three));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].views(), 1);
}

TEST(CandidateSet, PerViewListsAndPrefix) {
  const auto set = CandidateSet::per_view(
      image16(), {{Translation2D{0, 0}, Translation2D{2, 0}}, {Translation2D{0, 2}}, {Translation2D{-2, 0},
                                                                                       Translation2D{0, -2},
                                                                                       Translation2D{2, 2}}});
  EXPECT_EQ(set.views(), 4);
  EXPECT_EQ(set.count(), 6u);
  EXPECT_EQ(set.prefix(2).count(), 2u);
  EXPECT_EQ(set.prefix(1).count(), 1u);
  EXPECT_THROW(set.prefix(5), std::invalid_argument);
  EXPECT_THROW(set.vector_at(6), std::out_of_range);
  // the shared cache hands out one realization per distinct kind
  EXPECT_EQ(set.candidates(1)[0].get(), set.candidates(1)[0].get());
}

TEST(CandidateSet, EnumerationIsReproducible) {
  std::mt19937_64 rng(5);
  auto id = std::make_shared<const AtomTransform>(AtomTransform::identity(20));
  std::vector<std::vector<TransformPtr>> lists(2);
  for (auto& list : lists) {
    for (int c = 0; c < 3; ++c) list.push_back(testing::random_partial_map(20, 0.8, rng, "m"));
  }
  const CandidateSet set(id, lists);
  const auto a = enumerate_vectors(set);
  const auto b = enumerate_vectors(set);
  ASSERT_EQ(a.size(), 9u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

}  // namespace
}  // namespace jointcs
