// Copyright 2026 The jointcs Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jointcs/rng.hpp"
#include "jointcs/sensing.hpp"

namespace jointcs {
namespace {

TEST(SensingMatrix, SameSeedSameMatrix) {
  const auto a = sample_sensing_matrix(20, 50, 42);
  const auto b = sample_sensing_matrix(20, 50, 42);
  const auto c = sample_sensing_matrix(20, 50, 43);
  EXPECT_TRUE(a.entries == b.entries);
  EXPECT_FALSE(a.entries == c.entries);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_FALSE(a.identity);
}

TEST(SensingMatrix, EntriesHaveVarianceOneOverM) {
  const Index m = 100;
  const Index n = 1024;
  double sum = 0.0;
  double sumsq = 0.0;
  double count = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::MatrixXd scaled = sample_sensing_matrix(m, n, seed).entries * std::sqrt(double(m));
    sum += scaled.sum();
    sumsq += scaled.squaredNorm();
    count += static_cast<double>(scaled.size());
  }
  const double mean = sum / count;
  const double var = sumsq / count - mean * mean;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(count));
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(SensingMatrix, PreservesSquaredNormOnAverage) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(64);
  u(3) = 0.6;
  u(40) = 0.8;
  double acc = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) acc += measure(sample_sensing_matrix(16, 64, seed), u).squaredNorm();
  EXPECT_NEAR(acc / 1000.0, 1.0, 0.05);
}

TEST(SensingMatrix, RejectsZeroDimensions) {
  EXPECT_THROW(sample_sensing_matrix(0, 10, 1), std::invalid_argument);
  EXPECT_THROW(sample_sensing_matrix(10, 0, 1), std::invalid_argument);
}

TEST(SensingMatrix, ViewsAreSeededIndependently) {
  const auto views = sample_view_matrices(8, 16, 3, 99);
  ASSERT_EQ(views.size(), 3u);
  for (Index j = 0; j < 3; ++j) {
    EXPECT_TRUE(views[static_cast<std::size_t>(j)].entries ==
                sample_sensing_matrix(8, 16, derive_seed(99, static_cast<std::uint64_t>(j))).entries);
  }
  EXPECT_FALSE(views[0].entries == views[1].entries);
}

TEST(Measure, ExactProduct) {
  const auto a = sample_sensing_matrix(7, 12, 5);
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(12, -1.0, 2.0);
  const auto s = measure(a, y);
  for (Index r = 0; r < 7; ++r) {
    double acc = 0.0;
    for (Index c = 0; c < 12; ++c) acc += a.entries(r, c) * y(c);
    EXPECT_NEAR(s(r), acc, 1e-14);
  }
  EXPECT_TRUE(measure(a, Eigen::VectorXd::Zero(12)).isZero(0.0));
  EXPECT_THROW(measure(a, Eigen::VectorXd::Zero(11)), std::invalid_argument);
}

TEST(Measure, IdentitySensingReturnsSignal) {
  const auto id = identity_sensing(9);
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(9, 0.0, 1.0);
  EXPECT_TRUE(id.identity);
  EXPECT_TRUE(measure(id, y) == y);
}

TEST(MeasureEnsemble, AppliesEachViewMatrix) {
  auto matrices = sample_view_matrices(5, 10, 3, 7);
  std::vector<Eigen::VectorXd> signals;
  for (int j = 0; j < 3; ++j) signals.push_back(Eigen::VectorXd::Random(10));
  const auto copy = matrices;
  const auto set = measure_ensemble(std::move(matrices), signals);
  ASSERT_EQ(set.views(), 3);
  EXPECT_EQ(set.rows(), 5);
  EXPECT_EQ(set.cols(), 10);
  for (std::size_t j = 0; j < 3; ++j) {
    EXPECT_TRUE(set.measurements[j].isApprox(copy[j].entries * signals[j], 1e-14));
  }

  const auto zero = measure_ensemble(sample_view_matrices(5, 10, 2, 1),
                                     {Eigen::VectorXd::Zero(10), Eigen::VectorXd::Zero(10)});
  for (const auto& s : zero.measurements) EXPECT_TRUE(s.isZero(0.0));

  EXPECT_THROW(measure_ensemble(sample_view_matrices(5, 10, 2, 1), signals), std::invalid_argument);
  auto mixed = sample_view_matrices(5, 10, 2, 1);
  mixed[1] = sample_sensing_matrix(6, 10, 3);
  EXPECT_THROW(measure_ensemble(std::move(mixed), {signals[0], signals[1]}), std::invalid_argument);
}

TEST(DeriveSeed, DistinctStreams) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(1, 5), derive_seed(1, 5));
}

}  // namespace
}  // namespace jointcs
