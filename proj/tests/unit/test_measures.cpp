// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "gammadiv/errors.hpp"
#include "gammadiv/measures.hpp"

namespace gammadiv {
namespace {

TEST(DiscreteMeasure, SortsAndMergesAtoms) {
  const auto mu = DiscreteMeasure::on_line({1.0, 0.0, 1.0 + 1e-14}, {0.25, 0.5, 0.25});
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_DOUBLE_EQ(mu.point(0)[0], 0.0);
  EXPECT_DOUBLE_EQ(mu.weight(1), 0.5);
}

TEST(DiscreteMeasure, DropsZeroWeights) {
  const auto mu = DiscreteMeasure::on_line({0.0, 1.0, 2.0}, {0.5, 0.0, 0.5});
  EXPECT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu.find(std::vector<double>{1.0}), mu.size());
}

TEST(DiscreteMeasure, RejectsBadMass) {
  EXPECT_THROW(DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.6}), InvalidInput);
  EXPECT_THROW(DiscreteMeasure::on_line({0.0, 1.0}, {1.5, -0.5}), InvalidInput);
  EXPECT_THROW(DiscreteMeasure::signed_measure(1, {0.0, 1.0}, {0.5, -0.4}), InvalidInput);
  EXPECT_THROW(DiscreteMeasure::on_line({0.0, NAN}, {0.5, 0.5}), InvalidInput);
}

TEST(DiscreteMeasure, SignedMeasureSumsToZero) {
  const auto rho = DiscreteMeasure::signed_measure(2, {0, 0, 1, 1}, {0.3, -0.3});
  EXPECT_EQ(rho.kind(), MeasureKind::kSigned);
  EXPECT_NEAR(rho.total_mass(), 0.0, 1e-15);
}

TEST(ToDiscrete, UniformUnitInterval) {
  const auto mu = to_discrete(GridDensity::uniform(0.0, 1.0, 4));
  ASSERT_EQ(mu.size(), 4u);
  const double xs[] = {0.125, 0.375, 0.625, 0.875};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_DOUBLE_EQ(mu.point(i)[0], xs[i]);
    EXPECT_DOUBLE_EQ(mu.weight(i), 0.25);
  }
}

TEST(ToDiscrete, UniformOnZeroTwo) {
  const auto mu = to_discrete(GridDensity::uniform(0.0, 2.0, 2));
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_DOUBLE_EQ(mu.point(0)[0], 0.5);
  EXPECT_DOUBLE_EQ(mu.point(1)[0], 1.5);
  EXPECT_DOUBLE_EQ(mu.weight(0), 0.5);
}

TEST(ToDiscrete, LinearDensityCellIntegrals) {
  // Exact cell integrals of 2x over [0, 1/2] and [1/2, 1] are 1/4 and 3/4,
  // which the midpoint rule reproduces for a linear density.
  const auto g = GridDensity::from_function(0.0, 1.0, 2, [](double x) { return 2.0 * x; });
  const auto mu = to_discrete(g);
  EXPECT_NEAR(mu.weight(0), 0.25, 1e-15);
  EXPECT_NEAR(mu.weight(1), 0.75, 1e-15);
}

TEST(ToDiscrete, PreservesMassExactly) {
  const auto g = GridDensity::from_function(0.0, 3.0, 777, [](double x) { return std::exp(-x) + 0.1; });
  EXPECT_NEAR(to_discrete(g).total_mass(), 1.0, 1e-14);
}

TEST(GridDensity, ValidateRejectsBadGrids) {
  GridDensity g{1.0, 0.0, {1.0}};
  EXPECT_THROW(g.validate(), InvalidInput);
  GridDensity h{0.0, 1.0, {0.5, 0.5}};
  EXPECT_THROW(h.validate(), InvalidInput);
  GridDensity k{0.0, 1.0, {1.0, -1.0, 3.0}};
  EXPECT_THROW(k.validate(), InvalidInput);
}

TEST(Moments, Examples) {
  EXPECT_DOUBLE_EQ(moment(DiscreteMeasure::dirac(std::vector<double>{0.0}), 2), 0.0);
  EXPECT_DOUBLE_EQ(moment(DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5}), 1), 0.5);
  EXPECT_NEAR(moment(to_discrete(GridDensity::uniform(0.0, 1.0, 1000)), 2), 1.0 / 3.0, 1e-3);
}

TEST(Moments, RejectsHighOrderInSeveralDimensions) {
  const auto mu = DiscreteMeasure::uniform(2, {0, 0, 1, 2});
  EXPECT_THROW(moments(mu, 3), InvalidInput);
  const auto m2 = moments(mu, 2);
  EXPECT_DOUBLE_EQ(m2[0], 0.5);
  EXPECT_DOUBLE_EQ(m2[1], 2.0);
}

TEST(Moments, ConvergeAtFirstOrder) {
  // Second moment of the density 2x on [0, 1] is 1/2; the midpoint error
  // shrinks at least linearly in the cell width.
  double prev = 1.0;
  for (std::size_t n : {10u, 100u, 1000u}) {
    const auto mu = to_discrete(GridDensity::from_function(0.0, 1.0, n, [](double x) { return 2.0 * x; }));
    const double err = std::abs(moment(mu, 2) - 0.5);
    EXPECT_LE(err, 1.0 / static_cast<double>(n));
    EXPECT_LE(err, prev);
    prev = err;
  }
}

TEST(CdfValues, Examples) {
  const auto d = cdf_values(DiscreteMeasure::dirac(std::vector<double>{0.0}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d[0].cumulative, 1.0);
  const auto two = cdf_values(DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5}));
  EXPECT_DOUBLE_EQ(two[0].cumulative, 0.5);
  EXPECT_DOUBLE_EQ(two[1].cumulative, 1.0);
  const auto four = cdf_values(to_discrete(GridDensity::uniform(0.0, 1.0, 4)));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(four[i].cumulative, 0.25 * static_cast<double>(i + 1), 1e-15);
  }
  EXPECT_THROW(cdf_values(DiscreteMeasure::uniform(2, {0, 0, 1, 1})), InvalidInput);
}

TEST(CdfValues, MonotoneEndingAtOne) {
  const auto mu = to_discrete(GridDensity::from_function(-1.0, 2.0, 313, [](double x) { return 1.0 + x * x; }));
  const auto c = cdf_values(mu);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i].cumulative, c[i - 1].cumulative);
  EXPECT_NEAR(c.back().cumulative, 1.0, 1e-10);
}

TEST(Statistics, ExpectationVarianceMixPerturb) {
  const auto mu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  const std::vector<double> f{0.0, 2.0};
  EXPECT_DOUBLE_EQ(expectation(mu, f), 1.0);
  EXPECT_DOUBLE_EQ(variance(mu, f), 1.0);
  const auto nu = DiscreteMeasure::on_line({1.0, 2.0}, {0.5, 0.5});
  const auto m = mix(mu, nu, 0.5);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_DOUBLE_EQ(m.weight(1), 0.5);
  const auto rho = DiscreteMeasure::signed_measure(1, {0.0, 1.0}, {-1.0, 1.0});
  const auto p = perturb(mu, rho, 0.25);
  EXPECT_DOUBLE_EQ(p.weight(0), 0.25);
  EXPECT_THROW(perturb(mu, rho, 1.0), InvalidInput);
}

TEST(GaussianParams, Validate) {
  EXPECT_THROW((GaussianParams{0.0, 0.0}.validate()), InvalidInput);
  EXPECT_DOUBLE_EQ((GaussianParams{1.0, 4.0}.sd()), 2.0);
}

}  // namespace
}  // namespace gammadiv
