// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gammadiv/entropy.hpp"
#include "oracles.hpp"

namespace gammadiv {
namespace {

TEST(RelEntropy, Examples) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0, 2.0}, {0.2, 0.3, 0.5});
  EXPECT_DOUBLE_EQ(rel_entropy(nu, nu), 0.0);
  const auto outside = DiscreteMeasure::on_line({0.0, 3.0}, {0.5, 0.5});
  EXPECT_EQ(rel_entropy(outside, nu), kInfinity);
  const double c = 0.3;
  const auto mu = to_discrete(GridDensity::uniform(0.0, 1.0 - c, 700));
  const auto base = to_discrete(GridDensity::uniform(0.0, 1.0, 1000));
  EXPECT_NEAR(rel_entropy(mu, base), -std::log(1.0 - c), 1e-3);
}

TEST(RelEntropy, MatchesOracleAndGibbs) {
  std::mt19937_64 rng(21);
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_simplex(4, rng);
    const auto q = oracle::random_simplex(4, rng);
    const auto mu = DiscreteMeasure::on_line(xs, p);
    const auto nu = DiscreteMeasure::on_line(xs, q);
    EXPECT_NEAR(rel_entropy(mu, nu), oracle::kl(p, q), 1e-14);
    EXPECT_GT(rel_entropy(mu, nu), 0.0);
  }
}

TEST(RelEntropy, JointConvexity) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto m1 = DiscreteMeasure::on_line(xs, oracle::random_simplex(5, rng));
    const auto m2 = DiscreteMeasure::on_line(xs, oracle::random_simplex(5, rng));
    const auto n1 = DiscreteMeasure::on_line(xs, oracle::random_simplex(5, rng));
    const auto n2 = DiscreteMeasure::on_line(xs, oracle::random_simplex(5, rng));
    const double t = u(rng);
    const double lhs = rel_entropy(mix(m1, m2, t), mix(n1, n2, t));
    const double rhs = (1.0 - t) * rel_entropy(m1, n1) + t * rel_entropy(m2, n2);
    EXPECT_LE(lhs, rhs + 1e-14);
  }
}

TEST(LogMgf, Examples) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  EXPECT_DOUBLE_EQ(log_mgf(std::vector<double>{0.0, 0.0}, nu), 0.0);
  EXPECT_NEAR(log_mgf(std::vector<double>{1.7, 1.7}, nu), 1.7, 1e-15);
  EXPECT_NEAR(log_mgf(std::vector<double>{0.0, std::log(3.0)}, nu), std::log(2.0), 1e-15);
}

TEST(LogMgf, OverflowSafe) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  EXPECT_NEAR(log_mgf(std::vector<double>{1000.0, 1000.0}, nu), 1000.0, 1e-12);
}

TEST(Tilt, Examples) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  const auto same = tilt(nu, std::vector<double>{0.0, 0.0});
  EXPECT_DOUBLE_EQ(same.result.weight(0), 0.5);
  const auto t = tilt(nu, std::vector<double>{0.0, std::log(3.0)});
  EXPECT_NEAR(t.result.weight(0), 0.25, 1e-15);
  EXPECT_NEAR(t.result.weight(1), 0.75, 1e-15);
}

TEST(Tilt, DonskerVaradhanEqualityAndInequality) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n01(0.0, 1.0);
  const std::vector<double> xs{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto nu = DiscreteMeasure::on_line(xs, oracle::random_simplex(6, rng));
    std::vector<double> g(6);
    for (double& v : g) v = 2.0 * n01(rng);
    const auto t = tilt(nu, g);
    const double lm = log_mgf(g, nu);
    EXPECT_NEAR(expectation(t.result, g) - lm, rel_entropy(t.result, nu), 1e-9);
    const auto mu = DiscreteMeasure::on_line(xs, oracle::random_simplex(6, rng));
    EXPECT_LE(expectation(mu, g) - lm, rel_entropy(mu, nu) + 1e-12);
  }
}

}  // namespace
}  // namespace gammadiv
