// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gammadiv/errors.hpp"
#include "gammadiv/transport.hpp"
#include "oracles.hpp"

namespace gammadiv {
namespace {

DiscreteMeasure random_line_measure(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> xs(n);
  for (double& x : xs) x = u(rng);
  return DiscreteMeasure::on_line(xs, oracle::random_simplex(n, rng));
}

DiscreteMeasure random_plane_measure(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(2 * n);
  for (double& x : xs) x = u(rng);
  return DiscreteMeasure::probability(2, xs, oracle::random_simplex(n, rng));
}


TEST(W1Cdf, Examples) {
  const auto d0 = DiscreteMeasure::on_line({0.0}, {1.0});
  const auto d1 = DiscreteMeasure::on_line({1.0}, {1.0});
  EXPECT_DOUBLE_EQ(w1_cdf(d0, d0), 0.0);
  EXPECT_DOUBLE_EQ(w1_cdf(d0, d1), 1.0);
  const auto mu = to_discrete(GridDensity::uniform(0.0, 1.2, 2000));
  const auto nu = to_discrete(GridDensity::uniform(0.0, 1.0, 2000));
  EXPECT_NEAR(w1_cdf(mu, nu), 0.1, 2e-3);
  EXPECT_THROW(w1_cdf(DiscreteMeasure::uniform(2, {0, 0}), DiscreteMeasure::uniform(2, {0, 0})),
               InvalidInput);
}

TEST(OtLp, Examples) {
  const auto d0 = DiscreteMeasure::on_line({0.0}, {1.0});
  const auto d1 = DiscreteMeasure::on_line({1.0}, {1.0});
  EXPECT_DOUBLE_EQ(ot_lp(d0, d1, CostSpec::scaled_metric(3.0)).cost, 3.0);
  const auto mu = DiscreteMeasure::on_line({0.0, 1.0, 2.5}, {0.2, 0.3, 0.5});
  const auto plan = ot_lp(mu, mu, CostSpec::scaled_metric(1.0));
  EXPECT_DOUBLE_EQ(plan.cost, 0.0);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(plan.plan(i, i), mu.weight(static_cast<std::size_t>(i)));
}

TEST(OtLp, MatchesCdfOracleOnLine) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto mu = random_line_measure(5, rng);
    const auto nu = random_line_measure(5, rng);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < 5; ++i) {
      xs.push_back(mu.point(i)[0]);
      ys.push_back(nu.point(i)[0]);
    }
    const double ref = oracle::w1_line(xs, mu.weights(), ys, nu.weights());
    EXPECT_NEAR(ot_lp(mu, nu, CostSpec::scaled_metric(1.0)).cost, ref, 1e-9);
    EXPECT_NEAR(w1_cdf(mu, nu), ref, 1e-12);
  }
}

TEST(OtLp, MatchesAssignmentBruteForce) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(12), b(12);
    for (double& v : a) v = u(rng);
    for (double& v : b) v = u(rng);
    const auto mu = DiscreteMeasure::uniform(2, a);
    const auto nu = DiscreteMeasure::uniform(2, b);
    Eigen::MatrixXd c(6, 6);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) c(i, j) = std::hypot(a[2 * i] - b[2 * j], a[2 * i + 1] - b[2 * j + 1]);
    }
    EXPECT_NEAR(ot_lp(mu, nu, CostSpec::scaled_metric(1.0)).cost, oracle::assignment_brute(c), 1e-12);
  }
}

TEST(OtLp, PlanMarginalsAndCost) {
  std::mt19937_64 rng(13);
  const auto mu = random_plane_measure(7, rng);
  const auto nu = random_plane_measure(9, rng);
  const auto cost = CostSpec::scaled_metric(1.0);
  const auto plan = ot_lp(mu, nu, cost);
  const Eigen::MatrixXd c = cost_matrix(cost, 2, mu.coords(), nu.coords());
  EXPECT_NEAR((plan.plan.array() * c.array()).sum(), plan.cost, 1e-12);
  for (Eigen::Index i = 0; i < plan.plan.rows(); ++i) {
    EXPECT_NEAR(plan.plan.row(i).sum(), mu.weight(static_cast<std::size_t>(i)), 1e-10);
  }
  for (Eigen::Index j = 0; j < plan.plan.cols(); ++j) {
    EXPECT_NEAR(plan.plan.col(j).sum(), nu.weight(static_cast<std::size_t>(j)), 1e-10);
  }
  EXPECT_GE(plan.plan.minCoeff(), 0.0);
}

TEST(OtDual, Examples) {
  const auto mu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  const auto same = ot_dual(mu, mu, CostSpec::scaled_metric(1.0));
  EXPECT_DOUBLE_EQ(same.value, 0.0);
  const auto d0 = DiscreteMeasure::on_line({0.0}, {1.0});
  const auto d1 = DiscreteMeasure::on_line({1.0}, {1.0});
  const auto r = ot_dual(d0, d1, CostSpec::scaled_metric(1.0));
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.potential.value(0) - r.potential.value(1), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(r.potential.value(0), 0.0);
}

TEST(OtDual, StrongDualityAndSlackness) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    const auto mu = random_plane_measure(6, rng);
    const auto nu = random_plane_measure(6, rng);
    const auto cost = CostSpec::scaled_metric(1.5);
    const auto plan = ot_lp(mu, nu, cost);
    const auto dual = ot_dual(mu, nu, cost);
    EXPECT_NEAR(dual.value, plan.cost, 1e-9 * std::max(1.0, plan.cost));
    EXPECT_LE(dual.potential.max_violation(), 1e-9);
    const auto gm = dual.potential.values_on(mu);
    const auto gn = dual.potential.values_on(nu);
    for (Eigen::Index i = 0; i < plan.plan.rows(); ++i) {
      for (Eigen::Index j = 0; j < plan.plan.cols(); ++j) {
        if (plan.plan(i, j) <= 1e-12) continue;
        const double cij = cost(mu.point(static_cast<std::size_t>(i)), nu.point(static_cast<std::size_t>(j)));
        EXPECT_NEAR(gm[static_cast<std::size_t>(i)] - gn[static_cast<std::size_t>(j)], cij, 1e-9);
      }
    }
  }
}

TEST(OtDual, ExplicitMetricCost) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 6;
    std::vector<double> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = static_cast<double>(i);
    const Eigen::MatrixXd d = oracle::random_metric(n, rng);
    const auto cost = CostSpec::explicit_matrix(1, pts, d);
    const auto mu = DiscreteMeasure::on_line(pts, oracle::random_simplex(n, rng));
    const auto nu = DiscreteMeasure::on_line(pts, oracle::random_simplex(n, rng));
    // Brute-force dual over the vertices of the Lipschitz polytope.
    double best = -oracle::kInf;
    for (const auto& g : oracle::lipschitz_vertices(d)) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += g[i] * (mu.weight(i) - nu.weight(i));
      best = std::max(best, s);
    }
    EXPECT_NEAR(ot_lp(mu, nu, cost).cost, best, 1e-10);
    EXPECT_NEAR(ot_dual(mu, nu, cost).value, best, 1e-10);
  }
}

TEST(Transport, SymmetryScalingTriangle) {
  std::mt19937_64 rng(16);
  const auto c1 = CostSpec::scaled_metric(1.0);
  const auto c3 = CostSpec::scaled_metric(3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_plane_measure(5, rng);
    const auto b = random_plane_measure(6, rng);
    const auto g = random_plane_measure(4, rng);
    const double ab = ot_lp(a, b, c1).cost;
    EXPECT_NEAR(ab, ot_lp(b, a, c1).cost, 1e-12);
    EXPECT_NEAR(ot_lp(a, b, c3).cost, 3.0 * ab, 1e-12);
    EXPECT_LE(ab, ot_lp(a, g, c1).cost + ot_lp(g, b, c1).cost + 1e-12);
  }
}

TEST(Transport, WeakDualityForFeasiblePotentials) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto cost = CostSpec::scaled_metric(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = random_plane_measure(5, rng);
    const auto nu = random_plane_measure(5, rng);
    // A random 1-Lipschitz function: the min of cones.
    std::vector<double> centres(6), heights(3);
    for (double& v : centres) v = u(rng);
    for (double& v : heights) v = u(rng);
    auto g = [&](std::span<const double> x) {
      double best = oracle::kInf;
      for (int k = 0; k < 3; ++k) {
        best = std::min(best, heights[static_cast<std::size_t>(k)] +
                                  std::hypot(x[0] - centres[2 * k], x[1] - centres[2 * k + 1]));
      }
      return best;
    };
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += g(mu.point(i)) * mu.weight(i) - g(nu.point(i)) * nu.weight(i);
    EXPECT_LE(s, ot_lp(mu, nu, cost).cost + 1e-12);
  }
}

TEST(ExtendPotential, Examples) {
  const auto cost = CostSpec::scaled_metric(1.0);
  const Potential single(1, {0.0}, {0.0}, cost);
  EXPECT_DOUBLE_EQ(extend_potential(single, std::vector<double>{2.0})[0], 2.0);
  const Potential two(1, {0.0, 1.0}, {0.0, 1.0}, cost);
  EXPECT_DOUBLE_EQ(extend_potential(two, std::vector<double>{0.5})[0], 0.5);
  const auto back = extend_potential(two, std::vector<double>{0.0, 1.0});
  EXPECT_DOUBLE_EQ(back[0], 0.0);
  EXPECT_DOUBLE_EQ(back[1], 1.0);
}

TEST(ExtendPotential, ResultIsLipschitzOnUnion) {
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto cost = CostSpec::scaled_metric(2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto mu = random_plane_measure(6, rng);
    const auto nu = random_plane_measure(6, rng);
    const auto pot = ot_dual(mu, nu, cost).potential;
    std::vector<double> q(16);
    for (double& v : q) v = u(rng);
    const auto ext = extend_potential(pot, q);
    std::vector<double> coords = pot.coords();
    std::vector<double> vals = pot.values();
    coords.insert(coords.end(), q.begin(), q.end());
    vals.insert(vals.end(), ext.begin(), ext.end());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      for (std::size_t j = 0; j < vals.size(); ++j) {
        const std::span<const double> xi(coords.data() + 2 * i, 2);
        const std::span<const double> xj(coords.data() + 2 * j, 2);
        EXPECT_LE(vals[i] - vals[j], cost(xi, xj) + 1e-9);
      }
    }
  }
}

TEST(PotentialType, RejectsViolations) {
  EXPECT_THROW(Potential(1, {0.0, 1.0}, {0.0, 1.5}, CostSpec::scaled_metric(1.0)), InvalidInput);
}

TEST(CostSpecType, HalfSquareGapAndExplicitValidation) {
  const auto c = CostSpec::half_square_gap();
  const std::vector<double> x{1.0};
  const std::vector<double> y{3.0};
  EXPECT_DOUBLE_EQ(c(x, y), 4.0);
  EXPECT_THROW(c.check_points(1, std::vector<double>{-1.0}), InvalidInput);
  Eigen::MatrixXd bad(3, 3);
  bad << 0, 1, 3, 1, 0, 1, 3, 1, 0;
  EXPECT_THROW(CostSpec::explicit_matrix(1, {0, 1, 2}, bad), InvalidInput);
  Eigen::MatrixXd neg = Eigen::MatrixXd::Zero(2, 2);
  neg(0, 1) = -1.0;
  neg(1, 0) = 1.0;
  EXPECT_THROW(CostSpec::explicit_matrix(1, {0, 1}, neg), InvalidInput);
}

TEST(SignedTransport, EqualsTransportOfParts) {
  const auto rho = DiscreteMeasure::signed_measure(1, {0.0, 2.0}, {-0.5, 0.5});
  EXPECT_NEAR(signed_transport(rho, CostSpec::scaled_metric(1.0)), 1.0, 1e-12);
}

TEST(TransportCost, ChainMatchesLp) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(5), b(4);
    for (double& v : a) v = u(rng);
    for (double& v : b) v = u(rng);
    const auto mu = DiscreteMeasure::on_line(a, oracle::random_simplex(5, rng));
    const auto nu = DiscreteMeasure::on_line(b, oracle::random_simplex(4, rng));
    const auto c = CostSpec::half_square_gap(0.7);
    EXPECT_NEAR(transport_cost(mu, nu, c), ot_lp(mu, nu, c).cost, 1e-10);
    // Half-square gap is |x - y| after the map x -> x^2 / 2.
    std::vector<double> a2, b2;
    for (double v : a) a2.push_back(0.5 * v * v);
    for (double v : b) b2.push_back(0.5 * v * v);
    std::vector<double> wa(5), wb(4);
    for (std::size_t i = 0; i < 5; ++i) wa[i] = mu.weight(mu.find(std::vector<double>{a[i]}));
    for (std::size_t i = 0; i < 4; ++i) wb[i] = nu.weight(nu.find(std::vector<double>{b[i]}));
    EXPECT_NEAR(transport_cost(mu, nu, c), 0.7 * oracle::w1_line(a2, wa, b2, wb), 1e-10);
  }
}

}  // namespace
}  // namespace gammadiv
