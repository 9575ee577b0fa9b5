// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gammadiv/entropy.hpp"
#include "gammadiv/uqstatic.hpp"
#include "oracles.hpp"

namespace gammadiv {
namespace {

const CostSpec kUnit = CostSpec::scaled_metric(1.0);

// 0.8-Lipschitz for |x - y|.
double smooth_f(double x) { return 0.4 * std::sin(2.0 * x); }

Observable observable_on(const std::vector<double>& xs) {
  std::vector<double> vals;
  for (double x : xs) vals.push_back(smooth_f(x));
  return Observable(1, xs, vals);
}

std::vector<double> xs_of(const DiscreteMeasure& m) {
  std::vector<double> xs;
  for (std::size_t i = 0; i < m.size(); ++i) xs.push_back(m.point(i)[0]);
  return xs;
}

TEST(LogGrid, Endpoints) {
  const auto g = log_grid(1e-2, 1e2, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-2);
  EXPECT_NEAR(g[2], 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.back(), 1e2);
}

TEST(UqBounds, SameMeasure) {
  const auto nu = DiscreteMeasure::on_line({0.0, 0.5, 1.0, 2.0}, {0.1, 0.4, 0.3, 0.2});
  const auto f = observable_on(xs_of(nu));
  const auto r = uq_bounds(f, nu, nu, kUnit, log_grid(1e-2, 1e2, 9));
  EXPECT_GE(r.upper, -1e-9);
  EXPECT_LE(r.lower, 1e-9);
  EXPECT_LE(r.upper, 1e-6);
  EXPECT_GE(r.lower, -1e-6);
}

TEST(UqBounds, ValidAndTighterThanTransportAndEntropy) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  const auto grid = log_grid(1e-2, 1e2, 11);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<double> xs(5);
    for (double& x : xs) x = u(rng);
    const auto nu = DiscreteMeasure::on_line(xs, oracle::random_simplex(5, rng));
    const auto mu = DiscreteMeasure::on_line(xs, oracle::random_simplex(5, rng));
    const auto f = observable_on(xs_of(nu));
    const auto r = uq_bounds(f, nu, mu, kUnit, grid);
    ASSERT_TRUE(r.observed.has_value());
    EXPECT_LE(r.class_violation, 0.0);
    EXPECT_LE(*r.observed, r.upper + 1e-9);
    EXPECT_GE(*r.observed, r.lower - 1e-9);
    const double w = transport_cost(mu, nu, kUnit);
    EXPECT_LE(r.upper, w + 1e-9);
    EXPECT_GE(r.lower, -w - 1e-9);
    // Entropy-only bound on the same grid, computed from scratch.
    const auto fv = *f.values_on(nu);
    const double ef = expectation(nu, fv);
    const double re = oracle::kl(mu.weights(), nu.weights());
    double rbound = oracle::kInf;
    for (double c : grid) {
      double s = 0.0;
      for (std::size_t i = 0; i < nu.size(); ++i) s += nu.weight(i) * std::exp(c * (fv[i] - ef));
      rbound = std::min(rbound, (std::log(s) + re) / c);
    }
    EXPECT_LE(r.upper, rbound + 1e-9);
    for (const auto& pt : r.sweep) EXPECT_LE(pt.lower, pt.upper + 1e-12);
  }
}

TEST(UqBounds, DisjointSupportsUseTransport) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  const auto mu = DiscreteMeasure::on_line({0.3, 1.4}, {0.5, 0.5});
  const auto f = observable_on({0.0, 0.3, 1.0, 1.4});
  const auto r = uq_bounds(f, nu, mu, kUnit, log_grid(1e-2, 1e2, 9));
  ASSERT_TRUE(r.observed.has_value());
  EXPECT_LE(*r.observed, r.upper + 1e-9);
  EXPECT_GE(*r.observed, r.lower - 1e-9);
  EXPECT_LE(r.upper, w1_cdf(mu, nu) + 1e-9);
}

// sqrt(2 V) sqrt(R(gamma || nu)) + W(mu, gamma), minimized by a coarse grid
// followed by a shrinking pattern search.
double linearized_oracle(const std::vector<double>& mx, const std::vector<double>& mw,
                         const std::vector<double>& nx, const std::vector<double>& nw, double var) {
  auto obj = [&](const std::vector<double>& g) {
    return std::sqrt(2.0 * var * std::max(0.0, oracle::kl(g, nw))) + oracle::w1_line(mx, mw, nx, g);
  };
  std::vector<double> best = nw;
  double fb = obj(best);
  oracle::simplex_grid(nx.size(), 60, [&](const std::vector<double>& g) {
    const double v = obj(g);
    if (v < fb) {
      fb = v;
      best = g;
    }
  });
  for (double step = 1.0 / 60.0; step > 1e-9; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < best.size(); ++i) {
        for (std::size_t j = 0; j < best.size(); ++j) {
          if (i == j || best[j] < step) continue;
          std::vector<double> g = best;
          g[i] += step;
          g[j] -= step;
          const double v = obj(g);
          if (v < fb - 1e-15) {
            fb = v;
            best = g;
            improved = true;
          }
        }
      }
    }
  }
  return fb;
}

TEST(LinearizedBound, SameMeasureAndTransportCap) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0, 2.0}, {0.3, 0.3, 0.4});
  const auto f = observable_on(xs_of(nu));
  EXPECT_NEAR(linearized_bound(f, nu, nu, kUnit).value, 0.0, 1e-9);
  const auto mu = DiscreteMeasure::on_line({0.5, 2.5}, {0.5, 0.5});
  EXPECT_LE(linearized_bound(f, nu, mu, kUnit).value, w1_cdf(mu, nu) + 1e-12);
}

TEST(LinearizedBound, MatchesBruteForce) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> xs(4), ys(4);
    for (double& x : xs) x = u(rng);
    for (double& y : ys) y = u(rng);
    const auto nu = DiscreteMeasure::on_line(xs, oracle::random_simplex(4, rng));
    const auto mu = DiscreteMeasure::on_line(ys, oracle::random_simplex(4, rng));
    const auto f = observable_on(xs_of(nu));
    const auto fv = *f.values_on(nu);
    const double var = variance(nu, fv);
    const auto lb = linearized_bound(f, nu, mu, kUnit);
    const double ref = linearized_oracle(xs_of(mu), mu.weights(), xs_of(nu), nu.weights(), var);
    EXPECT_NEAR(lb.value, ref, 1e-3);
    EXPECT_NEAR(lb.value, std::sqrt(2.0 * var * lb.re_part) + lb.w_part, 1e-9);
  }
}

TEST(LinearizedBound, RejectsConstantObservable) {
  const auto nu = DiscreteMeasure::on_line({0.0, 1.0}, {0.5, 0.5});
  const Observable f(1, {0.0, 1.0}, {2.0, 2.0});
  EXPECT_THROW(linearized_bound(f, nu, nu, kUnit), InvalidInput);
}

TEST(Sensitivity, ZeroDirection) {
  const auto s = sensitivity_minmax(1, {0.0, 1.0, 3.0}, {0.2, 0.3, 0.5}, {0.0, 0.0, 0.0}, {0.0, 1.0, 2.0});
  EXPECT_NEAR(s.bound, 0.0, 1e-9);
  for (double q : s.q_prime_star) EXPECT_NEAR(q, 0.0, 1e-9);
}

TEST(Sensitivity, TwoPointInstance) {
  for (double t : {0.05, 0.3, 1.0}) {
    const auto s = sensitivity_minmax(1, {0.0, 1.0}, {0.5, 0.5}, {-t, t}, {0.0, 1.0});
    // Brute force over g_2 in [-1, 1] with Var = g_2^2 / 4 <= 1/4.
    double ref = -oracle::kInf;
    for (int i = 0; i <= 20000; ++i) {
      const double g2 = -1.0 + i * 1e-4;
      ref = std::max(ref, g2 * t);
    }
    EXPECT_NEAR(s.bound, ref, 1e-9);
    EXPECT_NEAR(s.g_star[1], 1.0, 1e-6);
    EXPECT_EQ(s.which, SensitivityCase::kMixed);
    EXPECT_TRUE(s.lipschitz_active);
    EXPECT_TRUE(s.variance_active);
  }
}

TEST(Sensitivity, MatchesNestedInfSup) {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 4;
    std::vector<double> xs(n), f(n), pp(n);
    for (double& x : xs) x = u(rng);
    const auto p = oracle::random_simplex(n, rng);
    double s = 0.0;
    for (double& v : pp) s += (v = n01(rng));
    for (double& v : pp) v -= s / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = (trial % 2 == 0 ? 0.3 : 1.0) * smooth_f(xs[i]);
    double ef = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) ef += p[i] * f[i];
    for (std::size_t i = 0; i < n; ++i) var += p[i] * (f[i] - ef) * (f[i] - ef);
    Eigen::MatrixXd d(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) d(i, j) = std::abs(xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)]);
    }
    const auto sol = sensitivity_minmax(1, xs, p, pp, f);
    const double ref = oracle::nested_inf_sup(d, p, pp, var);
    EXPECT_NEAR(sol.bound, ref, 1e-3);
    const auto sc = saddle_check(1, xs, p, pp, var, sol.g_star, sol.q_prime_star);
    EXPECT_NEAR(sc.inner_sup, sol.bound, 1e-6);
    EXPECT_NEAR(sc.outer_inf, sol.bound, 1e-6);
    double qs = 0.0;
    for (double q : sol.q_prime_star) qs += q;
    EXPECT_NEAR(qs, 0.0, 1e-9);
  }
}

TEST(Sensitivity, CaseTags) {
  // Tiny variance budget: only the variance constraint binds.
  const std::vector<double> pp{-0.1, 0.05, 0.05};
  const auto e = sensitivity_minmax(1, {0.0, 1.0, 2.0}, {0.3, 0.4, 0.3}, pp, {0.0, 0.01, 0.02});
  EXPECT_EQ(e.which, SensitivityCase::kEntropyOnly);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(e.q_prime_star[i], pp[i], 1e-9);
  // Huge budget: only the Lipschitz constraints bind.
  const auto t = sensitivity_minmax(1, {0.0, 1.0, 2.0}, {0.3, 0.4, 0.3}, pp, {0.0, 10.0, 20.0});
  EXPECT_EQ(t.which, SensitivityCase::kTransportOnly);
  for (double q : t.q_prime_star) EXPECT_DOUBLE_EQ(q, 0.0);
  EXPECT_NEAR(t.bound, 0.05 * 1.0 + 0.05 * 2.0, 1e-6);
}

TEST(Sensitivity, MonotoneInVariance) {
  const std::vector<double> xs{0.0, 0.7, 1.1, 2.0};
  const std::vector<double> p{0.25, 0.25, 0.3, 0.2};
  const std::vector<double> pp{0.1, -0.2, 0.05, 0.05};
  double prev = -1.0;
  for (double scale : {0.01, 0.1, 0.3, 1.0, 3.0}) {
    std::vector<double> f;
    for (double x : xs) f.push_back(scale * smooth_f(x));
    const double b = sensitivity_minmax(1, xs, p, pp, f).bound;
    EXPECT_GE(b, prev - 1e-9);
    prev = b;
  }
}

TEST(Sensitivity, BoundsObservableChange) {
  // nu = sum p_i delta_{x_i}, mu_eps = sum (p_i + eps p'_i) delta_{x_i + eps x'_i}.
  const std::vector<double> xs{0.0, 0.5, 1.3};
  const std::vector<double> vel{0.2, -0.1, 0.4};
  const std::vector<double> p{0.3, 0.3, 0.4};
  const std::vector<double> pp{0.2, -0.3, 0.1};
  std::vector<double> f;
  for (double x : xs) f.push_back(smooth_f(x));
  const double bound = sensitivity_minmax(1, xs, p, pp, f).bound;
  double motion = 0.0;
  for (std::size_t i = 0; i < 3; ++i) motion += p[i] * std::abs(vel[i]);
  for (double eps : {1e-2, 1e-3}) {
    double diff = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      diff += (p[i] + eps * pp[i]) * smooth_f(xs[i] + eps * vel[i]) - p[i] * smooth_f(xs[i]);
    }
    EXPECT_LE(std::abs(diff) / eps, bound + 0.8 * motion + 10.0 * eps);
  }
}

TEST(WassersteinFirstOrder, Examples) {
  const std::vector<double> xs{0.0, 1.0, 2.5};
  const std::vector<double> p{0.3, 0.3, 0.4};
  const std::vector<double> pp{0.1, -0.2, 0.1};
  const std::vector<double> vel{0.5, -1.0, 2.0};
  const std::vector<double> still{0.0, 0.0, 0.0};
  const double eps = 1e-3;
  EXPECT_NEAR(wasserstein_first_order(1, xs, vel, p, pp, pp, eps), eps * (0.15 + 0.3 + 0.8), 1e-15);
  const std::vector<double> qp{0.0, 0.0, 0.0};
  // rho - rho~ = p' moves 0.1 from 1 to 0 and 0.1 from 1 to 2.5.
  EXPECT_NEAR(wasserstein_first_order(1, xs, still, p, pp, qp, eps), eps * (0.1 + 0.15), 1e-12);
}

TEST(WassersteinFirstOrder, MatchesExactTransport) {
  const std::vector<double> xs{0.0, 0.4, 1.0, 0.3, 0.8, 0.2};  // three points in the plane
  const std::vector<double> vel{1.0, 0.0, 0.0, -1.0, 0.5, 0.5};
  const std::vector<double> p{0.3, 0.3, 0.4};
  const std::vector<double> pp{0.2, -0.1, -0.1};
  const std::vector<double> qp{0.05, 0.05, -0.1};
  const double eps = 1e-3;
  std::vector<double> moved(6);
  for (std::size_t i = 0; i < 6; ++i) moved[i] = xs[i] + eps * vel[i];
  std::vector<double> wm(3), wg(3);
  for (std::size_t i = 0; i < 3; ++i) {
    wm[i] = p[i] + eps * pp[i];
    wg[i] = p[i] + eps * qp[i];
  }
  const auto me = DiscreteMeasure::probability(2, moved, wm);
  const auto ge = DiscreteMeasure::probability(2, xs, wg);
  const double exact = ot_lp(me, ge, kUnit).cost;
  const double pred = wasserstein_first_order(2, xs, vel, p, pp, qp, eps);
  EXPECT_LE(std::abs(pred - exact) / eps, 0.05);
}

}  // namespace
}  // namespace gammadiv
