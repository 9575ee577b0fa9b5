// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Variance-constrained sensitivity: maximize sum g p' over 1-Lipschitz g with
// Var_p(g) <= Var_p(f), then read q' off the multiplier of the variance
// constraint.

#include <algorithm>
#include <cmath>
#include <vector>

#include "detail.hpp"
#include "gammadiv/optim.hpp"
#include "gammadiv/uqstatic.hpp"

namespace gammadiv {

namespace {

constexpr double kActiveSlack = 1e-7;
constexpr double kEps = 2.220446049250313e-16;

double weighted_variance(const std::vector<double>& p, const std::vector<double>& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * g[i];
  double v = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) v += p[i] * (g[i] - m) * (g[i] - m);
  return v;
}

void check_inputs(std::size_t dim, const std::vector<double>& points, const std::vector<double>& p,
                  const std::vector<double>& p_prime) {
  const std::size_t n = p.size();
  if (n == 0 || dim == 0 || points.size() != n * dim || p_prime.size() != n) {
    throw InvalidInput("sensitivity: inconsistent sizes");
  }
  double sp = 0.0;
  double sq = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(p[i] > 0.0) || !std::isfinite(p_prime[i])) {
      throw InvalidInput("sensitivity: p must be positive and p' finite");
    }
    sp += p[i];
    sq += p_prime[i];
    scale = std::max(scale, std::abs(p_prime[i]));
  }
  if (std::abs(sp - 1.0) > 1e-10) throw InvalidInput("sensitivity: p must sum to one");
  if (std::abs(sq) > 1e-10 * std::max(1.0, scale)) {
    throw InvalidInput("sensitivity: p' must sum to zero");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (detail::euclidean(detail::row(points, dim, i), detail::row(points, dim, j)) <= 1e-12) {
        throw InvalidInput("sensitivity: points must be distinct");
      }
    }
  }
}

}  // namespace

std::string to_string(SensitivityCase c) {
  switch (c) {
    case SensitivityCase::kTransportOnly:
      return "transport-only";
    case SensitivityCase::kEntropyOnly:
      return "entropy-only";
    case SensitivityCase::kMixed:
      return "mixed";
  }
  return "unknown";
}

SensitivitySolution sensitivity_minmax(std::size_t dim, const std::vector<double>& points,
                                       const std::vector<double>& p,
                                       const std::vector<double>& p_prime,
                                       const std::vector<double>& f) {
  check_inputs(dim, points, p, p_prime);
  const std::size_t n = p.size();
  if (f.size() != n) throw InvalidInput("sensitivity: f must have one value per point");
  const double var_f = weighted_variance(p, f);

  SensitivitySolution out;
  out.g_star.assign(n, 0.0);
  out.q_prime_star.assign(n, 0.0);
  double pscale = 0.0;
  for (double v : p_prime) pscale = std::max(pscale, std::abs(v));
  if (n == 1 || pscale == 0.0) return out;
  if (!(var_f > 0.0)) {
    // Only constants are admissible; the entropy side absorbs all of p'.
    out.q_prime_star = p_prime;
    out.which = SensitivityCase::kEntropyOnly;
    out.variance_active = true;
    return out;
  }

  const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> dist;
  double dscale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      pairs.emplace_back(i, j);
      dist.push_back(detail::euclidean(detail::row(points, dim, i), detail::row(points, dim, j)));
      dscale = std::max(dscale, dist.back());
    }
  }

  // Free variables are g_2..g_n; g_1 = 0.
  optim::BarrierProblem prob;
  prob.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), m);
  prob.b = Eigen::VectorXd(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [i, j] = pairs[r];
    const auto row = static_cast<Eigen::Index>(r);
    if (i > 0) prob.A(row, static_cast<Eigen::Index>(i - 1)) += 1.0;
    if (j > 0) prob.A(row, static_cast<Eigen::Index>(j - 1)) -= 1.0;
    prob.b(row) = dist[r];
  }
  optim::QuadraticConstraint qc;
  qc.P = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const double pa = p[static_cast<std::size_t>(a) + 1];
    for (Eigen::Index b = 0; b < m; ++b) {
      qc.P(a, b) = -2.0 * pa * p[static_cast<std::size_t>(b) + 1];
    }
    qc.P(a, a) += 2.0 * pa;
  }
  qc.q = Eigen::VectorXd::Zero(m);
  qc.r = -var_f;
  prob.quadratic.push_back(qc);
  Eigen::VectorXd c(m);
  for (Eigen::Index a = 0; a < m; ++a) c(a) = -p_prime[static_cast<std::size_t>(a) + 1];
  prob.objective = [c](const Eigen::VectorXd& x, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
    if (grad) *grad = c;
    if (hess) *hess = Eigen::MatrixXd::Zero(x.size(), x.size());
    return c.dot(x);
  };
  optim::BarrierOptions opts;
  opts.gap_tol = 1e-14 * std::max(1.0, pscale * dscale);
  const auto res = optim::minimize_barrier(prob, Eigen::VectorXd::Zero(m), opts);
  if (!res.converged) throw NonConvergence("sensitivity: interior-point solve did not converge");

  for (Eigen::Index a = 0; a < m; ++a) out.g_star[static_cast<std::size_t>(a) + 1] = res.x(a);
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) bound += out.g_star[i] * p_prime[i];
  out.bound = bound;
  out.variance_multiplier = res.quad_multipliers(0);

  double lip_slack = detail::kInf;
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    const auto [i, j] = pairs[r];
    lip_slack = std::min(lip_slack, dist[r] - (out.g_star[i] - out.g_star[j]));
  }
  const double var_g = weighted_variance(p, out.g_star);
  out.lipschitz_active = lip_slack <= kActiveSlack * dscale;
  out.variance_active = var_f - var_g <= kActiveSlack * var_f;

  if (out.variance_active && !out.lipschitz_active) {
    out.which = SensitivityCase::kEntropyOnly;
    out.q_prime_star = p_prime;
  } else if (out.variance_active) {
    out.which = SensitivityCase::kMixed;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += p[i] * out.g_star[i];
    std::vector<double> dir(n);
    for (std::size_t i = 0; i < n; ++i) dir[i] = 2.0 * p[i] * (out.g_star[i] - mean);
    // Multipliers read off the far end of the central path are swamped by
    // rounding in the slacks, so theta is refit on the exact inner value,
    // which is convex in theta.
    auto inner = [&](double theta) {
      std::vector<double> q(n);
      for (std::size_t i = 0; i < n; ++i) q[i] = theta * dir[i];
      return saddle_check(dim, points, p, p_prime, var_f, out.g_star, q).inner_sup;
    };
    double lo = 0.0;
    double hi = std::max(1.0, 2.0 * out.variance_multiplier);
    while (inner(hi) < inner(0.5 * hi) && hi < 1e12) hi *= 2.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = hi - phi * (hi - lo);
    double b = lo + phi * (hi - lo);
    double fa = inner(a);
    double fb = inner(b);
    for (int it = 0; it < 200 && hi - lo > 4.0 * kEps * hi; ++it) {
      if (fa <= fb) {
        hi = b;
        b = a;
        fb = fa;
        a = hi - phi * (hi - lo);
        fa = inner(a);
      } else {
        lo = a;
        a = b;
        fa = fb;
        b = lo + phi * (hi - lo);
        fb = inner(b);
      }
    }
    out.variance_multiplier = fa <= fb ? a : b;
    for (std::size_t i = 0; i < n; ++i) out.q_prime_star[i] = out.variance_multiplier * dir[i];
  } else {
    out.which = SensitivityCase::kTransportOnly;
    out.variance_multiplier = 0.0;
  }
  return out;
}

SaddleCheck saddle_check(std::size_t dim, const std::vector<double>& points,
                         const std::vector<double>& p, const std::vector<double>& p_prime,
                         double variance, const std::vector<double>& g_star,
                         const std::vector<double>& q_prime_star) {
  check_inputs(dim, points, p, p_prime);
  const std::size_t n = p.size();
  if (g_star.size() != n || q_prime_star.size() != n || !(variance >= 0.0)) {
    throw InvalidInput("saddle_check: inconsistent sizes");
  }
  SaddleCheck out;
  double norm = 0.0;
  std::vector<double> diff(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    norm += q_prime_star[i] * q_prime_star[i] / p[i];
    diff[i] = p_prime[i] - q_prime_star[i];
    scale = std::max(scale, std::abs(diff[i]));
  }
  double transport = 0.0;
  if (scale > 0.0) {
    const auto rho = DiscreteMeasure::signed_measure(dim, points, diff);
    transport = signed_transport(rho, CostSpec::scaled_metric(1.0));
  }
  out.inner_sup = std::sqrt(variance) * std::sqrt(norm) + transport;

  // inf over zero-sum q' of sqrt(V) |q'|_{1/p} - (g - mean) . q' is 0 when
  // Var_p(g) <= V and -infinity otherwise.
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += g_star[i] * p_prime[i];
  const double var_g = weighted_variance(p, g_star);
  out.outer_inf = var_g <= variance * (1.0 + 1e-9) + 1e-15 ? dot : -detail::kInf;
  return out;
}

}  // namespace gammadiv
