// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "chain_barrier.hpp"
#include "detail.hpp"
#include "gammadiv/errors.hpp"
#include "gammadiv/gammadiv.hpp"
#include "gammadiv/optim.hpp"
#include "ground.hpp"

namespace gammadiv {

namespace {

using detail::Ground;

struct Pair {
  std::size_t a;
  std::size_t b;
};

// Dense problem over g_1..g_{n-1} with g_0 = 0 and the constraints
// g_a - g_b <= c(a, b) for the listed pairs.
optim::BarrierResult solve_pairs(const Ground& ground, const Eigen::MatrixXd& c,
                                 const std::vector<Pair>& pairs, int max_newton) {
  const auto n = static_cast<Eigen::Index>(ground.size());
  const Eigen::Index nv = n - 1;
  Eigen::VectorXd mu(n);
  Eigen::VectorXd nu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mu(i) = ground.mu[static_cast<std::size_t>(i)];
    nu(i) = ground.nu[static_cast<std::size_t>(i)];
  }

  optim::BarrierProblem prob;
  prob.objective = [mu, nu, n, nv](const Eigen::VectorXd& x, Eigen::VectorXd* grad,
                                   Eigen::MatrixXd* hess) {
    Eigen::VectorXd g(n);
    g(0) = 0.0;
    g.tail(nv) = x;
    double mx = -detail::kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (nu(i) > 0.0) mx = std::max(mx, g(i));
    }
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = nu(i) > 0.0 ? nu(i) * std::exp(g(i) - mx) : 0.0;
    const double z = p.sum();
    p /= z;
    if (grad) *grad = (p - mu).tail(nv);
    if (hess) {
      const Eigen::VectorXd q = p.tail(nv);
      *hess = Eigen::MatrixXd(q.asDiagonal()) - q * q.transpose();
    }
    return -mu.dot(g) + mx + std::log(z);
  };
  prob.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), nv);
  prob.b.resize(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(k);
    if (pairs[k].a > 0) prob.A(r, static_cast<Eigen::Index>(pairs[k].a) - 1) += 1.0;
    if (pairs[k].b > 0) prob.A(r, static_cast<Eigen::Index>(pairs[k].b) - 1) -= 1.0;
    prob.b(r) = c(static_cast<Eigen::Index>(pairs[k].a), static_cast<Eigen::Index>(pairs[k].b));
  }
  optim::BarrierOptions opt;
  opt.gap_tol = 1e-11;
  opt.max_newton = max_newton;
  return optim::minimize_barrier(prob, Eigen::VectorXd::Zero(nv), opt);
}

DivergenceReport dense_dual(const Ground& ground, const CostSpec& cost,
                            const SolverOptions& options) {
  const std::size_t n = ground.size();
  const Eigen::MatrixXd c = cost_matrix(cost, ground.dim, ground.coords, ground.coords);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !(c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) > 0.0)) {
        throw InvalidInput("cost vanishes between distinct support points");
      }
    }
  }

  // Start from every pair on small problems and from nearest neighbours on
  // large ones, then add violated pairs until none remain.
  std::vector<Pair> pairs;
  std::vector<char> in_set(n * n, 0);
  auto add = [&](std::size_t a, std::size_t b) {
    if (a != b && !in_set[a * n + b]) {
      in_set[a * n + b] = 1;
      pairs.push_back({a, b});
    }
  };
  constexpr std::size_t kDenseLimit = 64;
  constexpr std::size_t kNeighbours = 12;
  if (n <= kDenseLimit) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) add(a, b);
    }
  } else {
    std::vector<std::size_t> idx(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) idx[b] = b;
      std::partial_sort(idx.begin(), idx.begin() + kNeighbours + 1, idx.end(),
                        [&](std::size_t x, std::size_t y) {
                          return c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(x)) <
                                 c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(y));
                        });
      for (std::size_t r = 0; r <= kNeighbours; ++r) {
        add(a, idx[r]);
        add(idx[r], a);
      }
    }
  }

  const int max_newton = static_cast<int>(std::min<std::int64_t>(options.tol.max_iter, 1 << 30));
  std::int64_t steps = 0;
  std::vector<double> g(n, 0.0);
  const double viol_tol = 1e-12 * std::max(1.0, cost.scale());
  for (int round = 0;; ++round) {
    const optim::BarrierResult res = solve_pairs(ground, c, pairs, max_newton);
    steps += res.newton_steps;
    g[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) g[i] = res.x(static_cast<Eigen::Index>(i) - 1);
    std::size_t added = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && !in_set[a * n + b] &&
            g[a] - g[b] > c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - viol_tol) {
          add(a, b);
          ++added;
        }
      }
    }
    if (added == 0 || round >= 50) break;
  }
  return detail::report_from_potential(ground, std::move(g), cost, options.tol, "dual", steps);
}

DivergenceReport chain_dual(const Ground& ground, const CostSpec& cost,
                            const SolverOptions& options) {
  const std::size_t n = ground.size();
  detail::ChainProblem prob;
  prob.order = 1;
  prob.mu = ground.mu;
  prob.nu = ground.nu;
  prob.bound.resize(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    prob.bound[k] = cost.scale() * (cost.embed(ground.coords[k + 1]) - cost.embed(ground.coords[k]));
  }
  const int max_newton = static_cast<int>(std::min<std::int64_t>(options.tol.max_iter, 1 << 30));
  const detail::ChainResult res = detail::solve_chain_dual(prob, 1e-11, max_newton);
  return detail::report_from_potential(ground, res.g, cost, options.tol, "dual",
                                       res.newton_steps);
}

}  // namespace

DivergenceReport gamma_div_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                const CostSpec& cost, const SolverOptions& options) {
  const Ground ground = detail::make_ground(mu, nu, cost, options.tol);
  DivergenceReport report;
  if (nu.size() == 1) {
    report = detail::single_atom_report(ground, cost, options.tol, "dual");
  } else if (cost.chain_reducible(ground.dim)) {
    report = chain_dual(ground, cost, options);
  } else {
    report = dense_dual(ground, cost, options);
  }
  detail::finish_report(report, options);
  return report;
}

}  // namespace gammadiv
