// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <vector>

#include "chain_barrier.hpp"
#include "detail.hpp"
#include "gammadiv/gammadiv.hpp"
#include "gammadiv/optim.hpp"
#include "ground.hpp"
#include "transport_internal.hpp"

namespace gammadiv {

namespace {

using detail::Ground;

// max over the simplex of D(G lambda), where the columns of G are cuts.
Eigen::VectorXd solve_master(const Ground& ground, const Eigen::MatrixXd& cuts) {
  const Eigen::Index n = cuts.rows();
  const Eigen::Index L = cuts.cols();
  if (L == 1) return Eigen::VectorXd::Ones(1);
  Eigen::VectorXd mu(n);
  Eigen::VectorXd nu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mu(i) = ground.mu[static_cast<std::size_t>(i)];
    nu(i) = ground.nu[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd gmu = cuts.transpose() * mu;

  optim::BarrierProblem prob;
  prob.objective = [&cuts, gmu, nu, n](const Eigen::VectorXd& lam, Eigen::VectorXd* grad,
                                       Eigen::MatrixXd* hess) {
    const Eigen::VectorXd g = cuts * lam;
    double mx = -detail::kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (nu(i) > 0.0) mx = std::max(mx, g(i));
    }
    Eigen::VectorXd p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = nu(i) > 0.0 ? nu(i) * std::exp(g(i) - mx) : 0.0;
    const double z = p.sum();
    p /= z;
    const Eigen::VectorXd gp = cuts.transpose() * p;
    if (grad) *grad = gp - gmu;
    if (hess) {
      *hess = cuts.transpose() * p.asDiagonal() * cuts - gp * gp.transpose();
    }
    return -gmu.dot(lam) + mx + std::log(z);
  };
  prob.A = -Eigen::MatrixXd::Identity(L, L);
  prob.b = Eigen::VectorXd::Zero(L);
  prob.E = Eigen::MatrixXd::Ones(1, L);
  prob.e = Eigen::VectorXd::Ones(1);
  optim::BarrierOptions opt;
  opt.gap_tol = 1e-14;
  const optim::BarrierResult res =
      optim::minimize_barrier(prob, Eigen::VectorXd::Constant(L, 1.0 / static_cast<double>(L)), opt);
  return res.x;
}

}  // namespace

DivergenceReport gamma_div_primal(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                  const CostSpec& cost, const SolverOptions& options) {
  const Ground ground = detail::make_ground(mu, nu, cost, options.tol);
  if (nu.size() == 1) {
    DivergenceReport r = detail::single_atom_report(ground, cost, options.tol, "primal");
    detail::finish_report(r, options);
    return r;
  }
  const std::size_t n = ground.size();
  const auto ni = static_cast<Eigen::Index>(n);

  // Cut set: the zero potential, the transport potential at gamma = nu and,
  // on long chains, the banded interior-point solution, which spares the
  // master problem thousands of columns.
  std::vector<std::vector<double>> cuts;
  cuts.emplace_back(n, 0.0);
  cuts.push_back(detail::ground_transport(ground.coords, ground.dim, ground.mu, ground.nu, cost)
                     .potential);
  constexpr std::size_t kLongChain = 256;
  if (cost.chain_reducible(ground.dim) && n > kLongChain) {
    detail::ChainProblem prob;
    prob.mu = ground.mu;
    prob.nu = ground.nu;
    prob.bound.resize(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      prob.bound[k] =
          cost.scale() * (cost.embed(ground.coords[k + 1]) - cost.embed(ground.coords[k]));
    }
    cuts.push_back(detail::make_feasible(ground, detail::solve_chain_dual(prob).g, cost));
  }

  constexpr std::size_t kMaxCuts = 120;
  DivergenceReport best;
  bool have_best = false;
  std::vector<double> gbar(n);
  for (std::int64_t it = 1; it <= options.tol.max_iter; ++it) {
    Eigen::MatrixXd g(ni, static_cast<Eigen::Index>(cuts.size()));
    for (std::size_t l = 0; l < cuts.size(); ++l) {
      for (std::size_t i = 0; i < n; ++i) {
        g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = cuts[l][i] - cuts[l][0];
      }
    }
    const Eigen::VectorXd lam = solve_master(ground, g);
    const Eigen::VectorXd gb = g * lam;
    for (std::size_t i = 0; i < n; ++i) gbar[i] = gb(static_cast<Eigen::Index>(i));

    const std::vector<double> p = detail::tilted_weights(ground, gbar);
    const detail::GroundTransport ot =
        detail::ground_transport(ground.coords, ground.dim, ground.mu, p, cost);
    double re = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] > 0.0) re += p[i] * std::log(p[i] / ground.nu[i]);
    }
    const double upper = re + ot.value;
    const double lower = detail::dual_value(ground, gbar);
    const double gap = upper - lower;

    if (!have_best || gap < best.primal_dual_gap) {
      best = detail::report_from_potential(ground, gbar, cost, options.tol, "primal", it);
      best.value = best.re_part + best.w_part;
      have_best = true;
    }
    if (gap <= std::max(options.target_gap, 1e-12 * std::abs(upper))) break;

    // Keep the aggregate so that pruning never loses progress.
    if (cuts.size() >= kMaxCuts) {
      std::vector<std::vector<double>> kept;
      kept.push_back(gbar);
      std::vector<Eigen::Index> order(cuts.size());
      for (std::size_t l = 0; l < cuts.size(); ++l) order[l] = static_cast<Eigen::Index>(l);
      std::sort(order.begin(), order.end(),
                [&](Eigen::Index a, Eigen::Index b) { return lam(a) > lam(b); });
      for (std::size_t r = 0; r < kMaxCuts / 2; ++r) {
        kept.push_back(cuts[static_cast<std::size_t>(order[r])]);
      }
      cuts.swap(kept);
    }
    cuts.push_back(ot.potential);
    best.iterations = it;
  }
  detail::finish_report(best, options);
  return best;
}

}  // namespace gammadiv
