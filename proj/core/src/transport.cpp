// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "gammadiv/errors.hpp"
#include "gammadiv/transport.hpp"
#include "network_simplex.hpp"
#include "transport_internal.hpp"

namespace gammadiv {

namespace {

void require_probability(const DiscreteMeasure& m, const char* what) {
  if (m.kind() != MeasureKind::kProbability) {
    throw InvalidInput(std::string(what) + " must be a probability measure");
  }
}

// Chain-reducible costs: with ground points sorted, the optimal potential
// moves by -/+ the neighbour cost according to the sign of F_mu - F_nu.
detail::GroundTransport chain_transport(const std::vector<double>& ground,
                                        const std::vector<double>& mu_w,
                                        const std::vector<double>& nu_w,
                                        const CostSpec& cost) {
  detail::GroundTransport out;
  const std::size_t n = ground.size();
  out.potential.assign(n, 0.0);
  double fmu = 0.0;
  double fnu = 0.0;
  double value = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    fmu += mu_w[i];
    fnu += nu_w[i];
    const double gap = cost.scale() * (cost.embed(ground[i + 1]) - cost.embed(ground[i]));
    const double diff = fmu - fnu;
    value += std::abs(diff) * gap;
    const double slope = diff > 0.0 ? -1.0 : (diff < 0.0 ? 1.0 : 0.0);
    out.potential[i + 1] = out.potential[i] + slope * gap;
  }
  out.value = value;
  return out;
}

}  // namespace

namespace detail {

GroundTransport ground_transport(const std::vector<double>& ground,
                                 std::size_t dim, const std::vector<double>& mu_w,
                                 const std::vector<double>& nu_w,
                                 const CostSpec& cost) {
  if (cost.chain_reducible(dim)) return chain_transport(ground, mu_w, nu_w, cost);

  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<double> a;
  std::vector<double> b;
  const std::size_t n = mu_w.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (mu_w[i] > 0.0) {
      rows.push_back(i);
      a.push_back(mu_w[i]);
    }
    if (nu_w[i] > 0.0) {
      cols.push_back(i);
      b.push_back(nu_w[i]);
    }
  }
  Eigen::MatrixXd c(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t s = 0; s < cols.size(); ++s) {
      c(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
          cost(row(ground, dim, rows[r]), row(ground, dim, cols[s]));
    }
  }
  const TransportSolution sol = solve_transport(a, b, c);

  // Column duals give g = -v on supp(nu); the largest Lipschitz extension
  // from there is feasible everywhere and keeps the dual value.
  GroundTransport out;
  out.potential.assign(n, kInf);
  for (std::size_t z = 0; z < n; ++z) {
    auto pz = row(ground, dim, z);
    double best = kInf;
    for (std::size_t s = 0; s < cols.size(); ++s) {
      best = std::min(best, -sol.v[s] + cost(pz, row(ground, dim, cols[s])));
    }
    out.potential[z] = best;
  }
  double value = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    value += (mu_w[z] - nu_w[z]) * out.potential[z];
  }
  out.value = std::max(value, 0.0);
  return out;
}

}  // namespace detail

double w1_cdf(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) {
    throw InvalidInput("w1_cdf needs one-dimensional measures");
  }
  require_probability(mu, "mu");
  require_probability(nu, "nu");
  const auto u = detail::merge_points(1, mu.coords(), nu.coords(), 0.0);
  std::vector<double> mw(u.size(), 0.0);
  std::vector<double> nw(u.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) mw[u.from_a[i]] = mu.weight(i);
  for (std::size_t j = 0; j < nu.size(); ++j) nw[u.from_b[j]] = nu.weight(j);
  return chain_transport(u.coords, mw, nw, CostSpec::scaled_metric(1.0)).value;
}

TransportPlan ot_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const CostSpec& cost, const Tolerances& tol) {
  require_probability(mu, "mu");
  require_probability(nu, "nu");
  if (mu.dim() != nu.dim()) throw InvalidInput("measure dimensions differ");
  cost.check_points(mu.dim(), mu.coords());
  cost.check_points(nu.dim(), nu.coords());
  const Eigen::MatrixXd c = cost_matrix(cost, mu.dim(), mu.coords(), nu.coords());
  const detail::TransportSolution sol =
      detail::solve_transport(mu.weights(), nu.weights(), c);
  TransportPlan plan{mu, nu, sol.flow, sol.cost};
  // Marginal residuals stay at rounding level; anything larger means the
  // simplex lost feasibility.
  const Eigen::VectorXd rs = plan.plan.rowwise().sum();
  const Eigen::VectorXd cs = plan.plan.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < rs.size(); ++i) {
    if (std::abs(rs(i) - mu.weight(static_cast<std::size_t>(i))) > tol.mass_tol) {
      throw NonConvergence("network simplex: row marginal residual too large");
    }
  }
  for (Eigen::Index j = 0; j < cs.size(); ++j) {
    if (std::abs(cs(j) - nu.weight(static_cast<std::size_t>(j))) > tol.mass_tol) {
      throw NonConvergence("network simplex: column marginal residual too large");
    }
  }
  return plan;
}

DualSolution ot_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const CostSpec& cost, const Tolerances& tol) {
  require_probability(mu, "mu");
  require_probability(nu, "nu");
  if (mu.dim() != nu.dim()) throw InvalidInput("measure dimensions differ");
  cost.check_points(mu.dim(), mu.coords());
  cost.check_points(nu.dim(), nu.coords());
  const auto u =
      detail::merge_points(mu.dim(), mu.coords(), nu.coords(), tol.point_dedup_eps);
  std::vector<double> mw(u.size(), 0.0);
  std::vector<double> nw(u.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) mw[u.from_a[i]] = mu.weight(i);
  for (std::size_t j = 0; j < nu.size(); ++j) nw[u.from_b[j]] = nu.weight(j);
  detail::GroundTransport gt = detail::ground_transport(u.coords, mu.dim(), mw, nw, cost);
  const double shift = gt.potential.empty() ? 0.0 : gt.potential[0];
  for (double& g : gt.potential) g -= shift;
  return {gt.value, Potential(mu.dim(), u.coords, std::move(gt.potential), cost, tol)};
}

double transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const CostSpec& cost, const Tolerances& tol) {
  require_probability(mu, "mu");
  require_probability(nu, "nu");
  if (cost.chain_reducible(mu.dim())) {
    cost.check_points(1, mu.coords());
    cost.check_points(1, nu.coords());
    const auto u = detail::merge_points(1, mu.coords(), nu.coords(), tol.point_dedup_eps);
    std::vector<double> mw(u.size(), 0.0);
    std::vector<double> nw(u.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) mw[u.from_a[i]] = mu.weight(i);
    for (std::size_t j = 0; j < nu.size(); ++j) nw[u.from_b[j]] = nu.weight(j);
    return chain_transport(u.coords, mw, nw, cost).value;
  }
  return ot_lp(mu, nu, cost, tol).cost;
}

double signed_transport(const DiscreteMeasure& rho, const CostSpec& cost,
                        const Tolerances& tol) {
  std::vector<double> pos_c;
  std::vector<double> neg_c;
  std::vector<double> pos_w;
  std::vector<double> neg_w;
  double mp = 0.0;
  double mn = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    auto p = rho.point(i);
    const double w = rho.weight(i);
    if (w > 0.0) {
      pos_c.insert(pos_c.end(), p.begin(), p.end());
      pos_w.push_back(w);
      mp += w;
    } else if (w < 0.0) {
      neg_c.insert(neg_c.end(), p.begin(), p.end());
      neg_w.push_back(-w);
      mn += -w;
    }
  }
  if (mp <= 0.0 || mn <= 0.0) return 0.0;
  for (double& w : pos_w) w /= mp;
  for (double& w : neg_w) w /= mn;
  const auto a = DiscreteMeasure::probability(rho.dim(), pos_c, pos_w, tol);
  const auto b = DiscreteMeasure::probability(rho.dim(), neg_c, neg_w, tol);
  return 0.5 * (mp + mn) * transport_cost(a, b, cost, tol);
}

}  // namespace gammadiv
