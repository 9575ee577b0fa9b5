// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ground.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "gammadiv/errors.hpp"
#include "transport_internal.hpp"

namespace gammadiv::detail {

Ground make_ground(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const CostSpec& cost, const Tolerances& tol) {
  if (mu.kind() != MeasureKind::kProbability || nu.kind() != MeasureKind::kProbability) {
    throw InvalidInput("divergence needs two probability measures");
  }
  if (mu.dim() != nu.dim()) throw InvalidInput("measures differ in dimension");
  if (mu.empty() || nu.empty()) throw InvalidInput("empty measure");
  cost.check_points(mu.dim(), mu.coords());
  cost.check_points(nu.dim(), nu.coords());
  const PointUnion u = merge_points(mu.dim(), mu.coords(), nu.coords(), tol.point_dedup_eps);
  Ground g;
  g.dim = mu.dim();
  g.coords = u.coords;
  g.mu.assign(u.size(), 0.0);
  g.nu.assign(u.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) g.mu[u.from_a[i]] += mu.weight(i);
  for (std::size_t j = 0; j < nu.size(); ++j) g.nu[u.from_b[j]] += nu.weight(j);
  g.nu_index = u.from_b;
  return g;
}

double dual_value(const Ground& ground, const std::vector<double>& g) {
  double lin = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) lin += ground.mu[i] * g[i];
  return lin - log_sum_exp(g, ground.nu);
}

std::vector<double> tilted_weights(const Ground& ground, const std::vector<double>& g) {
  const double lz = log_sum_exp(g, ground.nu);
  std::vector<double> p(g.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (ground.nu[i] > 0.0) {
      p[i] = ground.nu[i] * std::exp(g[i] - lz);
      total += p[i];
    }
  }
  for (double& v : p) v /= total;
  return p;
}

std::vector<double> make_feasible(const Ground& ground, const std::vector<double>& g,
                                  const CostSpec& cost) {
  const std::size_t n = g.size();
  std::vector<double> out(g);
  if (cost.chain_reducible(ground.dim)) {
    // Two sweeps of running minima realize min_y { g(y) + |S(x) - S(y)| }.
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = cost.scale() * cost.embed(ground.coords[i]);
    double run = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      run = std::min(run, g[i] - s[i]);
      out[i] = std::min(out[i], run + s[i]);
    }
    run = kInf;
    for (std::size_t i = n; i-- > 0;) {
      run = std::min(run, g[i] + s[i]);
      out[i] = std::min(out[i], run - s[i]);
    }
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto x = row(ground.coords, ground.dim, i);
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) out[i] = std::min(out[i], g[j] + cost(x, row(ground.coords, ground.dim, j)));
    }
  }
  return out;
}

DiscreteMeasure ground_measure(const Ground& ground, const std::vector<double>& w,
                               const Tolerances& tol) {
  std::vector<double> coords;
  std::vector<double> weights;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) {
      auto p = row(ground.coords, ground.dim, i);
      coords.insert(coords.end(), p.begin(), p.end());
      weights.push_back(w[i]);
    }
  }
  return DiscreteMeasure::probability(ground.dim, std::move(coords), std::move(weights), tol);
}

DivergenceReport report_from_potential(const Ground& ground, std::vector<double> g,
                                       const CostSpec& cost, const Tolerances& tol,
                                       std::string method, std::int64_t iterations) {
  g = make_feasible(ground, g, cost);
  const double shift = g[0];
  for (double& v : g) v -= shift;

  const std::vector<double> p = tilted_weights(ground, g);
  DivergenceReport r;
  r.value = dual_value(ground, g);
  double re = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) re += p[i] * std::log(p[i] / ground.nu[i]);
  }
  r.re_part = std::max(re, 0.0);
  r.w_part = ground_transport(ground.coords, ground.dim, ground.mu, p, cost).value;
  r.primal_dual_gap = r.re_part + r.w_part - r.value;
  r.gamma_star = ground_measure(ground, p, tol);
  r.g_star = Potential(ground.dim, ground.coords, std::move(g), cost, tol);
  r.iterations = iterations;
  r.method = std::move(method);
  return r;
}

DivergenceReport single_atom_report(const Ground& ground, const CostSpec& cost,
                                    const Tolerances& tol, std::string method) {
  const std::size_t y = ground.nu_index.front();
  std::vector<double> g(ground.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = cost(row(ground.coords, ground.dim, i), row(ground.coords, ground.dim, y));
  }
  return report_from_potential(ground, std::move(g), cost, tol, std::move(method), 0);
}

void finish_report(const DivergenceReport& report, const SolverOptions& options) {
  const double allowed = options.tol.gd_tol * std::max(1.0, std::abs(report.value) / 10.0);
  if (!(std::abs(report.primal_dual_gap) <= allowed)) {
    std::ostringstream os;
    os << report.method << " solver stopped with certified gap "
       << report.primal_dual_gap << " after " << report.iterations << " iterations";
    throw SolverNotConverged(os.str(), report);
  }
}

}  // namespace gammadiv::detail
