// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/uqstatic.hpp"

#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "gammadiv/entropy.hpp"
#include "parallel.hpp"

namespace gammadiv {

namespace {

std::vector<double> values_on_nu(const Observable& f, const DiscreteMeasure& nu) {
  auto v = f.values_on(nu);
  if (!v) throw InvalidInput("observable is not defined on every atom of nu");
  return *v;
}

double class_violation(const Observable& f, const CostSpec& cost) {
  double worst = -detail::kInf;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      if (i == j) continue;
      worst = std::max(worst, f.value(i) - f.value(j) - cost(f.point(i), f.point(j)));
    }
  }
  return f.size() < 2 ? 0.0 : worst;
}

struct GridEval {
  double risk_up = 0.0;
  double risk_lo = 0.0;
  DivergenceReport div;
};

}  // namespace

Observable::Observable(std::size_t dim, std::vector<double> coords, std::vector<double> values)
    : dim_(dim), coords_(std::move(coords)), values_(std::move(values)) {
  if (dim_ == 0 || coords_.size() != dim_ * values_.size()) {
    throw InvalidInput("observable: coordinate count does not match values");
  }
  for (double v : coords_) {
    if (!std::isfinite(v)) throw InvalidInput("observable: non-finite coordinate");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("observable: f must be bounded");
  }
}

std::optional<std::vector<double>> Observable::values_on(const DiscreteMeasure& mu) const {
  if (mu.dim() != dim_) return std::nullopt;
  std::vector<double> out(mu.size());
  for (std::size_t a = 0; a < mu.size(); ++a) {
    bool found = false;
    for (std::size_t i = 0; i < size() && !found; ++i) {
      if (compare_points(mu.point(a), point(i), 1e-12) == 0) {
        out[a] = values_[i];
        found = true;
      }
    }
    if (!found) return std::nullopt;
  }
  return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw InvalidInput("log_grid: need 0 < lo <= hi");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

UQBoundReport uq_bounds(const Observable& f, const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                        const CostSpec& cost, std::vector<double> c_grid,
                        const SolverOptions& options) {
  if (c_grid.empty()) c_grid = log_grid(1e-2, 1e2, 41);
  for (double c : c_grid) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("uq_bounds: c must be positive");
  }
  const auto fv = values_on_nu(f, nu);
  const double mean = expectation(nu, fv);
  std::vector<double> centered(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) centered[i] = fv[i] - mean;

  std::vector<GridEval> evals(c_grid.size());
  detail::parallel_for(c_grid.size(), [&](std::size_t i) {
    const double c = c_grid[i];
    std::vector<double> up(centered.size());
    std::vector<double> lo(centered.size());
    for (std::size_t k = 0; k < centered.size(); ++k) {
      up[k] = c * centered[k];
      lo[k] = -c * centered[k];
    }
    evals[i].risk_up = log_mgf(up, nu) / c;
    evals[i].risk_lo = log_mgf(lo, nu) / c;
    evals[i].div = scaled_div(mu, nu, cost, c, options);
  });

  UQBoundReport r;
  // c -> 0: the risk terms vanish and G_c / c tends to W(mu, nu) with gamma = nu.
  const double w0 = transport_cost(mu, nu, cost, options.tol);
  r.upper = w0;
  r.lower = -w0;
  r.optimal_gamma_upper = nu;
  r.optimal_gamma_lower = nu;
  r.upper_terms = {0.0, 0.0, w0};
  r.lower_terms = {0.0, 0.0, w0};
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    const double c = c_grid[i];
    const auto& e = evals[i];
    const double g = e.div.value / c;
    UQSweepPoint pt{c, e.risk_up + g, -(e.risk_lo + g), e.div.value};
    r.sweep.push_back(pt);
    const BoundTerms up{e.risk_up, e.div.re_part / c, e.div.w_part / c};
    const BoundTerms lo{e.risk_lo, e.div.re_part / c, e.div.w_part / c};
    if (pt.upper < r.upper) {
      r.upper = pt.upper;
      r.optimal_c_upper = c;
      r.optimal_gamma_upper = e.div.gamma_star;
      r.upper_terms = up;
    }
    if (pt.lower > r.lower) {
      r.lower = pt.lower;
      r.optimal_c_lower = c;
      r.optimal_gamma_lower = e.div.gamma_star;
      r.lower_terms = lo;
    }
  }
  if (auto mv = f.values_on(mu)) r.observed = expectation(mu, *mv) - mean;
  r.class_violation = class_violation(f, cost);
  return r;
}

LinearizedBound linearized_bound(const Observable& f, const DiscreteMeasure& nu,
                                 const DiscreteMeasure& mu, const CostSpec& cost,
                                 const SolverOptions& options) {
  const auto fv = values_on_nu(f, nu);
  const double var = variance(nu, fv);
  if (!(var > 1e-300)) {
    throw InvalidInput("linearized_bound: Var_nu(f) = 0, use uq_bounds instead");
  }
  LinearizedBound best;
  best.gamma_star = nu;
  best.w_part = transport_cost(mu, nu, cost, options.tol);
  best.value = best.w_part;

  // phi(s) = G_s / s + s Var / 2 bounds the main term at the minimizer of
  // R + s W from above; every evaluation also offers a feasible gamma.
  auto phi = [&](double log_s) {
    const double s = std::exp(log_s);
    const auto d = scaled_div(mu, nu, cost, s, options);
    const double w = d.w_part / s;
    const double main = std::sqrt(2.0 * var * std::max(0.0, d.re_part)) + w;
    if (main < best.value) {
      best.value = main;
      best.gamma_star = d.gamma_star;
      best.re_part = d.re_part;
      best.w_part = w;
      best.multiplier = s;
    }
    return d.value / s + 0.5 * s * var;
  };

  const auto grid = log_grid(1e-4, 1e4, 33);
  std::vector<double> vals(grid.size());
  std::size_t arg = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    vals[i] = phi(std::log(grid[i]));
    if (vals[i] < vals[arg]) arg = i;
  }
  double lo = std::log(grid[arg > 0 ? arg - 1 : 0]);
  double hi = std::log(grid[std::min(arg + 1, grid.size() - 1)]);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  for (int it = 0; it < 50 && hi - lo > 1e-9; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = phi(x2);
    }
  }
  return best;
}

double wasserstein_first_order(std::size_t dim, const std::vector<double>& points,
                               const std::vector<double>& velocities, const std::vector<double>& p,
                               const std::vector<double>& p_prime,
                               const std::vector<double>& q_prime, double eps) {
  const std::size_t n = p.size();
  if (dim == 0 || points.size() != n * dim || velocities.size() != n * dim ||
      p_prime.size() != n || q_prime.size() != n) {
    throw InvalidInput("wasserstein_first_order: inconsistent sizes");
  }
  double motion = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t d = 0; d < dim; ++d) s += velocities[i * dim + d] * velocities[i * dim + d];
    motion += p[i] * std::sqrt(s);
  }
  std::vector<double> diff(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = p_prime[i] - q_prime[i];
    scale = std::max(scale, std::abs(diff[i]));
  }
  double mass = 0.0;
  if (scale > 0.0) {
    const auto rho = DiscreteMeasure::signed_measure(dim, points, diff);
    mass = signed_transport(rho, CostSpec::scaled_metric(1.0));
  }
  return eps * (motion + mass);
}

}  // namespace gammadiv
