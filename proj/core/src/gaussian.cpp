// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "chain_barrier.hpp"
#include "gammadiv/closedforms.hpp"
#include "gammadiv/errors.hpp"

namespace gammadiv {

std::string to_string(GaussianCase c) {
  switch (c) {
    case GaussianCase::kI:
      return "i";
    case GaussianCase::kII:
      return "ii";
    case GaussianCase::kIII:
      return "iii";
  }
  return "?";
}

double gaussian_kl(const GaussianParams& mu, const GaussianParams& nu) {
  mu.validate();
  nu.validate();
  const double r = mu.variance / nu.variance;
  const double dm = mu.mean - nu.mean;
  // (r - 1) - log r, accurate for r near one.
  const double u = r - 1.0;
  return 0.5 * (u - std::log1p(u) + dm * dm / nu.variance);
}

double gaussian_second_order_w(const GaussianParams& mu, const GaussianParams& nu, double k) {
  mu.validate();
  nu.validate();
  if (!(k > 0.0)) throw InvalidInput("k must be positive");
  if (mu.mean != nu.mean) return std::numeric_limits<double>::infinity();
  return 0.5 * k * std::abs(mu.variance - nu.variance);
}

GaussianDivergence gaussian_gamma_div(const GaussianParams& mu, const GaussianParams& nu,
                                      double k) {
  mu.validate();
  nu.validate();
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidInput("k must be positive");
  const double s1 = mu.variance;
  const double s2 = nu.variance;
  const double dm = mu.mean - nu.mean;
  const double gap = 1.0 / s1 - 1.0 / s2;
  GaussianDivergence out;
  if (std::abs(gap) <= k) {
    out.which = GaussianCase::kI;
    out.gamma_star = mu;
    out.value = gaussian_kl(mu, nu);
    out.re_part = out.value;
    out.w_part = 0.0;
    return out;
  }
  const double sign = gap > 0.0 ? 1.0 : -1.0;
  const double denom = 1.0 + sign * k * s2;
  if (!(denom > 0.0)) {
    // Unreachable from the case split (1/s2 > k in case iii); kept as a guard.
    throw InvalidInput("intermediate variance would not be positive");
  }
  out.which = gap > 0.0 ? GaussianCase::kII : GaussianCase::kIII;
  out.gamma_star = {mu.mean, s2 / denom};
  out.value = 0.5 * std::log1p(sign * k * s2) + dm * dm / (2.0 * s2) - sign * 0.5 * k * s1;
  out.re_part = gaussian_kl(out.gamma_star, nu);
  out.w_part = 0.5 * k * std::abs(out.gamma_star.variance - s1);
  return out;
}

GaussianGrid gaussian_grid(const GaussianParams& mu, const GaussianParams& nu, std::size_t n,
                           double width) {
  mu.validate();
  nu.validate();
  if (n < 3) throw InvalidInput("grid needs at least three points");
  GaussianGrid g;
  g.lo = std::min(mu.mean - width * mu.sd(), nu.mean - width * nu.sd());
  g.hi = std::max(mu.mean + width * mu.sd(), nu.mean + width * nu.sd());
  g.n = n;
  g.x.resize(n);
  g.mu.resize(n);
  g.nu.resize(n);
  double zm = 0.0;
  double zn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.lo + g.h() * static_cast<double>(i);
    g.x[i] = x;
    g.mu[i] = std::exp(-0.5 * (x - mu.mean) * (x - mu.mean) / mu.variance);
    g.nu[i] = std::exp(-0.5 * (x - nu.mean) * (x - nu.mean) / nu.variance);
    zm += g.mu[i];
    zn += g.nu[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    g.mu[i] /= zm;
    g.nu[i] /= zn;
  }
  return g;
}

double gaussian_grid_divergence(const GaussianGrid& grid, double k) {
  if (!(k > 0.0)) throw InvalidInput("k must be positive");
  detail::ChainProblem p;
  p.order = 2;
  p.mu = grid.mu;
  p.nu = grid.nu;
  p.bound.assign(grid.n - 2, k * grid.h() * grid.h());
  const detail::ChainResult r = detail::solve_chain_dual(p, 1e-10);
  if (!r.converged) throw NonConvergence("grid divergence did not converge");
  return r.value;
}

double gaussian_grid_transport(const GaussianGrid& grid, double k, double slope_cap) {
  if (!(k > 0.0) || !(slope_cap >= 0.0)) throw InvalidInput("bad class parameters");
  const std::size_t n = grid.n;
  const double h = grid.h();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = grid.mu[i] - grid.nu[i];
  // Write g through g_c = 0, its slope at c and the second differences e_j.
  // For j >= c the coefficient of e_j is sum_{i >= j+2} (i - 1 - j) w_i; for
  // j < c it is sum_{i <= j} (j - i + 1) w_i.
  const std::size_t c = n / 2;
  double total = 0.0;
  {
    double a = 0.0;  // sum_{i >= k} i w_i
    double b = 0.0;  // sum_{i >= k} w_i
    for (std::size_t i = n; i-- > c + 2;) {
      a += static_cast<double>(i) * w[i];
      b += w[i];
      const std::size_t j = i - 2;
      total += std::abs(a - static_cast<double>(j + 1) * b);
    }
  }
  {
    double a = 0.0;  // sum_{i <= j} i w_i
    double b = 0.0;  // sum_{i <= j} w_i
    for (std::size_t j = 0; j < c; ++j) {
      a += static_cast<double>(j) * w[j];
      b += w[j];
      total += std::abs(static_cast<double>(j + 1) * b - a);
    }
  }
  double first = 0.0;
  for (std::size_t i = 0; i < n; ++i) first += w[i] * (static_cast<double>(i) - static_cast<double>(c));
  return k * h * h * total + slope_cap * h * std::abs(first);
}

}  // namespace gammadiv
