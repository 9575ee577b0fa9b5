// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "chain_barrier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>

#include "detail.hpp"
#include "gammadiv/errors.hpp"

namespace gammadiv::detail {

namespace {

// Symmetric band matrix stored by lower diagonals: a[l][i] = A(i, i - l).
class Band {
 public:
  Band(std::size_t n, int width) : n_(n), width_(width) {
    for (int l = 0; l <= width_; ++l) a_[l].assign(n, 0.0);
  }
  double& at(std::size_t i, std::size_t j) {  // requires i >= j
    return a_[i - j][i];
  }
  void pin(std::size_t r) {
    for (int l = 1; l <= width_; ++l) {
      if (r + l < n_) a_[l][r + l] = 0.0;
      if (r >= static_cast<std::size_t>(l)) a_[l][r] = 0.0;
    }
    a_[0][r] = 1.0;
  }
  // In-place banded Cholesky; returns false if a pivot is not positive.
  bool factor() {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j0 = i >= static_cast<std::size_t>(width_) ? i - width_ : 0;
      for (std::size_t j = j0; j <= i; ++j) {
        double s = a_[i - j][i];
        const std::size_t k0 = std::max(j0, j >= static_cast<std::size_t>(width_)
                                                ? j - width_ : std::size_t{0});
        for (std::size_t k = k0; k < j; ++k) s -= a_[i - k][i] * a_[j - k][j];
        if (j == i) {
          if (!(s > 0.0)) return false;
          a_[0][i] = std::sqrt(s);
        } else {
          a_[i - j][i] = s / a_[0][j];
        }
      }
    }
    return true;
  }
  void solve(std::vector<double>& x) const {
    for (std::size_t i = 0; i < n_; ++i) {
      double s = x[i];
      const std::size_t k0 = i >= static_cast<std::size_t>(width_) ? i - width_ : 0;
      for (std::size_t k = k0; k < i; ++k) s -= a_[i - k][i] * x[k];
      x[i] = s / a_[0][i];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      double s = x[ii];
      for (int l = 1; l <= width_ && ii + l < n_; ++l) s -= a_[l][ii + l] * x[ii + l];
      x[ii] = s / a_[0][ii];
    }
  }

 private:
  std::size_t n_;
  int width_;
  std::array<std::vector<double>, 3> a_;
};

constexpr std::array<double, 2> kFirst = {-1.0, 1.0};
constexpr std::array<double, 3> kSecond = {1.0, -2.0, 1.0};

std::span<const double> stencil(int order) {
  if (order == 1) return kFirst;
  return kSecond;
}

std::vector<double> differences(int order, const std::vector<double>& g) {
  const auto c = stencil(order);
  const std::size_t m = g.size() - static_cast<std::size_t>(order);
  std::vector<double> d(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t a = 0; a < c.size(); ++a) d[k] += c[a] * g[k + a];
  }
  return d;
}

// t * objective(-) + barrier; +inf outside the strict interior.
double merit(const ChainProblem& p, double t, const std::vector<double>& g) {
  const std::vector<double> d = differences(p.order, g);
  double v = -t * chain_objective(p, g);
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double sp = p.bound[k] - d[k];
    const double sm = p.bound[k] + d[k];
    if (!(sp > 0.0) || !(sm > 0.0)) return kInf;
    v -= std::log(sp) + std::log(sm);
  }
  return v;
}

}  // namespace

double chain_objective(const ChainProblem& p, const std::vector<double>& g) {
  double lin = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) lin += p.mu[i] * g[i];
  return lin - log_sum_exp(g, p.nu);
}

ChainResult solve_chain_dual(const ChainProblem& p, double gap_tol, int max_newton) {
  const std::size_t n = p.mu.size();
  const int order = p.order;
  if (order != 1 && order != 2) throw InvalidInput("chain order must be 1 or 2");
  if (p.nu.size() != n || n <= static_cast<std::size_t>(order) ||
      p.bound.size() != n - static_cast<std::size_t>(order)) {
    throw InvalidInput("inconsistent chain problem sizes");
  }
  for (double w : p.bound) {
    if (!(w > 0.0)) throw InvalidInput("chain bounds must be positive");
  }
  const auto c = stencil(order);
  const double m = 2.0 * static_cast<double>(p.bound.size());

  ChainResult res;
  std::vector<double> g(n, 0.0);
  std::vector<double> grad(n), prob(n), diag_s(p.bound.size()), first(p.bound.size());
  std::vector<double> y(n), z(n), dg(n);
  // Start with the objective and barrier on comparable footing.
  double t = std::max(1.0, m / 100.0);
  int steps = 0;
  while (true) {
    while (steps < max_newton) {
      // Tilted probabilities.
      double mx = -kInf;
      for (std::size_t i = 0; i < n; ++i) {
        if (p.nu[i] > 0.0) mx = std::max(mx, g[i]);
      }
      double zsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        prob[i] = p.nu[i] > 0.0 ? p.nu[i] * std::exp(g[i] - mx) : 0.0;
        zsum += prob[i];
      }
      for (double& q : prob) q /= zsum;

      const std::vector<double> d = differences(order, g);
      for (std::size_t k = 0; k < d.size(); ++k) {
        const double sp = p.bound[k] - d[k];
        const double sm = p.bound[k] + d[k];
        first[k] = 1.0 / sp - 1.0 / sm;
        diag_s[k] = 1.0 / (sp * sp) + 1.0 / (sm * sm);
      }
      for (std::size_t i = 0; i < n; ++i) grad[i] = t * (prob[i] - p.mu[i]);
      for (std::size_t k = 0; k < d.size(); ++k) {
        for (std::size_t a = 0; a < c.size(); ++a) grad[k + a] += c[a] * first[k];
      }

      // B = t diag(p) + D^T S D, with the coordinate of largest p pinned.
      const std::size_t r = static_cast<std::size_t>(
          std::max_element(prob.begin(), prob.end()) - prob.begin());
      Band band(n, order);
      for (std::size_t i = 0; i < n; ++i) band.at(i, i) = t * prob[i];
      for (std::size_t k = 0; k < d.size(); ++k) {
        for (std::size_t a = 0; a < c.size(); ++a) {
          for (std::size_t b = 0; b <= a; ++b) {
            band.at(k + a, k + b) += diag_s[k] * c[a] * c[b];
          }
        }
      }
      band.pin(r);
      if (!band.factor()) break;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = i == r ? 0.0 : -grad[i];
        z[i] = i == r ? 0.0 : prob[i];
      }
      band.solve(y);
      band.solve(z);
      // (B - t z0 z0^T)^{-1} rhs by Sherman-Morrison, z0 = pinned p.
      double pty = 0.0, ptz = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        pty += prob[i] * y[i];
        ptz += prob[i] * z[i];
      }
      const double denom = 1.0 - t * ptz;
      const double coef = std::abs(denom) > 1e-300 ? t * pty / denom : 0.0;
      double decrement = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dg[i] = y[i] + coef * z[i];
        decrement -= grad[i] * dg[i];
      }
      if (!(decrement > 1e-14)) break;

      // Largest step keeping the differences strictly inside their bounds.
      const std::vector<double> dd = differences(order, dg);
      double amax = 1.0;
      for (std::size_t k = 0; k < dd.size(); ++k) {
        if (dd[k] > 0.0) amax = std::min(amax, 0.99 * (p.bound[k] - d[k]) / dd[k]);
        if (dd[k] < 0.0) amax = std::min(amax, 0.99 * (p.bound[k] + d[k]) / -dd[k]);
      }
      const double f0 = merit(p, t, g);
      double alpha = amax;
      std::vector<double> gn(n);
      double fn = kInf;
      while (alpha > 1e-16) {
        for (std::size_t i = 0; i < n; ++i) gn[i] = g[i] + alpha * dg[i];
        fn = merit(p, t, gn);
        if (fn <= f0 - 0.01 * alpha * decrement) break;
        alpha *= 0.5;
      }
      ++steps;
      if (!(fn < kInf) || alpha <= 1e-16) break;
      const bool stalled = !(fn < f0);
      g.swap(gn);
      if (stalled) break;
    }
    if (m / t <= gap_tol) {
      res.converged = steps < max_newton;
      break;
    }
    if (steps >= max_newton) break;
    t *= 8.0;
  }
  res.g = g;
  res.value = chain_objective(p, g);
  res.gap_bound = m / t;
  res.newton_steps = steps;
  return res;
}

}  // namespace gammadiv::detail
