// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Exact solutions for measure pairs whose divergence has a closed form, used
// as references for the numerical solvers.

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gammadiv/measures.hpp"
#include "gammadiv/transport.hpp"

namespace gammadiv {

// Continuous piecewise-linear function: value at breakpoints[0] is `start`
// and the slope on [breakpoints[i], breakpoints[i+1]] is slopes[i].
struct PiecewiseLinear {
  std::vector<double> breakpoints;
  std::vector<double> slopes;
  double start = 0.0;
  double operator()(double x) const;
};

// mu uniform on [0, 1 + c] (stretch) or [0, 1 - c] (shrink), nu uniform on
// [0, 1], unit Lipschitz class. Below b the optimal potential is flat and the
// intermediate measure agrees with mu.
struct UniformPairSolution {
  double c = 0.0;
  double b = 0.0;
  double root_residual = 0.0;  // residual of the equation defining b
  bool boundary_case = false;  // b pinned at 0
  PiecewiseLinear g_star;
  double value = 0.0;
  double re_part = 0.0;
  double w_part = 0.0;
  double rel_entropy_mu_nu = std::numeric_limits<double>::infinity();  // finite for the shrink
  double transport_mu_nu = 0.0;       // W(mu, nu) = c / 2
};

// b solves exp(1 - b) - (1 - b) = 1 + c when c < e - 2; otherwise b = 0.
UniformPairSolution uniform_stretch(double c);
// b solves exp(b - 1) - 1 - (b - 1) = c when c < 1/e; otherwise b = 0.
UniformPairSolution uniform_shrink(double c);

// nu proportional to f on [0, 1], mu proportional to f on [0, 1 + c].
struct DensityStretchSolution {
  double c = 0.0;
  double b = 0.0;
  double h_at_zero = 0.0;  // H(0) decides between the interior root and b = 0
  bool boundary_case = false;
  PiecewiseLinear g_star;
  double value = 0.0;
  double re_part = 0.0;
  double w_part = 0.0;
};

// f must be positive and finite on [0, 1 + c]. Integrals use adaptive
// Gauss-Kronrod quadrature; b is found by bisection on the decreasing H.
DensityStretchSolution density_stretch(const std::function<double(double)>& f, double c);

// nu uniform on N and mu uniform on N plus one point y (add), or mu uniform
// on N minus the atom x_j (remove), unit Euclidean Lipschitz class. The
// optimal potential is a cone of slope one around the special point inside
// the ball of radius `radius` and the constant c0 outside it.
struct DiscretePointSolution {
  double radius = 0.0;
  std::size_t ball_size = 0;  // points of N inside the ball
  double c0 = 0.0;            // potential outside the ball (meaningless if empty)
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  DiscreteMeasure gamma_star;
  Potential g_star;  // on N and the special point, zero at y (add) or x_j (remove)
  double value = 0.0;
  double re_part = 0.0;
  double w_part = 0.0;
};

// `points` holds N row by row.
DiscretePointSolution discrete_add_point(std::size_t dim, const std::vector<double>& points,
                                         const std::vector<double>& y);
// `j` indexes N in the order given.
DiscretePointSolution discrete_remove_point(std::size_t dim,
                                            const std::vector<double>& points, std::size_t j);

// Divergence between two normal laws for the class of functions whose
// derivative is k-Lipschitz.
enum class GaussianCase { kI, kII, kIII };
std::string to_string(GaussianCase c);

struct GaussianDivergence {
  double value = 0.0;
  GaussianCase which = GaussianCase::kI;
  GaussianParams gamma_star;
  double re_part = 0.0;  // R(gamma* || nu)
  double w_part = 0.0;   // W(mu, gamma*)
};

// Case i: |1/s1 - 1/s2| <= k (variances s1, s2), gamma* = mu. Case ii:
// 1/s1 - 1/s2 > k. Case iii: 1/s2 - 1/s1 > k. gamma* keeps the mean of mu.
GaussianDivergence gaussian_gamma_div(const GaussianParams& mu, const GaussianParams& nu,
                                      double k);

// Relative entropy between normal laws.
double gaussian_kl(const GaussianParams& mu, const GaussianParams& nu);

// Transport distance for the same class: (k/2)|s1 - s2| for equal means,
// +infinity otherwise.
double gaussian_second_order_w(const GaussianParams& mu, const GaussianParams& nu, double k);

// Discretized versions on a uniform grid over [lo, hi] with n points, where
// the class constraint becomes |g_i - 2 g_{i+1} + g_{i+2}| <= k h^2.
struct GaussianGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;
  std::vector<double> x;
  std::vector<double> mu;  // normalized grid weights
  std::vector<double> nu;
  double h() const { return (hi - lo) / static_cast<double>(n - 1); }
};
// Grid covering both laws to `width` standard deviations.
GaussianGrid gaussian_grid(const GaussianParams& mu, const GaussianParams& nu, std::size_t n,
                           double width = 6.0);
// Interior-point solution of the discretized divergence.
double gaussian_grid_divergence(const GaussianGrid& grid, double k);
// Exact discretized transport distance, with the slope at the grid centre
// limited to |slope| <= slope_cap. Linear in slope_cap, with coefficient
// |E_mu X - E_nu X|.
double gaussian_grid_transport(const GaussianGrid& grid, double k, double slope_cap);

}  // namespace gammadiv
