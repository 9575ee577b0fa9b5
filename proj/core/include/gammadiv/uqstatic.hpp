// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Uncertainty bounds on int f dmu - int f dnu from the divergence.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gammadiv/gammadiv.hpp"
#include "gammadiv/measures.hpp"
#include "gammadiv/transport.hpp"

namespace gammadiv {

// Observable f given by its values on a finite point set.
class Observable {
 public:
  Observable() = default;
  Observable(std::size_t dim, std::vector<double> coords, std::vector<double> values);
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double value(std::size_t i) const { return values_[i]; }
  // Values at the atoms of mu, or nullopt if some atom is not covered.
  std::optional<std::vector<double>> values_on(const DiscreteMeasure& mu) const;

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> values_;
};

struct BoundTerms {
  double risk = 0.0;  // (1/c) log int exp(+-c (f - E f)) dnu
  double re = 0.0;    // (1/c) R(gamma || nu)
  double w = 0.0;     // W(mu, gamma)
};

struct UQSweepPoint {
  double c = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double divergence = 0.0;  // G for the cost scaled by c
};

struct UQBoundReport {
  double upper = 0.0;
  double lower = 0.0;
  // 0 marks the c -> 0 limit, where the bounds reduce to +-W(mu, nu).
  double optimal_c_upper = 0.0;
  double optimal_c_lower = 0.0;
  DiscreteMeasure optimal_gamma_upper;
  DiscreteMeasure optimal_gamma_lower;
  BoundTerms upper_terms;
  BoundTerms lower_terms;
  std::vector<UQSweepPoint> sweep;
  std::optional<double> observed;  // int f dmu - int f dnu when f covers supp(mu)
  // Largest violation of |f(x) - f(y)| <= c(x, y) over the points where f is
  // known; the bounds assume f is in the class (violation <= 0).
  double class_violation = 0.0;
};

// Log-spaced grid of n points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Default grid: 41 points from 1e-2 to 1e2.
UQBoundReport uq_bounds(const Observable& f, const DiscreteMeasure& nu,
                        const DiscreteMeasure& mu, const CostSpec& cost,
                        std::vector<double> c_grid = {}, const SolverOptions& options = {});

struct LinearizedBound {
  double value = 0.0;  // sqrt(2 Var f) sqrt(R(gamma* || nu)) + W(mu, gamma*)
  DiscreteMeasure gamma_star;
  double re_part = 0.0;  // R(gamma* || nu), which also sizes the neglected remainder
  double w_part = 0.0;
  double multiplier = 0.0;  // lambda with gamma* optimal for R + lambda W (0: gamma* = nu)
};

// Minimizes the main term of the linearized bound over gamma on supp(nu)
// through inf_lambda { G_lambda / lambda + lambda Var / 2 }.
LinearizedBound linearized_bound(const Observable& f, const DiscreteMeasure& nu,
                                 const DiscreteMeasure& mu, const CostSpec& cost,
                                 const SolverOptions& options = {});

enum class SensitivityCase { kTransportOnly, kEntropyOnly, kMixed };
std::string to_string(SensitivityCase c);

struct SensitivitySolution {
  double bound = 0.0;
  std::vector<double> g_star;        // g_star[0] = 0
  std::vector<double> q_prime_star;  // sums to zero
  SensitivityCase which = SensitivityCase::kTransportOnly;
  double variance_multiplier = 0.0;  // multiplier of Var_p(g) <= Var_p(f)
  bool lipschitz_active = false;
  bool variance_active = false;
};

// sup { sum g_i p'_i : |g_i - g_j| <= |x_i - x_j|, Var_p(g) <= Var_p(f) },
// together with the minimizing q' of the matching inf-sup problem.
SensitivitySolution sensitivity_minmax(std::size_t dim, const std::vector<double>& points,
                                       const std::vector<double>& p,
                                       const std::vector<double>& p_prime,
                                       const std::vector<double>& f);

struct SaddleCheck {
  double inner_sup = 0.0;  // sup_g F(q'*, g)
  double outer_inf = 0.0;  // inf_q' F(q', g*)
};

// F(q', g) = sqrt(V) sqrt(sum q'^2 / p) + sum g (p' - q').
SaddleCheck saddle_check(std::size_t dim, const std::vector<double>& points,
                         const std::vector<double>& p, const std::vector<double>& p_prime,
                         double variance, const std::vector<double>& g_star,
                         const std::vector<double>& q_prime_star);

// First-order prediction of W(mu_eps, gamma_eps) for
// mu_eps = sum (p + eps p') delta_{x + eps x'} and
// gamma_eps = sum (p + eps q') delta_x: eps (sum p |x'| + W(rho, rho~)).
double wasserstein_first_order(std::size_t dim, const std::vector<double>& points,
                               const std::vector<double>& velocities,
                               const std::vector<double>& p, const std::vector<double>& p_prime,
                               const std::vector<double>& q_prime, double eps);

}  // namespace gammadiv
