// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// The divergence G(mu || nu) = inf_gamma { R(gamma || nu) + W_c(mu, gamma) }
// = sup_g { int g dmu - log int exp(g) dnu } over the Lipschitz class of c.

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "gammadiv/errors.hpp"
#include "gammadiv/measures.hpp"
#include "gammadiv/tolerances.hpp"
#include "gammadiv/transport.hpp"

namespace gammadiv {

struct DivergenceReport {
  double value = 0.0;
  DiscreteMeasure gamma_star;  // intermediate measure, absolutely continuous w.r.t. nu
  Potential g_star;            // on supp(mu) and supp(nu), normalized
  double re_part = 0.0;        // R(gamma_star || nu)
  double w_part = 0.0;         // W_c(mu, gamma_star)
  // Certified bound on |value - G|: re_part + w_part minus the dual value of
  // g_star.
  double primal_dual_gap = 0.0;
  std::int64_t iterations = 0;
  std::string method;
};

// Raised when a solver stops before certifying its tolerance. Carries the
// best iterate found.
class SolverNotConverged : public NonConvergence {
 public:
  SolverNotConverged(const std::string& what, DivergenceReport best)
      : NonConvergence(what), best_(std::move(best)) {}
  const DivergenceReport& best() const { return best_; }

 private:
  DivergenceReport best_;
};

struct SolverOptions {
  Tolerances tol = default_tolerances();
  // Target for the certified gap. The report is accepted when the gap is
  // below max(target_gap, 1e-12 * |value|) and rejected above tol.gd_tol.
  double target_gap = 1e-9;
};

// Cutting-plane minimization of F(gamma) = R(gamma || nu) + W_c(mu, gamma).
// Each cut is a transport potential of W_c(mu, .) at the current gamma; the
// reported value is F at the returned gamma.
DivergenceReport gamma_div_primal(const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu,
                                  const CostSpec& cost,
                                  const SolverOptions& options = {});

// Interior-point maximization of the dual objective over potentials on
// supp(mu) and supp(nu). The reported value is the dual value at g_star and
// gamma_star is the tilt of nu by g_star.
DivergenceReport gamma_div_dual(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu, const CostSpec& cost,
                                const SolverOptions& options = {});

struct VerifyReport {
  double residual_density = 0.0;    // max |dgamma/dnu - exp(g)/int exp(g) dnu|
  double residual_transport = 0.0;  // |W_c(mu, gamma) - int g d(mu - gamma)|
  double lipschitz_violation = 0.0;
  bool pass = false;
};

// Checks the two optimality conditions for the pair (gamma, g). g must be
// defined on supp(nu); it is extended to supp(mu) where needed.
VerifyReport verify_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const DiscreteMeasure& gamma, const Potential& g,
                         const CostSpec& cost, double verify_tol = 1e-6,
                         const Tolerances& tol = {});

// Derivative of eps -> G(mu + eps rho || nu) at 0+, equal to int g dρ for
// the largest extension of the optimal potential off supp(nu).
double directional_derivative(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const DiscreteMeasure& rho, const CostSpec& cost,
                              const SolverOptions& options = {});

// G with the cost multiplied by b.
DivergenceReport scaled_div(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const CostSpec& cost, double b,
                            const SolverOptions& options = {});

struct LargeBApproximation {
  double value = 0.0;  // b W_c(mu, gamma) + R(gamma || nu)
  DiscreteMeasure gamma_star;
  double re_part = 0.0;
  double w_part = 0.0;  // W_c(mu, gamma), unscaled
};

// Leading behaviour of G with cost b c as b grows: every atom of mu moves to
// its nearest atom of nu. Throws InvalidInput naming the points when an atom
// of mu is equidistant from two atoms of nu.
LargeBApproximation large_b_expansion(const DiscreteMeasure& mu,
                                      const DiscreteMeasure& nu,
                                      const CostSpec& cost, double b,
                                      const Tolerances& tol = {});

// G(mu || nu) with cost delta c, divided by delta.
double small_delta_ratio(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const CostSpec& cost, double delta,
                         const SolverOptions& options = {});

}  // namespace gammadiv
