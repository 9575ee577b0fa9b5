// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Second-moment bounds for a perturbed Gauss-Markov chain
//   X_{k+1} = (1 - a/N) X_k + sigma W_k,  W_k ~ N(0, 1/N),
// whose perturbed version draws W_k ~ N(u(X_k)/N, v(X_k)^2/N).

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace gammadiv {

struct OUModel {
  double a = 1.0;
  double sigma = 1.0;
  std::int64_t N = 100;
  // Throws InvalidInput unless a > 0, sigma > 0 and N > a.
  void validate() const;
  double alpha() const { return 1.0 - a / static_cast<double>(N); }
  double step_variance() const { return sigma * sigma / static_cast<double>(N); }
};

// Constant, or a lookup table on increasing grid points with linear
// interpolation and constant extension past either end.
class BoundedFunction {
 public:
  static BoundedFunction constant(double value);
  static BoundedFunction table(std::vector<double> xs, std::vector<double> values);
  double operator()(double x) const;
  double inf() const;
  double sup() const;
  double sup_abs() const;
  bool is_constant() const { return xs_.empty(); }

 private:
  double constant_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> values_;
};

struct Perturbation {
  BoundedFunction u = BoundedFunction::constant(0.0);
  BoundedFunction v = BoundedFunction::constant(1.0);
  // Throws InvalidInput unless inf v > 0.
  void validate() const;
};

// Image of g(x) = -b x^2 - c x - d under
//   g -> -log int exp(-g(y)) p(x, dy) - g(x) + lambda
// for the kernel p(x, .) = N(alpha x, sigma2): again a quadratic, or
// +infinity when 1 - 2 b sigma2 <= 0.
struct QuadraticMap {
  bool infinite = false;
  double quadratic = 0.0;
  double linear = 0.0;
  double constant = 0.0;
  double operator()(double x) const { return (quadratic * x + linear) * x + constant; }
};
QuadraticMap forward_map(double b, double c, double d, double lambda, double alpha, double sigma2);

// Smallest b > 0 with b (1 - alpha^2 / (1 - 2 b sigma2)) = q / 2, so that
// x -> q x^2 / 2 is reached by the map above. Throws InvalidInput when q is
// beyond the largest attainable value.
double quadratic_fixed_point(double q, double alpha, double sigma2);

struct ACUTTerms {
  double drift = 0.0;      // u^2 / (4 b (a - b sigma^2))
  double diffusion = 0.0;  // sigma^2 |v^2 - 1| / (2 (a - b sigma^2))
  double base = 0.0;       // sigma^2 / (2 (a - b sigma^2))
};

struct ACUTBoundReport {
  double bound = 0.0;
  double optimal_b = 0.0;
  ACUTTerms terms;
  double fixed_b = 0.0;  // a / (2 sigma^2)
  double fixed_bound = 0.0;
  ACUTTerms fixed_terms;
  std::vector<std::pair<double, double>> sweep;  // (b, objective) over the grid
  std::optional<double> empirical_moment;
  std::optional<double> empirical_half_width;
};

// Bound on the stationary second moment of the perturbed continuum model,
// with sup u^2 and sup |v^2 - 1| taken over the envelopes.
ACUTBoundReport acut_bound(double a, double sigma, double u_sup, double v_lo, double v_hi);

// Objective of acut_bound at a given b in (0, a / sigma^2).
ACUTTerms acut_terms(double a, double sigma, double u_sup, double v_lo, double v_hi, double b);

// Divergence with the second-order class of constant k between the
// perturbed and unperturbed one-step kernels at x.
double gaussian_step_div(const OUModel& model, double x, const Perturbation& pert, double k);

// Relative entropy between the same two kernels.
double gaussian_step_kl(const OUModel& model, double x, const Perturbation& pert);

struct MomentEstimate {
  double second_moment = 0.0;
  double half_width = 0.0;  // 1.96 standard errors from pooled batch means
  double first_moment = 0.0;
  std::int64_t steps = 0;   // post burn-in steps per replica
  std::int64_t replicas = 1;
};

// Long-run average of X_k^2 for the perturbed chain started at 0. Replica r
// uses the normal stream keyed by (seed, r); replicas run concurrently.
MomentEstimate simulate_stationary_moment(const OUModel& model, const Perturbation& pert,
                                          std::int64_t horizon, std::int64_t burn_in,
                                          std::uint64_t seed, std::int64_t replicas = 1);

}  // namespace gammadiv
