// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/gammadiv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "detail.hpp"
#include "gammadiv/entropy.hpp"
#include "gammadiv/errors.hpp"

namespace gammadiv {

namespace {

std::string format_point(std::span<const double> p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t d = 0; d < p.size(); ++d) os << (d ? ", " : "") << p[d];
  os << ')';
  return os.str();
}

}  // namespace

VerifyReport verify_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const DiscreteMeasure& gamma, const Potential& g,
                         const CostSpec& cost, double verify_tol, const Tolerances& tol) {
  VerifyReport r;
  r.lipschitz_violation = std::max(0.0, g.max_violation());

  std::vector<double> gamma_on_nu(nu.size(), 0.0);
  bool abs_cont = true;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const std::size_t k = nu.find(gamma.point(i));
    if (k == nu.size()) {
      abs_cont = false;
    } else {
      gamma_on_nu[k] = gamma.weight(i);
    }
  }
  if (!abs_cont) {
    r.residual_density = kInfinity;
  } else {
    const std::vector<double> gnu = g.evaluate_on(nu);
    const double lz = log_mgf(gnu, nu);
    for (std::size_t k = 0; k < nu.size(); ++k) {
      const double dev = std::abs(gamma_on_nu[k] / nu.weight(k) - std::exp(gnu[k] - lz));
      r.residual_density = std::max(r.residual_density, dev);
    }
  }

  const double w = transport_cost(mu, gamma, cost, tol);
  const double int_mu = expectation(mu, g.evaluate_on(mu));
  const double int_gamma = expectation(gamma, g.evaluate_on(gamma));
  r.residual_transport = std::abs(w - (int_mu - int_gamma));
  r.pass = r.residual_density <= verify_tol && r.residual_transport <= verify_tol &&
           r.lipschitz_violation <= tol.lip_tol * std::max(1.0, cost.scale());
  return r;
}

double directional_derivative(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const DiscreteMeasure& rho, const CostSpec& cost,
                              const SolverOptions& options) {
  if (rho.dim() != mu.dim()) throw InvalidInput("perturbation differs in dimension");
  if (std::abs(rho.total_mass()) > options.tol.mass_tol) {
    throw InvalidInput("perturbation must have zero total mass");
  }
  // mu + eps rho must stay nonnegative for small eps.
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho.weight(i) < 0.0) {
      const std::size_t k = mu.find(rho.point(i));
      if (k == mu.size()) {
        throw InvalidInput("perturbation removes mass at " + format_point(rho.point(i)) +
                           ", which is not an atom of mu");
      }
    }
  }
  if (rho.empty()) return 0.0;
  const DivergenceReport rep = gamma_div_dual(mu, nu, cost, options);
  // Restrict the optimal potential to supp(nu) and take its largest extension.
  const std::vector<double> gnu = rep.g_star.values_on(nu);
  const Potential base(nu.dim(), nu.coords(), gnu, cost, options.tol);
  return expectation(rho, base.evaluate_on(rho));
}

DivergenceReport scaled_div(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            const CostSpec& cost, double b, const SolverOptions& options) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("scale must be positive");
  return gamma_div_dual(mu, nu, cost.scaled(b), options);
}

LargeBApproximation large_b_expansion(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      const CostSpec& cost, double b, const Tolerances& tol) {
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("scale must be positive");
  if (mu.dim() != nu.dim()) throw InvalidInput("measures differ in dimension");
  std::vector<double> w(nu.size(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto x = mu.point(i);
    std::size_t best = 0;
    double d1 = detail::kInf;
    double d2 = detail::kInf;
    std::size_t second = 0;
    for (std::size_t j = 0; j < nu.size(); ++j) {
      const double d = cost(x, nu.point(j));
      if (d < d1) {
        d2 = d1;
        second = best;
        d1 = d;
        best = j;
      } else if (d < d2) {
        d2 = d;
        second = j;
      }
    }
    if (nu.size() > 1 && d2 - d1 <= 1e-12 * std::max(1.0, d1)) {
      throw InvalidInput("atom " + format_point(x) + " is equidistant from " +
                         format_point(nu.point(best)) + " and " +
                         format_point(nu.point(second)));
    }
    w[best] += mu.weight(i);
  }
  LargeBApproximation out;
  out.gamma_star = DiscreteMeasure::probability(nu.dim(), nu.coords(), w, tol);
  out.re_part = rel_entropy(out.gamma_star, nu);
  out.w_part = transport_cost(mu, out.gamma_star, cost, tol);
  out.value = b * out.w_part + out.re_part;
  return out;
}

double small_delta_ratio(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         const CostSpec& cost, double delta, const SolverOptions& options) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidInput("delta must be positive");
  SolverOptions opt = options;
  // The ratio divides by delta, so the absolute target shrinks with it.
  opt.target_gap = std::min(options.target_gap, options.target_gap * delta);
  return scaled_div(mu, nu, cost, delta, opt).value / delta;
}

}  // namespace gammadiv
