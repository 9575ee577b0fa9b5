// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/entropy.hpp"

#include <cmath>
#include <vector>

#include "detail.hpp"
#include "gammadiv/errors.hpp"

namespace gammadiv {

double rel_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw InvalidInput("measure dimensions differ");
  double r = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double m = mu.weight(i);
    if (m <= 0.0) continue;
    const std::size_t j = nu.find(mu.point(i));
    if (j == nu.size()) return kInfinity;
    r += m * std::log(m / nu.weight(j));
  }
  // Rounding can leave tiny negative sums when mu and nu agree.
  return r < 0.0 && r > -1e-15 ? 0.0 : r;
}

double log_mgf(std::span<const double> g_on_nu, const DiscreteMeasure& nu) {
  if (g_on_nu.size() != nu.size()) throw InvalidInput("potential/measure size mismatch");
  return detail::log_sum_exp(g_on_nu, nu.weights());
}

double log_mgf(const Potential& g, const DiscreteMeasure& nu) {
  const std::vector<double> v = g.values_on(nu);
  return log_mgf(v, nu);
}

TiltedMeasure tilt(const DiscreteMeasure& nu, std::span<const double> g_on_nu) {
  if (g_on_nu.size() != nu.size()) throw InvalidInput("potential/measure size mismatch");
  const double lse = detail::log_sum_exp(g_on_nu, nu.weights());
  std::vector<double> w(nu.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    w[i] = nu.weight(i) * std::exp(g_on_nu[i] - lse);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  TiltedMeasure t{nu, std::vector<double>(g_on_nu.begin(), g_on_nu.end()),
                  DiscreteMeasure::probability(nu.dim(), nu.coords(), std::move(w))};
  return t;
}

TiltedMeasure tilt(const DiscreteMeasure& nu, const Potential& g) {
  const std::vector<double> v = g.values_on(nu);
  return tilt(nu, v);
}

}  // namespace gammadiv
