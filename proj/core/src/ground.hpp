// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Shared state of the divergence solvers: the union of the two supports with
// both weight vectors laid out on it.

#pragma once

#include <string>
#include <vector>

#include "gammadiv/gammadiv.hpp"

namespace gammadiv::detail {

struct Ground {
  std::size_t dim = 1;
  std::vector<double> coords;  // sorted union of supp(mu) and supp(nu)
  std::vector<double> mu;
  std::vector<double> nu;
  std::vector<std::size_t> nu_index;  // ground index of each atom of nu
  std::size_t size() const { return mu.size(); }
};

Ground make_ground(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const CostSpec& cost, const Tolerances& tol);

// sum mu g - log sum nu exp(g).
double dual_value(const Ground& ground, const std::vector<double>& g);

// Tilted weights nu exp(g) / Z on the ground set.
std::vector<double> tilted_weights(const Ground& ground, const std::vector<double>& g);

// Largest function below g that is feasible for the cost:
// min_y { g(y) + c(x, y) }. Removes rounding-level violations.
std::vector<double> make_feasible(const Ground& ground, const std::vector<double>& g,
                                  const CostSpec& cost);

// Builds the report for the potential g with gamma = tilt(nu, g), which is
// the solution form of the dual solver.
DivergenceReport report_from_potential(const Ground& ground, std::vector<double> g,
                                       const CostSpec& cost, const Tolerances& tol,
                                       std::string method, std::int64_t iterations);

// Atom-for-atom measure with the given ground weights, dropping zeros.
DiscreteMeasure ground_measure(const Ground& ground, const std::vector<double>& w,
                               const Tolerances& tol);

// Accepts or rejects a finished report according to the options.
// Throws SolverNotConverged when the certified gap exceeds the options.
void finish_report(const DivergenceReport& report, const SolverOptions& options);

// Exact solution when nu is a single atom y: gamma = nu, g = c(., y).
DivergenceReport single_atom_report(const Ground& ground, const CostSpec& cost,
                                    const Tolerances& tol, std::string method);

}  // namespace gammadiv::detail
