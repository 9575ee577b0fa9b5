// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Interior-point solver for
//
//   maximize  sum_i mu_i g_i - log sum_i nu_i exp(g_i)
//   subject to |(D g)_k| <= w_k,
//
// where D takes first or second differences along a chain of points. The
// Newton system is banded apart from a rank-one term, so each step is O(n).

#pragma once

#include <vector>

namespace gammadiv::detail {

struct ChainProblem {
  int order = 1;             // 1: g_{k+1} - g_k, 2: g_k - 2 g_{k+1} + g_{k+2}
  std::vector<double> mu;    // weights on the chain (may be zero)
  std::vector<double> nu;    // weights on the chain (may be zero)
  std::vector<double> bound; // w_k > 0, one per difference
};

struct ChainResult {
  std::vector<double> g;
  double value = 0.0;      // objective at g
  double gap_bound = 0.0;  // (#constraints) / t at the last center
  int newton_steps = 0;
  bool converged = false;
};

ChainResult solve_chain_dual(const ChainProblem& problem, double gap_tol = 1e-11,
                             int max_newton = 20000);

// Objective value sum mu g - log sum nu exp(g).
double chain_objective(const ChainProblem& problem, const std::vector<double>& g);

}  // namespace gammadiv::detail
