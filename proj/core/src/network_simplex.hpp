// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gammadiv::detail {

struct TransportSolution {
  Eigen::MatrixXd flow;  // supply x demand
  std::vector<double> u;  // row duals
  std::vector<double> v;  // column duals, u_i + v_j <= C_ij
  double cost = 0.0;
  long pivots = 0;
};

// Balanced transportation problem min <C, P> subject to P 1 = supply,
// P^T 1 = demand, P >= 0, solved exactly by the primal network simplex method
// on the bipartite graph with an artificial root (strongly feasible trees,
// block pricing). Supplies and demands must be positive.
TransportSolution solve_transport(std::span<const double> supply,
                                  std::span<const double> demand,
                                  const Eigen::MatrixXd& cost);

}  // namespace gammadiv::detail
