// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Log-barrier interior-point method for small dense convex programs. The
// divergence solvers, the cutting-plane master problem and the sensitivity
// solver are all instances.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace gammadiv::optim {

// Smooth convex objective: returns f(x) and, when the pointers are non-null,
// fills the gradient and Hessian.
using SmoothFunction = std::function<double(const Eigen::VectorXd& x,
                                            Eigen::VectorXd* grad,
                                            Eigen::MatrixXd* hess)>;

// 0.5 x^T P x + q^T x + r <= 0 with P positive semidefinite.
struct QuadraticConstraint {
  Eigen::MatrixXd P;
  Eigen::VectorXd q;
  double r = 0.0;

  double value(const Eigen::VectorXd& x) const {
    return 0.5 * x.dot(P * x) + q.dot(x) + r;
  }
};

// minimize f(x) subject to A x <= b, the quadratic constraints, and E x = e.
struct BarrierProblem {
  SmoothFunction objective;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<QuadraticConstraint> quadratic;
  Eigen::MatrixXd E;
  Eigen::VectorXd e;
};

struct BarrierOptions {
  double t0 = 1.0;
  double growth = 10.0;
  double gap_tol = 1e-10;     // stop once (#constraints) / t is below this
  double newton_tol = 1e-12;  // half squared Newton decrement per centering
  int max_newton = 5000;
};

struct BarrierResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  double gap_bound = 0.0;           // duality gap bound of the last center
  Eigen::VectorXd ineq_multipliers;  // one per row of A
  Eigen::VectorXd quad_multipliers;  // one per quadratic constraint
  int newton_steps = 0;
  bool converged = false;
};

// x0 must be strictly feasible for the inequalities and satisfy E x0 = e.
BarrierResult minimize_barrier(const BarrierProblem& problem, Eigen::VectorXd x0,
                               const BarrierOptions& options = {});

}  // namespace gammadiv::optim
