// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "gammadiv/errors.hpp"
#include "gammadiv/optim.hpp"

namespace gammadiv::optim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Slacks {
  Eigen::VectorXd lin;   // b - A x
  Eigen::VectorXd quad;  // -h(x)
  bool feasible = true;
};

Slacks slacks(const BarrierProblem& p, const Eigen::VectorXd& x) {
  Slacks s;
  if (p.A.rows() > 0) s.lin = p.b - p.A * x;
  s.quad.resize(static_cast<Eigen::Index>(p.quadratic.size()));
  for (std::size_t k = 0; k < p.quadratic.size(); ++k) {
    s.quad(static_cast<Eigen::Index>(k)) = -p.quadratic[k].value(x);
  }
  s.feasible = (s.lin.size() == 0 || s.lin.minCoeff() > 0.0) &&
               (s.quad.size() == 0 || s.quad.minCoeff() > 0.0);
  return s;
}

double barrier_value(const BarrierProblem& p, double t, const Eigen::VectorXd& x) {
  const Slacks s = slacks(p, x);
  if (!s.feasible) return kInf;
  double v = t * p.objective(x, nullptr, nullptr);
  if (s.lin.size() > 0) v -= s.lin.array().log().sum();
  if (s.quad.size() > 0) v -= s.quad.array().log().sum();
  return v;
}

}  // namespace

BarrierResult minimize_barrier(const BarrierProblem& p, Eigen::VectorXd x,
                               const BarrierOptions& opt) {
  const Eigen::Index n = x.size();
  const double m = static_cast<double>(p.A.rows()) +
                   static_cast<double>(p.quadratic.size());
  const Eigen::Index neq = p.E.rows();
  BarrierResult res;
  if (!slacks(p, x).feasible) {
    throw InvalidInput("barrier method needs a strictly feasible start");
  }

  Eigen::MatrixXd z;
  if (neq > 0) {
    if (p.E.cols() != n || neq >= n) throw InvalidInput("barrier method: bad equality system");
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(p.E.transpose()).householderQ();
    z = q.rightCols(n - neq);
  }

  double t = opt.t0;
  Eigen::VectorXd grad(n);
  Eigen::MatrixXd hess(n, n);
  int steps = 0;
  bool done = m == 0.0;
  while (true) {
    // Centering by damped Newton steps.
    while (steps < opt.max_newton) {
      const double f = p.objective(x, &grad, &hess);
      (void)f;
      Eigen::VectorXd g = t * grad;
      Eigen::MatrixXd h = t * hess;
      const Slacks s = slacks(p, x);
      if (s.lin.size() > 0) {
        const Eigen::VectorXd inv = s.lin.cwiseInverse();
        g += p.A.transpose() * inv;
        h += p.A.transpose() * inv.cwiseAbs2().asDiagonal() * p.A;
      }
      for (std::size_t k = 0; k < p.quadratic.size(); ++k) {
        const auto& qc = p.quadratic[k];
        const double sk = s.quad(static_cast<Eigen::Index>(k));
        const Eigen::VectorXd dh = qc.P * x + qc.q;
        g += dh / sk;
        h += qc.P / sk + dh * dh.transpose() / (sk * sk);
      }

      Eigen::VectorXd dx;
      if (neq == 0) {
        Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
        dx = ldlt.solve(-g);
        if (ldlt.info() != Eigen::Success || !dx.allFinite()) {
          const double ridge = 1e-12 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
          h.diagonal().array() += ridge;
          dx = h.ldlt().solve(-g);
        }
      } else {
        // Reduced Newton step in the null space of E. Solving the full KKT
        // system instead loses E dx = 0 once the barrier Hessian is large.
        const Eigen::MatrixXd hz = z.transpose() * h * z;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hz);
        Eigen::VectorXd dy = ldlt.solve(-z.transpose() * g);
        if (ldlt.info() != Eigen::Success || !dy.allFinite()) {
          Eigen::MatrixXd hr = hz;
          hr.diagonal().array() += 1e-12 * (1.0 + hz.diagonal().cwiseAbs().maxCoeff());
          dy = hr.ldlt().solve(-z.transpose() * g);
        }
        dx = z * dy;
      }
      const double decrement = -g.dot(dx);
      if (!(decrement > 2.0 * opt.newton_tol) || !dx.allFinite()) break;

      // Backtracking line search on the barrier function.
      const double f0 = barrier_value(p, t, x);
      double alpha = 1.0;
      Eigen::VectorXd xn = x + dx;
      double fn = barrier_value(p, t, xn);
      while (!(fn <= f0 - 0.01 * alpha * decrement) && alpha > 1e-14) {
        alpha *= 0.5;
        xn = x + alpha * dx;
        fn = barrier_value(p, t, xn);
      }
      ++steps;
      if (!(fn < kInf) || alpha <= 1e-14) break;
      // Stalled at rounding level: further steps cannot improve the center.
      const bool stalled = !(fn < f0);
      x = xn;
      if (stalled) break;
    }
    if (done || m / t <= opt.gap_tol) {
      res.converged = steps < opt.max_newton;
      break;
    }
    if (steps >= opt.max_newton) break;
    t *= opt.growth;
  }

  res.x = x;
  res.objective = p.objective(x, nullptr, nullptr);
  res.gap_bound = m == 0.0 ? 0.0 : m / t;
  res.newton_steps = steps;
  const Slacks s = slacks(p, x);
  if (s.lin.size() > 0) res.ineq_multipliers = (t * s.lin.array()).inverse().matrix();
  if (s.quad.size() > 0) res.quad_multipliers = (t * s.quad.array()).inverse().matrix();
  return res;
}

}  // namespace gammadiv::optim
