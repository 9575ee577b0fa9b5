// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gammadiv/measures.hpp"
#include "gammadiv/tolerances.hpp"

namespace gammadiv {

// Transport cost c(x, y). Every kind carries a positive multiplier, so that
// scaling a cost (the b*c of the limit results) never changes its kind.
class CostSpec {
 public:
  enum class Kind { kScaledMetric, kHalfSquareGap, kExplicit };

  // k * ||x - y||_2.
  static CostSpec scaled_metric(double k);
  // scale * |x^2 - y^2| / 2 on the half line x, y >= 0.
  static CostSpec half_square_gap(double scale = 1.0);
  // Cost table over a finite ground set. `coords` lists the ground points
  // row by row and `matrix(i, j)` is c(point i, point j). The matrix must be
  // nonnegative with zero diagonal, positive off the diagonal and satisfy the
  // triangle inequality within cost_tri_tol; otherwise InvalidInput.
  static CostSpec explicit_matrix(std::size_t dim, std::vector<double> coords,
                                  Eigen::MatrixXd matrix,
                                  const Tolerances& tol = {});

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  bool symmetric() const;

  // The same cost multiplied by b > 0.
  CostSpec scaled(double b) const;

  double operator()(std::span<const double> x, std::span<const double> y) const;

  // True when, in one dimension, c(x, y) = scale * |phi(x) - phi(y)| for an
  // increasing phi. Such costs are additive along sorted points, so
  // constraints and transport reduce to neighbouring pairs.
  bool chain_reducible(std::size_t dim) const;
  // phi for chain-reducible costs (x for the metric, x^2/2 for the gap).
  double embed(double x) const;

  // Rejects points outside the domain of the cost (negative points for the
  // half-square gap, points missing from an explicit table).
  void check_points(std::size_t dim, std::span<const double> coords) const;

 private:
  struct Table;
  Kind kind_ = Kind::kScaledMetric;
  double scale_ = 1.0;
  std::shared_ptr<const Table> table_;
};

// Dense cost matrix C(i, j) = c(a_i, b_j) between the atoms of two measures
// (or raw point lists).
Eigen::MatrixXd cost_matrix(const CostSpec& cost, std::size_t dim,
                            std::span<const double> a, std::span<const double> b);

struct TransportPlan {
  DiscreteMeasure rows;
  DiscreteMeasure cols;
  Eigen::MatrixXd plan;  // plan(i, j) = mass moved from rows[i] to cols[j]
  double cost = 0.0;
};

// Values of a test function g on a finite point set, tied to the cost whose
// Lipschitz class it belongs to: g(x) - g(y) <= c(x, y) for all base pairs.
// Base points are kept in lexicographic order.
class Potential {
 public:
  Potential() = default;
  // Throws InvalidInput when the values violate the Lipschitz constraint by
  // more than lip_tol (relative to the cost scale).
  Potential(std::size_t dim, std::vector<double> coords,
            std::vector<double> values, CostSpec cost,
            const Tolerances& tol = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double value(std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& coords() const { return coords_; }
  const CostSpec& cost() const { return cost_; }

  // Largest violation of g(x) - g(y) <= c(x, y) over base pairs (<= 0 when
  // feasible).
  double max_violation() const;

  // Values at the atoms of mu, in mu's order. Throws InvalidInput if an
  // atom is not a base point.
  std::vector<double> values_on(const DiscreteMeasure& mu) const;
  // Values at the atoms of mu, extending by extend_potential() where an
  // atom is not a base point.
  std::vector<double> evaluate_on(const DiscreteMeasure& mu) const;

  // Copy shifted so that the lexicographically smallest base point has
  // value zero.
  Potential normalized() const;

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> values_;
  CostSpec cost_;
  double eps_ = 1e-12;
};

// Integral of |F_mu - F_nu| over the line, exact over merged breakpoints.
double w1_cdf(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Optimal coupling by the network simplex method.
TransportPlan ot_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    const CostSpec& cost, const Tolerances& tol = {});

struct DualSolution {
  double value = 0.0;
  Potential potential;  // on the union of supports, normalized
};

// Kantorovich dual: sup of int g d(mu - nu) over the Lipschitz class of the
// cost, with a maximizing potential on supp(mu) and supp(nu).
DualSolution ot_dual(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const CostSpec& cost, const Tolerances& tol = {});

// Transport cost between two probability measures using the fastest exact
// route (cumulative distributions for chain-reducible costs, the network
// simplex otherwise).
double transport_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const CostSpec& cost, const Tolerances& tol = {});

// Largest Lipschitz extension g*(x) = min_y { g(y) + c(x, y) } over the base
// points y of g, evaluated at each query point (row-major coordinates).
std::vector<double> extend_potential(const Potential& g,
                                     std::span<const double> query_coords);

// sup of int g d(rho) over the Lipschitz class, for a signed measure rho of
// zero total mass (the transport distance between its positive and
// negative parts).
double signed_transport(const DiscreteMeasure& rho, const CostSpec& cost,
                        const Tolerances& tol = {});

}  // namespace gammadiv
