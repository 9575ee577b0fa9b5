// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gammadiv/tolerances.hpp"

namespace gammadiv {

enum class MeasureKind { kProbability, kSigned };

// A finitely supported measure on R^m.
//
// Atoms are stored in lexicographic order of their coordinates. Atoms closer
// than point_dedup_eps are merged (weights added) and atoms with zero weight
// are dropped, so two measures with the same atoms compare equal atom by atom.
// Probability measures have nonnegative weights summing to one within
// mass_tol; signed measures (perturbation directions) sum to zero.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;

  // `coords` holds the points row by row: point i is
  // coords[i*dim .. i*dim+dim). Throws InvalidInput on violated invariants.
  DiscreteMeasure(std::size_t dim, std::vector<double> coords,
                  std::vector<double> weights, MeasureKind kind,
                  const Tolerances& tol = {});

  static DiscreteMeasure probability(std::size_t dim, std::vector<double> coords,
                                     std::vector<double> weights,
                                     const Tolerances& tol = {});
  static DiscreteMeasure signed_measure(std::size_t dim,
                                        std::vector<double> coords,
                                        std::vector<double> weights,
                                        const Tolerances& tol = {});
  // One-dimensional probability measure.
  static DiscreteMeasure on_line(std::vector<double> xs,
                                 std::vector<double> weights,
                                 const Tolerances& tol = {});
  static DiscreteMeasure dirac(std::span<const double> point);
  // Uniform weights on the given points.
  static DiscreteMeasure uniform(std::size_t dim, std::vector<double> coords,
                                 const Tolerances& tol = {});

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  MeasureKind kind() const { return kind_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }
  double total_mass() const;

  // Index of the atom at `p` (within point_dedup_eps), or size() if absent.
  std::size_t find(std::span<const double> p) const;

 private:
  std::size_t dim_ = 1;
  std::vector<double> coords_;
  std::vector<double> weights_;
  MeasureKind kind_ = MeasureKind::kProbability;
  double eps_ = 1e-12;
};

// Lexicographic comparison of two points; returns -1, 0 or 1, treating
// coordinates within `eps` as equal.
int compare_points(std::span<const double> a, std::span<const double> b,
                   double eps);

// Piecewise-constant density on a uniform 1-D grid.
struct GridDensity {
  double left = 0.0;
  double right = 1.0;
  std::vector<double> density;  // per unit length, one value per cell

  std::size_t n_cells() const { return density.size(); }
  double cell_width() const {
    return (right - left) / static_cast<double>(density.size());
  }
  double cell_midpoint(std::size_t i) const {
    return left + (static_cast<double>(i) + 0.5) * cell_width();
  }
  // Density at x (0 outside [left, right]).
  double operator()(double x) const;

  // Throws InvalidInput unless right > left, values are finite and
  // nonnegative and the Riemann sum is one within mass_tol.
  void validate(const Tolerances& tol = {}) const;

  // Builds a grid from nonnegative cell values, rescaling to unit mass.
  static GridDensity normalized(double left, double right,
                                std::vector<double> values);
  // Samples f at cell midpoints, then rescales to unit mass.
  static GridDensity from_function(double left, double right,
                                   std::size_t n_cells,
                                   const std::function<double(double)>& f);
  static GridDensity uniform(double left, double right, std::size_t n_cells);
};

struct GaussianParams {
  double mean = 0.0;
  double variance = 1.0;

  double sd() const;
  void validate() const;  // variance > 0 and finite
};

// Cell-midpoint atoms weighted by density times cell width, renormalized so
// that the total mass is exactly one.
DiscreteMeasure to_discrete(const GridDensity& g, const Tolerances& tol = {});

// Sum_i w_i x_i^k, one entry per coordinate. For dim > 1 only k in {1, 2}
// is accepted.
std::vector<double> moments(const DiscreteMeasure& mu, int k);
// One-dimensional convenience wrapper around moments().
double moment(const DiscreteMeasure& mu, int k);

struct CdfPoint {
  double x;
  double cumulative;
};

// Right-continuous CDF of a 1-D probability measure as (atom, F(atom)) pairs.
std::vector<CdfPoint> cdf_values(const DiscreteMeasure& mu);

// Integral of f against mu, where f[i] is the value at atom i.
double expectation(const DiscreteMeasure& mu, std::span<const double> f);
// Variance of f under the probability measure mu.
double variance(const DiscreteMeasure& mu, std::span<const double> f);

// Convex combination (1 - t) a + t b of two measures of the same dimension.
DiscreteMeasure mix(const DiscreteMeasure& a, const DiscreteMeasure& b,
                    double t);

// mu + eps * rho (used for perturbation directions); result is a
// probability measure.
DiscreteMeasure perturb(const DiscreteMeasure& mu, const DiscreteMeasure& rho,
                        double eps, const Tolerances& tol = {});

}  // namespace gammadiv
