// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gammadiv/errors.hpp"

namespace gammadiv {

int compare_points(std::span<const double> a, std::span<const double> b,
                   double eps) {
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (a[d] < b[d] - eps) return -1;
    if (a[d] > b[d] + eps) return 1;
  }
  return 0;
}

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::size_t dim, std::vector<double> coords,
                                 std::vector<double> weights, MeasureKind kind,
                                 const Tolerances& tol)
    : dim_(dim), kind_(kind), eps_(tol.point_dedup_eps) {
  if (dim == 0) throw InvalidInput("measure dimension must be positive");
  if (coords.size() != weights.size() * dim) {
    throw InvalidInput("measure has " + std::to_string(weights.size()) +
                       " weights but " + std::to_string(coords.size()) +
                       " coordinates for dimension " + std::to_string(dim));
  }
  for (double c : coords) {
    if (!std::isfinite(c)) throw InvalidInput("measure point is not finite");
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidInput("measure weight is not finite");
    if (kind == MeasureKind::kProbability && w < -tol.mass_tol) {
      throw InvalidInput("probability measure has negative weight " +
                         std::to_string(w));
    }
  }

  const std::size_t n = weights.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto pt = [&](std::size_t i) {
    return std::span<const double>(coords.data() + i * dim, dim);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_points(pt(a), pt(b), 0.0) < 0;
  });

  // Merge atoms closer than eps. Candidates share the first coordinate up to
  // eps, so a backward scan over the kept atoms suffices.
  std::vector<double> kept_coords;
  std::vector<double> kept_weights;
  kept_coords.reserve(coords.size());
  kept_weights.reserve(n);
  for (std::size_t i : order) {
    std::span<const double> p = pt(i);
    bool merged = false;
    for (std::size_t r = kept_weights.size(); r-- > 0;) {
      std::span<const double> q(kept_coords.data() + r * dim, dim);
      if (q[0] < p[0] - eps_) break;
      if (distance(p, q) < eps_) {
        kept_weights[r] += weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      kept_coords.insert(kept_coords.end(), p.begin(), p.end());
      kept_weights.push_back(weights[i]);
    }
  }

  coords_.reserve(kept_coords.size());
  weights_.reserve(kept_weights.size());
  for (std::size_t r = 0; r < kept_weights.size(); ++r) {
    double w = kept_weights[r];
    if (kind == MeasureKind::kProbability && w < 0.0) w = 0.0;
    if (w == 0.0) continue;
    coords_.insert(coords_.end(), kept_coords.begin() + r * dim,
                   kept_coords.begin() + (r + 1) * dim);
    weights_.push_back(w);
  }

  const double total = total_mass();
  if (kind == MeasureKind::kProbability) {
    if (weights_.empty()) throw InvalidInput("probability measure has no atoms");
    if (std::abs(total - 1.0) > tol.mass_tol) {
      throw InvalidInput("probability weights sum to " + std::to_string(total) +
                         ", expected 1");
    }
  } else {
    double scale = 0.0;
    for (double w : weights_) scale += std::abs(w);
    if (std::abs(total) > tol.mass_tol * std::max(1.0, scale)) {
      throw InvalidInput("signed measure has total mass " +
                         std::to_string(total) + ", expected 0");
    }
  }
}

DiscreteMeasure DiscreteMeasure::probability(std::size_t dim,
                                             std::vector<double> coords,
                                             std::vector<double> weights,
                                             const Tolerances& tol) {
  return DiscreteMeasure(dim, std::move(coords), std::move(weights),
                         MeasureKind::kProbability, tol);
}

DiscreteMeasure DiscreteMeasure::signed_measure(std::size_t dim,
                                                std::vector<double> coords,
                                                std::vector<double> weights,
                                                const Tolerances& tol) {
  return DiscreteMeasure(dim, std::move(coords), std::move(weights),
                         MeasureKind::kSigned, tol);
}

DiscreteMeasure DiscreteMeasure::on_line(std::vector<double> xs,
                                         std::vector<double> weights,
                                         const Tolerances& tol) {
  return probability(1, std::move(xs), std::move(weights), tol);
}

DiscreteMeasure DiscreteMeasure::dirac(std::span<const double> point) {
  return probability(point.size(), std::vector<double>(point.begin(), point.end()),
                     {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t dim,
                                         std::vector<double> coords,
                                         const Tolerances& tol) {
  if (dim == 0 || coords.empty() || coords.size() % dim != 0) {
    throw InvalidInput("uniform measure needs a nonempty point list");
  }
  const std::size_t n = coords.size() / dim;
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  return probability(dim, std::move(coords), std::move(w), tol);
}

double DiscreteMeasure::total_mass() const {
  // Kahan summation keeps 4000-cell grids within mass_tol.
  double sum = 0.0;
  double carry = 0.0;
  for (double w : weights_) {
    const double y = w - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::size_t DiscreteMeasure::find(std::span<const double> p) const {
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (compare_points(point(mid), p, 0.0) < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  // A match shares the first coordinate up to eps, so it lies in a window
  // around the insertion point.
  for (std::size_t i = lo; i < size() && point(i)[0] <= p[0] + eps_; ++i) {
    if (distance(point(i), p) < eps_) return i;
  }
  for (std::size_t i = lo; i-- > 0 && point(i)[0] >= p[0] - eps_;) {
    if (distance(point(i), p) < eps_) return i;
  }
  return size();
}

double GridDensity::operator()(double x) const {
  if (x < left || x > right || density.empty()) return 0.0;
  auto i = static_cast<std::size_t>((x - left) / cell_width());
  if (i >= density.size()) i = density.size() - 1;
  return density[i];
}

void GridDensity::validate(const Tolerances& tol) const {
  if (!(right > left) || !std::isfinite(left) || !std::isfinite(right)) {
    throw InvalidInput("grid density needs finite left < right");
  }
  if (density.empty()) throw InvalidInput("grid density has no cells");
  double sum = 0.0;
  for (double d : density) {
    if (!std::isfinite(d) || d < 0.0) {
      throw InvalidInput("grid density values must be finite and nonnegative");
    }
    sum += d;
  }
  const double mass = sum * cell_width();
  if (std::abs(mass - 1.0) > tol.mass_tol) {
    throw InvalidInput("grid density integrates to " + std::to_string(mass) +
                       ", expected 1");
  }
}

GridDensity GridDensity::normalized(double left, double right,
                                    std::vector<double> values) {
  GridDensity g{left, right, std::move(values)};
  if (!(right > left) || g.density.empty()) {
    throw InvalidInput("grid density needs left < right and at least one cell");
  }
  double sum = 0.0;
  for (double d : g.density) {
    if (!std::isfinite(d) || d < 0.0) {
      throw InvalidInput("grid density values must be finite and nonnegative");
    }
    sum += d;
  }
  if (sum <= 0.0) throw InvalidInput("grid density has zero mass");
  const double scale = 1.0 / (sum * g.cell_width());
  for (double& d : g.density) d *= scale;
  return g;
}

GridDensity GridDensity::from_function(double left, double right,
                                       std::size_t n_cells,
                                       const std::function<double(double)>& f) {
  if (n_cells == 0) throw InvalidInput("grid needs at least one cell");
  std::vector<double> values(n_cells);
  const double h = (right - left) / static_cast<double>(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    values[i] = f(left + (static_cast<double>(i) + 0.5) * h);
  }
  return normalized(left, right, std::move(values));
}

GridDensity GridDensity::uniform(double left, double right, std::size_t n_cells) {
  return from_function(left, right, n_cells, [](double) { return 1.0; });
}

double GaussianParams::sd() const { return std::sqrt(variance); }

void GaussianParams::validate() const {
  if (!std::isfinite(mean)) throw InvalidInput("gaussian mean must be finite");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw InvalidInput("gaussian variance must be positive and finite");
  }
}

DiscreteMeasure to_discrete(const GridDensity& g, const Tolerances& tol) {
  if (!(g.right > g.left) || g.density.empty()) {
    throw InvalidInput("grid density needs left < right and at least one cell");
  }
  const std::size_t n = g.n_cells();
  const double h = g.cell_width();
  std::vector<double> xs(n);
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(g.density[i]) || g.density[i] < 0.0) {
      throw InvalidInput("grid density values must be finite and nonnegative");
    }
    xs[i] = g.cell_midpoint(i);
    w[i] = g.density[i] * h;
    sum += w[i];
  }
  if (sum <= 0.0) throw InvalidInput("grid density has zero mass");
  for (double& v : w) v /= sum;
  return DiscreteMeasure::probability(1, std::move(xs), std::move(w), tol);
}

std::vector<double> moments(const DiscreteMeasure& mu, int k) {
  if (k < 1) throw InvalidInput("moment order must be at least 1");
  if (mu.dim() > 1 && k > 2) {
    throw InvalidInput("moments of order > 2 are only defined in one dimension");
  }
  std::vector<double> out(mu.dim(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto p = mu.point(i);
    for (std::size_t d = 0; d < mu.dim(); ++d) {
      out[d] += mu.weight(i) * std::pow(p[d], k);
    }
  }
  return out;
}

double moment(const DiscreteMeasure& mu, int k) {
  if (mu.dim() != 1) throw InvalidInput("moment() needs a 1-D measure");
  return moments(mu, k)[0];
}

std::vector<CdfPoint> cdf_values(const DiscreteMeasure& mu) {
  if (mu.dim() != 1) throw InvalidInput("cdf_values needs a 1-D measure");
  std::vector<CdfPoint> out;
  out.reserve(mu.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    cum += mu.weight(i);
    out.push_back({mu.point(i)[0], cum});
  }
  // Atoms are sorted, so the last cumulative value is the total mass; pin it.
  if (!out.empty() && mu.kind() == MeasureKind::kProbability) {
    out.back().cumulative = 1.0;
  }
  return out;
}

double expectation(const DiscreteMeasure& mu, std::span<const double> f) {
  if (f.size() != mu.size()) throw InvalidInput("function/measure size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weight(i) * f[i];
  return s;
}

double variance(const DiscreteMeasure& mu, std::span<const double> f) {
  const double m = expectation(mu, f);
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += mu.weight(i) * (f[i] - m) * (f[i] - m);
  }
  return s;
}

namespace {

DiscreteMeasure combine(const DiscreteMeasure& a, double wa,
                        const DiscreteMeasure& b, double wb, MeasureKind kind,
                        const Tolerances& tol) {
  if (a.dim() != b.dim()) throw InvalidInput("measure dimensions differ");
  std::vector<double> coords = a.coords();
  coords.insert(coords.end(), b.coords().begin(), b.coords().end());
  std::vector<double> w;
  w.reserve(a.size() + b.size());
  for (double x : a.weights()) w.push_back(wa * x);
  for (double x : b.weights()) w.push_back(wb * x);
  return DiscreteMeasure(a.dim(), std::move(coords), std::move(w), kind, tol);
}

}  // namespace

DiscreteMeasure mix(const DiscreteMeasure& a, const DiscreteMeasure& b, double t) {
  if (t < 0.0 || t > 1.0) throw InvalidInput("mixing weight must lie in [0,1]");
  return combine(a, 1.0 - t, b, t, a.kind(), {});
}

DiscreteMeasure perturb(const DiscreteMeasure& mu, const DiscreteMeasure& rho,
                        double eps, const Tolerances& tol) {
  // Merge first as a signed measure so that cancellations are exact, then
  // reinterpret as a probability measure.
  std::vector<double> coords = mu.coords();
  coords.insert(coords.end(), rho.coords().begin(), rho.coords().end());
  std::vector<double> w = mu.weights();
  for (double x : rho.weights()) w.push_back(eps * x);
  DiscreteMeasure merged(mu.dim(), coords, w, MeasureKind::kSigned,
                         Tolerances{.mass_tol = 1e300});
  std::vector<double> mw = merged.weights();
  for (double& x : mw) {
    if (x < 0.0 && x > -tol.mass_tol) x = 0.0;
  }
  return DiscreteMeasure(mu.dim(), merged.coords(), std::move(mw),
                         MeasureKind::kProbability, tol);
}

}  // namespace gammadiv
