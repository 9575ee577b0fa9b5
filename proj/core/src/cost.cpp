// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "detail.hpp"
#include "gammadiv/errors.hpp"
#include "gammadiv/transport.hpp"

namespace gammadiv {

namespace detail {

std::size_t find_sorted(const std::vector<double>& coords, std::size_t dim,
                        std::span<const double> p, double eps) {
  const std::size_t n = coords.size() / dim;
  std::size_t lo = 0;
  std::size_t hi = n;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (compare_points(row(coords, dim, mid), p, 0.0) < 0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  for (std::size_t i = lo; i < n && row(coords, dim, i)[0] <= p[0] + eps; ++i) {
    if (euclidean(row(coords, dim, i), p) < eps) return i;
  }
  for (std::size_t i = lo; i-- > 0 && row(coords, dim, i)[0] >= p[0] - eps;) {
    if (euclidean(row(coords, dim, i), p) < eps) return i;
  }
  return n;
}

double log_sum_exp(std::span<const double> g, std::span<const double> w) {
  double m = -kInf;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (w[i] > 0.0) m = std::max(m, g[i]);
  }
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (w[i] > 0.0) s += w[i] * std::exp(g[i] - m);
  }
  return m + std::log(s);
}

PointUnion merge_points(std::size_t dim, const std::vector<double>& a,
                        const std::vector<double>& b, double eps) {
  PointUnion u;
  u.dim = dim;
  const std::size_t na = a.size() / dim;
  const std::size_t nb = b.size() / dim;
  u.from_a.resize(na);
  u.from_b.resize(nb);
  u.coords.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  auto push = [&](std::span<const double> p) {
    u.coords.insert(u.coords.end(), p.begin(), p.end());
    return u.size() - 1;
  };
  while (i < na || j < nb) {
    if (j == nb) {
      u.from_a[i] = push(row(a, dim, i));
      ++i;
    } else if (i == na) {
      u.from_b[j] = push(row(b, dim, j));
      ++j;
    } else {
      auto pa = row(a, dim, i);
      auto pb = row(b, dim, j);
      if (euclidean(pa, pb) < eps) {
        const std::size_t k = push(pa);
        u.from_a[i++] = k;
        u.from_b[j++] = k;
      } else if (compare_points(pa, pb, 0.0) < 0) {
        u.from_a[i++] = push(pa);
      } else {
        u.from_b[j++] = push(pb);
      }
    }
  }
  return u;
}

}  // namespace detail

struct CostSpec::Table {
  std::size_t dim = 1;
  std::vector<double> coords;  // sorted lexicographically
  Eigen::MatrixXd matrix;      // in sorted order
  bool symmetric = true;
  double eps = 1e-12;

  std::size_t index(std::span<const double> p) const {
    const std::size_t k = detail::find_sorted(coords, dim, p, eps);
    if (k == coords.size() / dim) {
      throw InvalidInput("point is not part of the explicit cost table");
    }
    return k;
  }
};

CostSpec CostSpec::scaled_metric(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw InvalidInput("metric cost scale must be positive and finite");
  }
  CostSpec c;
  c.kind_ = Kind::kScaledMetric;
  c.scale_ = k;
  return c;
}

CostSpec CostSpec::half_square_gap(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInput("cost scale must be positive and finite");
  }
  CostSpec c;
  c.kind_ = Kind::kHalfSquareGap;
  c.scale_ = scale;
  return c;
}

CostSpec CostSpec::explicit_matrix(std::size_t dim, std::vector<double> coords,
                                   Eigen::MatrixXd matrix, const Tolerances& tol) {
  if (dim == 0 || coords.size() % dim != 0) {
    throw InvalidInput("explicit cost: bad point list");
  }
  const std::size_t n = coords.size() / dim;
  if (static_cast<std::size_t>(matrix.rows()) != n ||
      static_cast<std::size_t>(matrix.cols()) != n) {
    throw InvalidInput("explicit cost: matrix must be " + std::to_string(n) +
                       "x" + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_points(detail::row(coords, dim, a), detail::row(coords, dim, b),
                          0.0) < 0;
  });
  auto table = std::make_shared<Table>();
  table->dim = dim;
  table->eps = tol.point_dedup_eps;
  table->matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    auto p = detail::row(coords, dim, order[r]);
    table->coords.insert(table->coords.end(), p.begin(), p.end());
    for (std::size_t s = 0; s < n; ++s) {
      table->matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) =
          matrix(static_cast<Eigen::Index>(order[r]),
                 static_cast<Eigen::Index>(order[s]));
    }
  }
  const Eigen::MatrixXd& m = table->matrix;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0 && detail::euclidean(detail::row(table->coords, dim, i),
                                   detail::row(table->coords, dim, i - 1)) <
                     tol.point_dedup_eps) {
      throw InvalidInput("explicit cost: duplicate ground points");
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidInput("explicit cost: entries must be finite and >= 0");
      }
      if (i == j && v != 0.0) {
        throw InvalidInput("explicit cost: diagonal must be zero");
      }
      if (i != j && v <= 0.0) {
        throw InvalidInput("explicit cost: off-diagonal entries must be positive");
      }
      if (std::abs(v - m(j, i)) > tol.cost_tri_tol) table->symmetric = false;
    }
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        if (m(i, k) > m(i, j) + m(j, k) + tol.cost_tri_tol) {
          throw InvalidInput("explicit cost: triangle inequality violated at (" +
                             std::to_string(i) + ", " + std::to_string(j) + ", " +
                             std::to_string(k) + ")");
        }
      }
    }
  }
  CostSpec c;
  c.kind_ = Kind::kExplicit;
  c.scale_ = 1.0;
  c.table_ = std::move(table);
  return c;
}

bool CostSpec::symmetric() const {
  return kind_ != Kind::kExplicit || table_->symmetric;
}

CostSpec CostSpec::scaled(double b) const {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw InvalidInput("cost multiplier must be positive and finite");
  }
  CostSpec c = *this;
  c.scale_ = scale_ * b;
  return c;
}

double CostSpec::operator()(std::span<const double> x,
                            std::span<const double> y) const {
  switch (kind_) {
    case Kind::kScaledMetric:
      return scale_ * detail::euclidean(x, y);
    case Kind::kHalfSquareGap:
      return scale_ * 0.5 * std::abs(x[0] * x[0] - y[0] * y[0]);
    case Kind::kExplicit:
      return scale_ * table_->matrix(static_cast<Eigen::Index>(table_->index(x)),
                                     static_cast<Eigen::Index>(table_->index(y)));
  }
  return 0.0;
}

bool CostSpec::chain_reducible(std::size_t dim) const {
  return dim == 1 && kind_ != Kind::kExplicit;
}

double CostSpec::embed(double x) const {
  return kind_ == Kind::kHalfSquareGap ? 0.5 * x * x : x;
}

void CostSpec::check_points(std::size_t dim, std::span<const double> coords) const {
  if (kind_ == Kind::kHalfSquareGap) {
    if (dim != 1) throw InvalidInput("half-square gap cost is one-dimensional");
    for (double x : coords) {
      if (x < 0.0) throw InvalidInput("half-square gap cost needs points >= 0");
    }
  } else if (kind_ == Kind::kExplicit) {
    if (dim != table_->dim) throw InvalidInput("explicit cost: dimension mismatch");
    for (std::size_t i = 0; i < coords.size() / dim; ++i) {
      (void)table_->index(coords.subspan(i * dim, dim));
    }
  }
}

Eigen::MatrixXd cost_matrix(const CostSpec& cost, std::size_t dim,
                            std::span<const double> a, std::span<const double> b) {
  const std::size_t na = a.size() / dim;
  const std::size_t nb = b.size() / dim;
  Eigen::MatrixXd c(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cost(a.subspan(i * dim, dim), b.subspan(j * dim, dim));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(std::size_t dim, std::vector<double> coords,
                     std::vector<double> values, CostSpec cost,
                     const Tolerances& tol)
    : dim_(dim), cost_(std::move(cost)), eps_(tol.point_dedup_eps) {
  if (dim == 0 || coords.size() != values.size() * dim) {
    throw InvalidInput("potential: point/value size mismatch");
  }
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return compare_points(detail::row(coords, dim, a), detail::row(coords, dim, b),
                          0.0) < 0;
  });
  coords_.reserve(coords.size());
  values_.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto p = detail::row(coords, dim, order[r]);
    if (r > 0 && detail::euclidean(p, point(r - 1)) < eps_) {
      throw InvalidInput("potential: duplicate base points");
    }
    if (!std::isfinite(values[order[r]])) {
      throw InvalidInput("potential: values must be finite");
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
    values_.push_back(values[order[r]]);
  }
  cost_.check_points(dim_, coords_);
  const double scale = std::max(1.0, cost_.scale());
  const double viol = max_violation();
  if (viol > tol.lip_tol * scale) {
    throw InvalidInput("potential violates the Lipschitz constraint by " +
                       std::to_string(viol));
  }
}

double Potential::max_violation() const {
  const std::size_t n = size();
  double worst = -detail::kInf;
  if (n < 2) return n == 0 ? 0.0 : -detail::kInf;
  if (cost_.chain_reducible(dim_)) {
    // c(x_i, x_j) = S_j - S_i for i < j, so the worst pair follows from
    // running minima of g - S and g + S.
    double min_minus = detail::kInf;  // min_{i<j} g_i - S_i
    double min_plus = detail::kInf;   // min_{i<j} -(g_i + S_i)
    for (std::size_t j = 0; j < n; ++j) {
      const double s = cost_.scale() * cost_.embed(coords_[j]);
      const double g = values_[j];
      if (j > 0) {
        worst = std::max(worst, (g - s) - min_minus);      // g_j - g_i - c
        worst = std::max(worst, -(g + s) - min_plus);      // g_i - g_j - c
      }
      min_minus = std::min(min_minus, g - s);
      min_plus = std::min(min_plus, -(g + s));
    }
    return worst;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      worst = std::max(worst, values_[i] - values_[j] - cost_(point(i), point(j)));
    }
  }
  return worst;
}

std::vector<double> Potential::values_on(const DiscreteMeasure& mu) const {
  if (mu.dim() != dim_) throw InvalidInput("potential: dimension mismatch");
  std::vector<double> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::size_t k = detail::find_sorted(coords_, dim_, mu.point(i), eps_);
    if (k == size()) {
      throw InvalidInput("potential is not defined at a support point");
    }
    out[i] = values_[k];
  }
  return out;
}

std::vector<double> Potential::evaluate_on(const DiscreteMeasure& mu) const {
  if (mu.dim() != dim_) throw InvalidInput("potential: dimension mismatch");
  std::vector<double> out(mu.size());
  std::vector<double> missing;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const std::size_t k = detail::find_sorted(coords_, dim_, mu.point(i), eps_);
    if (k == size()) {
      auto p = mu.point(i);
      missing.insert(missing.end(), p.begin(), p.end());
      where.push_back(i);
    } else {
      out[i] = values_[k];
    }
  }
  if (!where.empty()) {
    const std::vector<double> ext = extend_potential(*this, missing);
    for (std::size_t r = 0; r < where.size(); ++r) out[where[r]] = ext[r];
  }
  return out;
}

Potential Potential::normalized() const {
  Potential p = *this;
  if (!p.values_.empty()) {
    const double shift = p.values_[0];
    for (double& v : p.values_) v -= shift;
  }
  return p;
}

std::vector<double> extend_potential(const Potential& g,
                                     std::span<const double> query_coords) {
  const std::size_t dim = g.dim();
  const std::size_t nq = query_coords.size() / dim;
  const std::size_t n = g.size();
  std::vector<double> out(nq, detail::kInf);
  if (n == 0) return out;
  const CostSpec& cost = g.cost();
  cost.check_points(dim, query_coords);
  if (cost.chain_reducible(dim)) {
    // min over base points left of x of g(y) - S(y), plus S(x); symmetric on
    // the right.
    std::vector<double> s(n);
    std::vector<double> prefix(n);
    std::vector<double> suffix(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = cost.scale() * cost.embed(g.point(i)[0]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      prefix[i] = std::min(i > 0 ? prefix[i - 1] : detail::kInf, g.value(i) - s[i]);
    }
    for (std::size_t i = n; i-- > 0;) {
      suffix[i] = std::min(i + 1 < n ? suffix[i + 1] : detail::kInf,
                           g.value(i) + s[i]);
    }
    for (std::size_t q = 0; q < nq; ++q) {
      const double x = query_coords[q];
      const double sx = cost.scale() * cost.embed(x);
      // First base point with coordinate >= x.
      std::size_t lo = 0;
      std::size_t hi = n;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (g.point(mid)[0] < x) {
          lo = mid + 1;
        } else {
          hi = mid;
        }
      }
      double best = detail::kInf;
      if (lo > 0) best = std::min(best, prefix[lo - 1] + sx);
      if (lo < n) best = std::min(best, suffix[lo] - sx);
      out[q] = best;
    }
    return out;
  }
  for (std::size_t q = 0; q < nq; ++q) {
    auto x = query_coords.subspan(q * dim, dim);
    double best = detail::kInf;
    for (std::size_t i = 0; i < n; ++i) {
      best = std::min(best, g.value(i) + cost(x, g.point(i)));
    }
    out[q] = best;
  }
  return out;
}

}  // namespace gammadiv
