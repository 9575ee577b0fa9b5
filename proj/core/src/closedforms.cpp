// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/closedforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "detail.hpp"
#include "gammadiv/entropy.hpp"
#include "gammadiv/errors.hpp"

namespace gammadiv {

double PiecewiseLinear::operator()(double x) const {
  double v = start;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (x <= a) break;
    v += slopes[i] * (std::min(x, b) - a);
  }
  return v;
}

namespace {

// Safeguarded Newton for an increasing function h on [lo, hi] with
// h(lo) <= 0 <= h(hi).
template <class H, class DH>
double increasing_root(H h, DH dh, double lo, double hi, double x) {
  for (int it = 0; it < 200; ++it) {
    const double v = h(x);
    if (v == 0.0) return x;
    if (v < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    double next = x - v / dh(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x)) || hi - lo <= 1e-300) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace

UniformPairSolution uniform_stretch(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("uniform_stretch needs c > 0");
  UniformPairSolution s;
  s.c = c;
  s.transport_mu_nu = c / 2.0;
  s.rel_entropy_mu_nu = std::numeric_limits<double>::infinity();
  const double e = std::numbers::e;
  if (c < e - 2.0) {
    // z = 1 - b solves expm1(z) - z = c.
    auto h = [c](double z) { return std::expm1(z) - z - c; };
    auto dh = [](double z) { return std::expm1(z); };
    const double z = increasing_root(h, dh, 0.0, 1.0, std::min(std::sqrt(2.0 * c), 0.999));
    s.b = 1.0 - z;
    s.root_residual = std::abs(h(z));
    s.value = -std::log1p(c) + (c + z) * (c + z) / (2.0 * (1.0 + c));
    s.re_part = -std::log1p(c) + (z * z + c * z - c) / (1.0 + c);
  } else {
    s.b = 0.0;
    s.boundary_case = true;
    s.value = (1.0 + c) / 2.0 - std::log(e - 1.0);
    s.re_part = 1.0 / (e - 1.0) - std::log(e - 1.0);
  }
  s.w_part = s.value - s.re_part;
  s.g_star.breakpoints = {0.0, s.b, 1.0 + c};
  s.g_star.slopes = {0.0, 1.0};
  return s;
}

UniformPairSolution uniform_shrink(double c) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidInput("uniform_shrink needs 0 < c < 1");
  UniformPairSolution s;
  s.c = c;
  s.transport_mu_nu = c / 2.0;
  s.rel_entropy_mu_nu = -std::log1p(-c);
  const double e = std::numbers::e;
  if (c < 1.0 / e) {
    // w = 1 - b solves expm1(-w) + w = c.
    auto h = [c](double w) { return std::expm1(-w) + w - c; };
    auto dh = [](double w) { return -std::expm1(-w); };
    const double w = increasing_root(h, dh, 0.0, 1.0, std::min(std::sqrt(2.0 * c), 0.999));
    s.b = 1.0 - w;
    s.root_residual = std::abs(h(w));
    s.value = -(w - c) * (w - c) / (2.0 * (1.0 - c)) - std::log1p(-c);
    s.re_part = ((1.0 + w) * std::exp(-w) - 1.0) / (1.0 - c) - std::log1p(-c);
  } else {
    s.b = 0.0;
    s.boundary_case = true;
    const double z = 1.0 - 1.0 / e;
    s.value = -(1.0 - c) / 2.0 - std::log(z);
    s.re_part = -(1.0 - 2.0 / e) / z - std::log(z);
  }
  s.w_part = s.value - s.re_part;
  s.g_star.breakpoints = {0.0, s.b, 1.0};
  s.g_star.slopes = {0.0, -1.0};
  return s;
}

DensityStretchSolution density_stretch(const std::function<double(double)>& f, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidInput("density_stretch needs c > 0");
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto integrate = [](auto fn, double a, double b) {
    if (!(b > a)) return 0.0;
    return Quad::integrate(fn, a, b, 15, 1e-14);
  };
  for (int i = 0; i <= 64; ++i) {
    const double x = (1.0 + c) * i / 64.0;
    const double v = f(x);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInput("density_stretch needs f > 0 on [0, 1 + c]");
    }
  }
  const double mass_mu = integrate(f, 0.0, 1.0 + c);
  const double mass_nu = integrate(f, 0.0, 1.0);
  auto H = [&](double b) {
    return integrate([&](double x) { return std::exp(x - b) * f(x); }, b, 1.0) -
           integrate(f, b, 1.0 + c);
  };

  DensityStretchSolution s;
  s.c = c;
  s.h_at_zero = H(0.0);
  if (s.h_at_zero > 0.0) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (H(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double b = 0.5 * (lo + hi);
    s.b = b;
    s.value = integrate([&](double x) { return (x - b) * f(x); }, b, 1.0 + c) / mass_mu -
              std::log(mass_mu / mass_nu);
    // gamma* has density exp(g) / Z with respect to nu, Z = mass_mu / mass_nu.
    s.re_part =
        integrate([&](double x) { return (x - b) * std::exp(x - b) * f(x); }, b, 1.0) / mass_mu -
        std::log(mass_mu / mass_nu);
  } else {
    s.b = 0.0;
    s.boundary_case = true;
    const double tilt_mass = integrate([&](double x) { return std::exp(x) * f(x); }, 0.0, 1.0);
    s.value = integrate([&](double x) { return x * f(x); }, 0.0, 1.0 + c) / mass_mu -
              std::log(tilt_mass / mass_nu);
    s.re_part = integrate([&](double x) { return x * std::exp(x) * f(x); }, 0.0, 1.0) /
                    tilt_mass -
                std::log(tilt_mass / mass_nu);
  }
  s.w_part = s.value - s.re_part;
  s.g_star.breakpoints = {0.0, s.b, 1.0 + c};
  s.g_star.slopes = {0.0, 1.0};
  return s;
}

namespace {

// Shared construction for the add/remove examples. `sign` is -1 when the
// special point is added (potential -d on the ball) and +1 when it is
// removed (potential +d). Masses: mu_out is mu's weight on points outside
// the ball, `denom_shift` turns the ball size into the divisor of c0.
struct BallSearch {
  std::size_t ball = 0;
  double radius = 0.0;
  double c0 = 0.0;
};

BallSearch find_ball(const std::vector<double>& d, double sign, long divisor_shift,
                     std::size_t min_ball) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  constexpr double kTol = 1e-12;
  double sum = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    sum += std::exp(sign * d[order[m - 1]]);
    // Balls contain every point at their radius.
    if (m < n && d[order[m]] <= d[order[m - 1]]) continue;
    if (m < min_ball) continue;
    const double c0 = std::log(sum / static_cast<double>(static_cast<long>(m) + divisor_shift));
    const double radius = d[order[m - 1]];
    // Potential on the ball is sign * d; the outside constant must separate
    // the ball values from the values the cone would take outside.
    const double inner = sign < 0 ? -c0 : c0;  // compare against distances
    const bool ball_ok = radius <= inner + kTol * std::max(1.0, radius);
    const bool out_ok = m == n || inner <= d[order[m]] + kTol * std::max(1.0, inner);
    if (ball_ok && out_ok) return {m, radius, c0};
  }
  throw Error("no admissible ball radius found");
}

DiscretePointSolution assemble(std::size_t dim, const std::vector<double>& points,
                               const std::vector<double>& special, const std::vector<double>& d,
                               double sign, const BallSearch& ball, DiscreteMeasure mu) {
  const std::size_t n = d.size();
  DiscretePointSolution s;
  s.radius = ball.radius;
  s.ball_size = ball.ball;
  s.c0 = ball.c0;
  s.mu = std::move(mu);
  s.nu = DiscreteMeasure::uniform(dim, points);

  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = d[i] <= ball.radius ? sign * d[i] : ball.c0;
  const double lz = detail::log_sum_exp(g, std::vector<double>(n, 1.0 / static_cast<double>(n)));
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(g[i] - lz) / static_cast<double>(n);
  s.gamma_star = DiscreteMeasure::probability(dim, points, w);

  // The special point carries g = 0; for the removal it already belongs to N.
  std::vector<double> coords = points;
  std::vector<double> values = g;
  if (sign < 0) {
    coords.insert(coords.end(), special.begin(), special.end());
    values.push_back(0.0);
  }
  const CostSpec cost = CostSpec::scaled_metric(1.0);
  s.g_star = Potential(dim, coords, values, cost);
  s.value = expectation(s.mu, s.g_star.values_on(s.mu)) - lz;
  s.re_part = rel_entropy(s.gamma_star, s.nu);
  s.w_part = transport_cost(s.mu, s.gamma_star, cost);
  return s;
}

void check_points(std::size_t dim, const std::vector<double>& points) {
  if (dim == 0 || points.empty() || points.size() % dim != 0) {
    throw InvalidInput("point list does not match the dimension");
  }
  const std::size_t n = points.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (detail::euclidean(detail::row(points, dim, i), detail::row(points, dim, j)) < 1e-12) {
        throw InvalidInput("points must be distinct");
      }
    }
  }
}

}  // namespace

DiscretePointSolution discrete_add_point(std::size_t dim, const std::vector<double>& points,
                                         const std::vector<double>& y) {
  check_points(dim, points);
  if (y.size() != dim) throw InvalidInput("new point does not match the dimension");
  const std::size_t n = points.size() / dim;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = detail::euclidean(detail::row(points, dim, i), y);
    if (d[i] < 1e-12) throw InvalidInput("new point already belongs to the set");
  }
  const BallSearch ball = find_ball(d, -1.0, 1, 1);
  std::vector<double> mu_coords = points;
  mu_coords.insert(mu_coords.end(), y.begin(), y.end());
  return assemble(dim, points, y, d, -1.0, ball, DiscreteMeasure::uniform(dim, mu_coords));
}

DiscretePointSolution discrete_remove_point(std::size_t dim, const std::vector<double>& points,
                                            std::size_t j) {
  check_points(dim, points);
  const std::size_t n = points.size() / dim;
  if (n < 2) throw InvalidInput("removing a point needs at least two points");
  if (j >= n) throw InvalidInput("removed index out of range");
  const auto xj = detail::row(points, dim, j);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = detail::euclidean(detail::row(points, dim, i), xj);
  const BallSearch ball = find_ball(d, 1.0, -1, 2);
  std::vector<double> mu_coords;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) continue;
    auto p = detail::row(points, dim, i);
    mu_coords.insert(mu_coords.end(), p.begin(), p.end());
  }
  return assemble(dim, points, {xj.begin(), xj.end()}, d, 1.0, ball,
                  DiscreteMeasure::uniform(dim, mu_coords));
}

}  // namespace gammadiv
