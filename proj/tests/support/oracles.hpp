// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Reference computations for the tests. Each one is deliberately written
// without calling the library routine it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Transport distance |x - y| on the line by integrating |F - G| over the
// merged sorted atoms.
inline double w1_line(std::vector<double> xs, std::vector<double> ws, std::vector<double> ys,
                      std::vector<double> vs) {
  struct Atom {
    double x;
    double w;
  };
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < xs.size(); ++i) atoms.push_back({xs[i], ws[i]});
  for (std::size_t i = 0; i < ys.size(); ++i) atoms.push_back({ys[i], -vs[i]});
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  double diff = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
    diff += atoms[i].w;
    total += std::abs(diff) * (atoms[i + 1].x - atoms[i].x);
  }
  return total;
}

inline double kl(const std::vector<double>& p, const std::vector<double>& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return kInf;
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

// Relative entropy between normal laws given by mean and variance.
inline double gaussian_kl(double m1, double v1, double m2, double v2) {
  return 0.5 * (v1 / v2 - 1.0 - std::log(v1 / v2) + (m1 - m2) * (m1 - m2) / v2);
}

// Minimal cost of matching two equal-size uniform point sets, by trying
// every permutation.
inline double assignment_brute(const Eigen::MatrixXd& c) {
  std::vector<int> perm(static_cast<std::size_t>(c.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += c(static_cast<Eigen::Index>(i), perm[i]);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(c.rows());
}

// Shortest-path closure of random positive symmetric weights: a metric.
inline Eigen::MatrixXd random_metric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> w(0.5, 2.0);
  Eigen::MatrixXd d(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < d.rows(); ++j) d(i, j) = d(j, i) = w(rng);
  }
  for (Eigen::Index k = 0; k < d.rows(); ++k) {
    for (Eigen::Index i = 0; i < d.rows(); ++i) {
      for (Eigen::Index j = 0; j < d.rows(); ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    }
  }
  return d;
}

inline std::vector<double> random_simplex(std::size_t n, std::mt19937_64& rng, double floor = 0.05) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (double& v : w) s += (v = u(rng));
  for (double& v : w) v /= s;
  return w;
}

// Visits every point of the probability simplex in dimension n with
// coordinates on the grid {0, 1/m, ..., 1}.
inline void simplex_grid(std::size_t n, int m, const std::function<void(const std::vector<double>&)>& f) {
  std::vector<int> k(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == n) {
      k[i] = left;
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) p[j] = static_cast<double>(k[j]) / m;
      f(p);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      k[i] = a;
      rec(i + 1, left - a);
    }
  };
  rec(0, m);
}

// Vertices (with g_0 = 0) of {g : g_i - g_j <= d_ij}: every vertex has a
// spanning tree of tight constraints, so enumerating oriented spanning trees
// through Pruefer codes covers them all.
inline std::vector<std::vector<double>> lipschitz_vertices(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  std::vector<std::vector<double>> out;
  if (n == 1) return {{0.0}};
  std::vector<std::pair<int, int>> edges;
  std::vector<int> code(static_cast<std::size_t>(std::max(0, n - 2)), 0);
  auto tree_from_code = [&]() {
    std::vector<int> degree(static_cast<std::size_t>(n), 1);
    for (int c : code) ++degree[static_cast<std::size_t>(c)];
    edges.clear();
    for (int c : code) {
      for (int leaf = 0; leaf < n; ++leaf) {
        if (degree[static_cast<std::size_t>(leaf)] == 1) {
          edges.emplace_back(leaf, c);
          --degree[static_cast<std::size_t>(leaf)];
          --degree[static_cast<std::size_t>(c)];
          break;
        }
      }
    }
    int a = -1;
    for (int v = 0; v < n; ++v) {
      if (degree[static_cast<std::size_t>(v)] == 1) {
        if (a < 0) {
          a = v;
        } else {
          edges.emplace_back(a, v);
        }
      }
    }
  };
  while (true) {
    tree_from_code();
    const int m = static_cast<int>(edges.size());
    for (int mask = 0; mask < (1 << m); ++mask) {
      // Propagate values from vertex 0 along the tree.
      std::vector<double> g(static_cast<std::size_t>(n), std::nan(""));
      g[0] = 0.0;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int e = 0; e < m; ++e) {
          auto [i, j] = edges[static_cast<std::size_t>(e)];
          const double sgn = (mask >> e) & 1 ? 1.0 : -1.0;  // g_i - g_j = sgn d_ij
          const double dij = d(i, j);
          if (!std::isnan(g[static_cast<std::size_t>(i)]) && std::isnan(g[static_cast<std::size_t>(j)])) {
            g[static_cast<std::size_t>(j)] = g[static_cast<std::size_t>(i)] - sgn * dij;
            changed = true;
          } else if (std::isnan(g[static_cast<std::size_t>(i)]) && !std::isnan(g[static_cast<std::size_t>(j)])) {
            g[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(j)] + sgn * dij;
            changed = true;
          }
        }
      }
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        for (int j = 0; j < n && ok; ++j) {
          if (g[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(j)] > d(i, j) + 1e-12) ok = false;
        }
      }
      if (ok) out.push_back(g);
    }
    // Next Pruefer code.
    int pos = static_cast<int>(code.size()) - 1;
    while (pos >= 0 && code[static_cast<std::size_t>(pos)] == n - 1) code[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
    ++code[static_cast<std::size_t>(pos)];
  }
  return out;
}

// inf over zero-sum q' of sqrt(V) sqrt(sum q'^2 / p) + max_g g . (p' - q'),
// the inner supremum taken over the Lipschitz vertices. The outer problem is
// convex and is solved by the central-cut ellipsoid method.
inline double nested_inf_sup(const Eigen::MatrixXd& d, const std::vector<double>& p,
                             const std::vector<double>& pp, double var, int iterations = 6000) {
  const auto verts = lipschitz_vertices(d);
  const int n = static_cast<int>(p.size());
  if (n == 1) return 0.0;
  auto inner = [&](const std::vector<double>& rho, std::vector<double>* arg) {
    double best = -kInf;
    for (const auto& g : verts) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(i)];
      if (s > best) {
        best = s;
        if (arg) *arg = g;
      }
    }
    return best;
  };
  // q' = B y with B an orthonormal basis of the zero-sum subspace.
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(ones).householderQ();
  const Eigen::MatrixXd B = q.rightCols(n - 1);
  auto phi = [&](const Eigen::VectorXd& y, Eigen::VectorXd* sub) {
    const Eigen::VectorXd qp = B * y;
    double norm2 = 0.0;
    std::vector<double> rho(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      norm2 += qp(i) * qp(i) / p[static_cast<std::size_t>(i)];
      rho[static_cast<std::size_t>(i)] = pp[static_cast<std::size_t>(i)] - qp(i);
    }
    std::vector<double> g;
    const double val = std::sqrt(var) * std::sqrt(norm2) + inner(rho, &g);
    if (sub) {
      Eigen::VectorXd gq(n);
      const double nrm = std::sqrt(norm2);
      for (int i = 0; i < n; ++i) {
        const double a = nrm > 0.0 ? std::sqrt(var) * qp(i) / (p[static_cast<std::size_t>(i)] * nrm) : 0.0;
        gq(i) = a - g[static_cast<std::size_t>(i)];
      }
      *sub = B.transpose() * gq;
    }
    return val;
  };
  const int m = n - 1;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  const double f0 = phi(y, nullptr);
  const double radius = (std::max(f0, 0.0) / std::sqrt(var) + 1e-6) * 1.01;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(m, m) * radius * radius;
  double best = f0;
  Eigen::VectorXd sub(m);
  for (int it = 0; it < iterations; ++it) {
    best = std::min(best, phi(y, &sub));
    const double gpg = sub.dot(P * sub);
    // sqrt(g' P g) bounds the suboptimality of the current centre.
    if (!(gpg > 1e-24)) break;
    if (m == 1) {
      // Interval bisection.
      const double half = std::sqrt(P(0, 0));
      const double lo = sub(0) > 0.0 ? y(0) - half : y(0);
      const double hi = sub(0) > 0.0 ? y(0) : y(0) + half;
      y(0) = 0.5 * (lo + hi);
      P(0, 0) = 0.25 * (hi - lo) * (hi - lo);
      continue;
    }
    const Eigen::VectorXd gt = P * sub / std::sqrt(gpg);
    const double md = static_cast<double>(m);
    y -= gt / (md + 1.0);
    P = md * md / (md * md - 1.0) * (P - 2.0 / (md + 1.0) * gt * gt.transpose());
  }
  return best;
}

}  // namespace oracle
