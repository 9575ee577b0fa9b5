// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gammadiv/errors.hpp"

namespace gammadiv::detail {

namespace {

constexpr int kUp = 1;     // tree arc points from the node to its parent
constexpr int kDown = -1;  // tree arc points from the parent to the node

class NetworkSimplex {
 public:
  NetworkSimplex(std::span<const double> supply, std::span<const double> demand,
                 const Eigen::MatrixXd& cost)
      : n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        cost_(cost) {
    const long real = static_cast<long>(n_) * m_;
    arcs_ = real + n_ + m_;
    root_ = n_ + m_;
    double max_cost = 0.0;
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        max_cost = std::max(max_cost, std::abs(cost(i, j)));
      }
    }
    art_cost_ = (max_cost + 1.0) * static_cast<double>(n_ + m_ + 1);
    eps_ = 1e-11 * (max_cost + 1.0);

    flow_.assign(static_cast<std::size_t>(arcs_), 0.0);
    in_tree_.assign(static_cast<std::size_t>(arcs_), 0);
    const int nodes = n_ + m_ + 1;
    parent_.assign(nodes, -1);
    pred_.assign(nodes, -1);
    dir_.assign(nodes, 0);
    depth_.assign(nodes, 0);
    pi_.assign(nodes, 0.0);
    children_.assign(nodes, {});

    // Initial strongly feasible tree: every node hangs off the root through
    // its artificial arc, carrying its full supply or demand.
    for (int i = 0; i < n_; ++i) {
      const long a = real + i;
      flow_[a] = supply[i];
      in_tree_[a] = 1;
      attach(i, root_, a, kUp);
      pi_[i] = -art_cost_;
    }
    for (int j = 0; j < m_; ++j) {
      const long a = real + n_ + j;
      flow_[a] = demand[j];
      in_tree_[a] = 1;
      attach(n_ + j, root_, a, kDown);
      pi_[n_ + j] = art_cost_;
    }
    for (int v = 0; v < root_; ++v) depth_[v] = 1;
  }

  long run() {
    const long block = std::max<long>(10, static_cast<long>(std::ceil(
                                              std::sqrt(static_cast<double>(arcs_)))));
    long next = 0;
    long pivots = 0;
    const long max_pivots = 50L * arcs_ + 100000L;
    while (true) {
      const long in = find_entering(block, next);
      if (in < 0) break;
      pivot(in);
      if (++pivots > max_pivots) {
        throw NonConvergence("network simplex exceeded its pivot limit");
      }
    }
    return pivots;
  }

  TransportSolution result() const {
    TransportSolution s;
    s.flow = Eigen::MatrixXd::Zero(n_, m_);
    s.cost = 0.0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        const double f = flow_[static_cast<long>(i) * m_ + j];
        s.flow(i, j) = f;
        s.cost += f * cost_(i, j);
      }
    }
    s.u.resize(n_);
    s.v.resize(m_);
    for (int i = 0; i < n_; ++i) s.u[i] = -pi_[i];
    for (int j = 0; j < m_; ++j) s.v[j] = pi_[n_ + j];
    return s;
  }

 private:
  int source(long a) const {
    const long real = static_cast<long>(n_) * m_;
    if (a < real) return static_cast<int>(a / m_);
    if (a < real + n_) return static_cast<int>(a - real);
    return root_;
  }
  int target(long a) const {
    const long real = static_cast<long>(n_) * m_;
    if (a < real) return n_ + static_cast<int>(a % m_);
    if (a < real + n_) return root_;
    return n_ + static_cast<int>(a - real - n_);
  }
  double arc_cost(long a) const {
    const long real = static_cast<long>(n_) * m_;
    if (a < real) return cost_(static_cast<Eigen::Index>(a / m_),
                               static_cast<Eigen::Index>(a % m_));
    return art_cost_;
  }
  double reduced(long a) const {
    return arc_cost(a) + pi_[source(a)] - pi_[target(a)];
  }

  void attach(int v, int p, long arc, int dir) {
    parent_[v] = p;
    pred_[v] = arc;
    dir_[v] = dir;
    children_[p].push_back(v);
  }
  void detach(int v) {
    auto& c = children_[parent_[v]];
    c.erase(std::find(c.begin(), c.end(), v));
  }

  long find_entering(long block, long& next) const {
    double best = 0.0;
    long in = -1;
    long count = block;
    for (long k = 0; k < arcs_; ++k) {
      long a = next + k;
      if (a >= arcs_) a -= arcs_;
      if (!in_tree_[a]) {
        const double rc = reduced(a);
        if (rc < best) {
          best = rc;
          in = a;
        }
      }
      if (--count == 0) {
        if (best < -eps_) {
          next = a + 1 >= arcs_ ? 0 : a + 1;
          return in;
        }
        count = block;
      }
    }
    if (best < -eps_) {
      next = in + 1 >= arcs_ ? 0 : in + 1;
      return in;
    }
    return -1;
  }

  int join_node(int a, int b) const {
    while (a != b) {
      if (depth_[a] > depth_[b]) {
        a = parent_[a];
      } else if (depth_[b] > depth_[a]) {
        b = parent_[b];
      } else {
        a = parent_[a];
        b = parent_[b];
      }
    }
    return a;
  }

  void pivot(long in) {
    const int first = source(in);
    const int second = target(in);
    const int join = join_node(first, second);
    const double inf = std::numeric_limits<double>::infinity();

    // Leaving arc: the last blocking arc in cycle order starting at the join
    // node keeps the tree strongly feasible.
    double delta = inf;
    int u_out = -1;
    int side = 0;
    for (int w = first; w != join; w = parent_[w]) {
      const double d = dir_[w] == kUp ? flow_[pred_[w]] : inf;
      if (d < delta) {
        delta = d;
        u_out = w;
        side = 1;
      }
    }
    for (int w = second; w != join; w = parent_[w]) {
      const double d = dir_[w] == kDown ? flow_[pred_[w]] : inf;
      if (d <= delta) {
        delta = d;
        u_out = w;
        side = 2;
      }
    }
    if (u_out < 0) throw NonConvergence("network simplex: unbounded pivot");

    flow_[in] += delta;
    for (int w = first; w != join; w = parent_[w]) flow_[pred_[w]] -= dir_[w] * delta;
    for (int w = second; w != join; w = parent_[w]) flow_[pred_[w]] += dir_[w] * delta;

    const long out_arc = pred_[u_out];
    in_tree_[out_arc] = 0;
    in_tree_[in] = 1;

    const int u_in = side == 1 ? first : second;
    const int v_in = side == 1 ? second : first;

    // Re-hang the subtree cut at u_out below v_in, reversing the path
    // u_in -> u_out.
    int w = u_in;
    int new_parent = v_in;
    long new_pred = in;
    int new_dir = (u_in == source(in)) ? kUp : kDown;
    while (true) {
      const int old_parent = parent_[w];
      const long old_pred = pred_[w];
      const int old_dir = dir_[w];
      detach(w);
      attach(w, new_parent, new_pred, new_dir);
      if (w == u_out) break;
      new_parent = w;
      new_pred = old_pred;
      new_dir = -old_dir;
      w = old_parent;
    }
    refresh_subtree(u_in);
  }

  void refresh_subtree(int top) {
    stack_.clear();
    stack_.push_back(top);
    while (!stack_.empty()) {
      const int w = stack_.back();
      stack_.pop_back();
      const int p = parent_[w];
      depth_[w] = depth_[p] + 1;
      const double c = arc_cost(pred_[w]);
      pi_[w] = dir_[w] == kDown ? pi_[p] + c : pi_[p] - c;
      for (int ch : children_[w]) stack_.push_back(ch);
    }
  }

  int n_;
  int m_;
  const Eigen::MatrixXd& cost_;
  long arcs_ = 0;
  int root_ = 0;
  double art_cost_ = 0.0;
  double eps_ = 0.0;
  std::vector<double> flow_;
  std::vector<char> in_tree_;
  std::vector<int> parent_;
  std::vector<long> pred_;
  std::vector<int> dir_;
  std::vector<int> depth_;
  std::vector<double> pi_;
  std::vector<std::vector<int>> children_;
  std::vector<int> stack_;
};

}  // namespace

TransportSolution solve_transport(std::span<const double> supply,
                                  std::span<const double> demand,
                                  const Eigen::MatrixXd& cost) {
  if (supply.empty() || demand.empty()) {
    throw InvalidInput("transport problem needs nonempty marginals");
  }
  if (static_cast<std::size_t>(cost.rows()) != supply.size() ||
      static_cast<std::size_t>(cost.cols()) != demand.size()) {
    throw InvalidInput("transport problem: cost matrix shape mismatch");
  }
  for (double s : supply) {
    if (!(s > 0.0)) throw InvalidInput("transport problem: supplies must be positive");
  }
  for (double d : demand) {
    if (!(d > 0.0)) throw InvalidInput("transport problem: demands must be positive");
  }
  NetworkSimplex ns(supply, demand, cost);
  const long pivots = ns.run();
  TransportSolution s = ns.result();
  s.pivots = pivots;
  return s;
}

}  // namespace gammadiv::detail
