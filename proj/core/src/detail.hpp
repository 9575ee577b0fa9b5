// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Internal helpers shared by the library sources.

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "gammadiv/measures.hpp"

namespace gammadiv::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::span<const double> row(const std::vector<double>& coords,
                                   std::size_t dim, std::size_t i) {
  return {coords.data() + i * dim, dim};
}

inline double euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(s);
}

// Position of `p` among lexicographically sorted points (row-major), or
// `count` if no point lies within eps.
std::size_t find_sorted(const std::vector<double>& coords, std::size_t dim,
                        std::span<const double> p, double eps);

// Numerically stable log(sum_i w_i exp(g_i)) over entries with w_i > 0.
double log_sum_exp(std::span<const double> g, std::span<const double> w);

// Sorted union of two sets of lexicographically sorted points, with index maps
// from each input into the union.
struct PointUnion {
  std::size_t dim = 1;
  std::vector<double> coords;
  std::vector<std::size_t> from_a;
  std::vector<std::size_t> from_b;
  std::size_t size() const { return coords.size() / dim; }
};

PointUnion merge_points(std::size_t dim, const std::vector<double>& a,
                        const std::vector<double>& b, double eps);

}  // namespace gammadiv::detail
