// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "detail.hpp"
#include "gammadiv/transport.hpp"

namespace gammadiv::detail {

// Transport cost between mu and nu together with a maximizing potential,
// both indexed over the points of `ground` (which must contain both supports,
// in lexicographic order). mu_w and nu_w are the weights on the ground set
// (zero off the supports). The potential satisfies the Lipschitz constraint
// on every pair of ground points.
struct GroundTransport {
  double value = 0.0;
  std::vector<double> potential;
};

GroundTransport ground_transport(const std::vector<double>& ground,
                                 std::size_t dim, const std::vector<double>& mu_w,
                                 const std::vector<double>& nu_w,
                                 const CostSpec& cost);

}  // namespace gammadiv::detail
