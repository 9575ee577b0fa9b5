// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace gammadiv {

// Numerical tolerances shared by every module. Reports embed the values in
// effect so that a run can be reproduced.
struct Tolerances {
  double mass_tol = 1e-10;         // total-mass and marginal checks
  double point_dedup_eps = 1e-12;  // atoms closer than this are merged
  double duality_gap_tol = 1e-8;   // relative, transport LP
  double lip_tol = 1e-9;           // potential feasibility
  double cost_tri_tol = 1e-9;      // triangle inequality of explicit costs
  double gd_tol = 1e-6;            // divergence primal/dual agreement
  std::int64_t max_iter = 100000;  // outer iteration cap of the solvers
};

// Defaults, with max_iter taken from GAMMADIV_MAX_ITER when that variable
// holds a positive integer.
Tolerances default_tolerances();

}  // namespace gammadiv
