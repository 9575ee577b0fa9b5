// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/tolerances.hpp"

#include <cstdlib>
#include <string>

namespace gammadiv {

Tolerances default_tolerances() {
  Tolerances tol;
  if (const char* env = std::getenv("GAMMADIV_MAX_ITER")) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(env, &used);
      if (used == std::string(env).size() && v > 0) tol.max_iter = v;
    } catch (const std::exception&) {
      // Unparseable override: keep the default cap.
    }
  }
  return tol;
}

}  // namespace gammadiv
