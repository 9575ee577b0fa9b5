// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace gammadiv {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: violated type invariants, bad files,
// preconditions that the caller can fix.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An iterative method stopped before reaching its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

}  // namespace gammadiv
