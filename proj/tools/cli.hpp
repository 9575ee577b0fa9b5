// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end, kept in a library so tests can drive it in-process.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gammadiv::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotConverged = 2 };

// Runs one command. The report goes to --out when given, otherwise to `out`;
// diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gammadiv::cli
