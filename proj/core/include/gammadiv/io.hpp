// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

// Reading measures from JSON and writing CSV projections.
//
// Accepted measure documents:
//   {"points": [[x, y], ...] or [x, ...], "weights": [...]}
//   {"grid": {"left": a, "right": b, "n": n, "density": [...]}}
//   {"uniform": [a, b], "n": cells}
//   {"gaussian": {"mean": m, "var": v}, "n": cells, "width": sds}
//   {"dirac": [x, ...]}
// "n" defaults to 1000 cells and "width" to 6 standard deviations.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gammadiv/errors.hpp"
#include "gammadiv/measures.hpp"
#include "gammadiv/transport.hpp"
#include "gammadiv/uqstatic.hpp"

namespace gammadiv {

// Input error with a position in the offending text (1-based; 0 when the
// position is unknown).
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  // The description without the position suffix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

struct ParsedMeasure {
  DiscreteMeasure measure;             // always set (grids are discretized)
  std::optional<GridDensity> grid;     // set for grid, uniform and gaussian input
  std::optional<GaussianParams> gaussian;
};

ParsedMeasure parse_measure(const std::string& text, const Tolerances& tol = {});
ParsedMeasure load_measure(const std::string& path, const Tolerances& tol = {});

// Square cost table: {"points": [...], "matrix": [[...], ...]}.
CostSpec parse_cost_matrix(const std::string& text, const Tolerances& tol = {});
CostSpec load_cost_matrix(const std::string& path, const Tolerances& tol = {});

// Observable values: {"points": [...], "values": [...]}.
Observable parse_observable(const std::string& text);
Observable load_observable(const std::string& path);

// Sensitivity instance: {"points": [...], "p": [...], "p_prime": [...], "f": [...]}.
struct SensitivityInput {
  std::size_t dim = 1;
  std::vector<double> points;
  std::vector<double> p;
  std::vector<double> p_prime;
  std::vector<double> f;
};
SensitivityInput parse_sensitivity(const std::string& text);
SensitivityInput load_sensitivity(const std::string& path);

// Whole file as a string; throws InvalidInput if it cannot be read.
std::string read_file(const std::string& path);

// CSV projections with a header row.
void write_cdf_csv(std::ostream& os, const DiscreteMeasure& mu);           // x,cdf
void write_plan_csv(std::ostream& os, const TransportPlan& plan);         // i,j,mass
void write_potential_csv(std::ostream& os, const Potential& g);           // x...,value
void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu);      // x...,weight

}  // namespace gammadiv
