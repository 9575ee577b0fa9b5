// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gammadiv {

namespace {

using nlohmann::json;

constexpr double kGridRenormTol = 1e-6;

ParseError at_offset(const std::string& text, std::size_t offset, const std::string& what) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return ParseError(what, line, col);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is one past the failing character.
    throw at_offset(text, e.byte > 0 ? e.byte - 1 : 0, std::string("malformed JSON: ") + e.what());
  }
}

double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number", 0, 0);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string(what) + " must be finite", 0, 0);
  return v;
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array", 0, 0);
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::size_t cells(const json& doc) {
  if (!doc.contains("n")) return 1000;
  const json& n = doc.at("n");
  if (!n.is_number_integer() || n.get<long long>() < 1) {
    throw ParseError("\"n\" must be a positive integer", 0, 0);
  }
  return static_cast<std::size_t>(n.get<long long>());
}

// Points given either as [[x, y], ...] or, in one dimension, [x, ...].
std::vector<double> point_list(const json& j, std::size_t& dim) {
  if (!j.is_array() || j.empty()) throw ParseError("\"points\" must be a nonempty array", 0, 0);
  std::vector<double> coords;
  if (j.front().is_array()) {
    dim = j.front().size();
    if (dim == 0) throw ParseError("points must have at least one coordinate", 0, 0);
    for (const auto& p : j) {
      const std::vector<double> row = numbers(p, "point coordinate");
      if (row.size() != dim) throw ParseError("points differ in dimension", 0, 0);
      coords.insert(coords.end(), row.begin(), row.end());
    }
  } else {
    dim = 1;
    coords = numbers(j, "point coordinate");
  }
  return coords;
}

ParsedMeasure from_grid(GridDensity g, const Tolerances& tol) {
  double mass = 0.0;
  for (double v : g.density) mass += v * g.cell_width();
  if (std::abs(mass - 1.0) > kGridRenormTol) {
    throw ParseError("grid density integrates to " + std::to_string(mass) + ", not 1", 0, 0);
  }
  g = GridDensity::normalized(g.left, g.right, g.density);
  g.validate(tol);
  ParsedMeasure out;
  out.measure = to_discrete(g, tol);
  out.grid = std::move(g);
  return out;
}

ParsedMeasure measure_from_json(const json& doc, const Tolerances& tol) {
  if (!doc.is_object()) throw ParseError("measure document must be a JSON object", 0, 0);
  if (doc.contains("points")) {
    std::size_t dim = 1;
    std::vector<double> coords = point_list(doc.at("points"), dim);
    const std::size_t n = coords.size() / dim;
    std::vector<double> w;
    if (doc.contains("weights")) {
      w = numbers(doc.at("weights"), "weight");
    } else {
      w.assign(n, 1.0 / static_cast<double>(n));
    }
    if (w.size() != n) throw ParseError("points and weights differ in length", 0, 0);
    double total = 0.0;
    for (double v : w) {
      if (v < 0.0) throw ParseError("weights must be nonnegative", 0, 0);
      total += v;
    }
    if (std::abs(total - 1.0) > kGridRenormTol) {
      throw ParseError("weights sum to " + std::to_string(total) + ", not 1", 0, 0);
    }
    for (double& v : w) v /= total;
    ParsedMeasure out;
    out.measure = DiscreteMeasure::probability(dim, std::move(coords), std::move(w), tol);
    return out;
  }
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    GridDensity grid;
    grid.left = number(g.at("left"), "grid left");
    grid.right = number(g.at("right"), "grid right");
    grid.density = numbers(g.at("density"), "grid density");
    if (g.contains("n") && g.at("n").get<long long>() != static_cast<long long>(grid.density.size())) {
      throw ParseError("grid \"n\" does not match the density length", 0, 0);
    }
    if (grid.density.empty() || !(grid.right > grid.left)) {
      throw ParseError("grid needs right > left and at least one cell", 0, 0);
    }
    return from_grid(std::move(grid), tol);
  }
  if (doc.contains("uniform")) {
    const std::vector<double> ab = numbers(doc.at("uniform"), "uniform endpoint");
    if (ab.size() != 2 || !(ab[1] > ab[0])) {
      throw ParseError("\"uniform\" needs [a, b] with b > a", 0, 0);
    }
    return from_grid(GridDensity::uniform(ab[0], ab[1], cells(doc)), tol);
  }
  if (doc.contains("gaussian")) {
    const json& g = doc.at("gaussian");
    GaussianParams p;
    p.mean = number(g.at("mean"), "gaussian mean");
    p.variance = number(g.at("var"), "gaussian var");
    if (!(p.variance > 0.0)) throw ParseError("gaussian var must be positive", 0, 0);
    const double width = doc.contains("width") ? number(doc.at("width"), "width") : 6.0;
    if (!(width > 0.0)) throw ParseError("\"width\" must be positive", 0, 0);
    const double sd = std::sqrt(p.variance);
    const GridDensity grid = GridDensity::from_function(
        p.mean - width * sd, p.mean + width * sd, cells(doc),
        [&](double x) { return std::exp(-0.5 * (x - p.mean) * (x - p.mean) / p.variance); });
    ParsedMeasure out;
    out.measure = to_discrete(grid, tol);
    out.grid = grid;
    out.gaussian = p;
    return out;
  }
  if (doc.contains("dirac")) {
    const std::vector<double> x = numbers(doc.at("dirac"), "dirac coordinate");
    if (x.empty()) throw ParseError("\"dirac\" needs a point", 0, 0);
    ParsedMeasure out;
    out.measure = DiscreteMeasure::dirac(x);
    return out;
  }
  throw ParseError(
      "measure document needs one of \"points\", \"grid\", \"uniform\", \"gaussian\", \"dirac\"",
      0, 0);
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : InvalidInput(line > 0 ? what + " at line " + std::to_string(line) + ", column " +
                                  std::to_string(column)
                            : what),
      message_(what),
      line_(line),
      column_(column) {}

Observable parse_observable(const std::string& text) {
  const json doc = parse_json(text);
  try {
    std::size_t dim = 1;
    std::vector<double> coords = point_list(doc.at("points"), dim);
    std::vector<double> values = numbers(doc.at("values"), "observable value");
    if (values.size() * dim != coords.size()) {
      throw ParseError("\"values\" must have one entry per point", 0, 0);
    }
    return Observable(dim, std::move(coords), std::move(values));
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid observable document: ") + e.what(), 0, 0);
  }
}

Observable load_observable(const std::string& path) {
  try {
    return parse_observable(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

SensitivityInput parse_sensitivity(const std::string& text) {
  const json doc = parse_json(text);
  try {
    SensitivityInput in;
    in.points = point_list(doc.at("points"), in.dim);
    in.p = numbers(doc.at("p"), "p");
    in.p_prime = numbers(doc.at("p_prime"), "p_prime");
    in.f = numbers(doc.at("f"), "f");
    const std::size_t n = in.points.size() / in.dim;
    if (in.p.size() != n || in.p_prime.size() != n || in.f.size() != n) {
      throw ParseError("\"p\", \"p_prime\" and \"f\" need one entry per point", 0, 0);
    }
    return in;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid sensitivity document: ") + e.what(), 0, 0);
  }
}

SensitivityInput load_sensitivity(const std::string& path) {
  try {
    return parse_sensitivity(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ParsedMeasure parse_measure(const std::string& text, const Tolerances& tol) {
  const json doc = parse_json(text);
  try {
    return measure_from_json(doc, tol);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid measure document: ") + e.what(), 0, 0);
  }
}

ParsedMeasure load_measure(const std::string& path, const Tolerances& tol) {
  try {
    return parse_measure(read_file(path), tol);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

CostSpec parse_cost_matrix(const std::string& text, const Tolerances& tol) {
  const json doc = parse_json(text);
  try {
    std::size_t dim = 1;
    std::vector<double> coords = point_list(doc.at("points"), dim);
    const std::size_t n = coords.size() / dim;
    const json& m = doc.at("matrix");
    if (!m.is_array() || m.size() != n) throw ParseError("matrix must be n x n", 0, 0);
    Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::vector<double> row = numbers(m[i], "matrix entry");
      if (row.size() != n) throw ParseError("matrix must be n x n", 0, 0);
      for (std::size_t j = 0; j < n; ++j) {
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
      }
    }
    return CostSpec::explicit_matrix(dim, std::move(coords), std::move(c), tol);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid cost document: ") + e.what(), 0, 0);
  }
}

CostSpec load_cost_matrix(const std::string& path, const Tolerances& tol) {
  try {
    return parse_cost_matrix(read_file(path), tol);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

void write_cdf_csv(std::ostream& os, const DiscreteMeasure& mu) {
  os << "x,cdf\n" << std::setprecision(17);
  for (const CdfPoint& c : cdf_values(mu)) os << c.x << ',' << c.cumulative << '\n';
}

void write_plan_csv(std::ostream& os, const TransportPlan& plan) {
  os << "i,j,mass\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < plan.plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.plan.cols(); ++j) {
      if (plan.plan(i, j) > 0.0) os << i << ',' << j << ',' << plan.plan(i, j) << '\n';
    }
  }
}

namespace {

void header(std::ostream& os, std::size_t dim, const char* last) {
  if (dim == 1) {
    os << "x";
  } else {
    for (std::size_t d = 0; d < dim; ++d) os << (d ? "," : "") << 'x' << d;
  }
  os << ',' << last << '\n';
}

}  // namespace

void write_potential_csv(std::ostream& os, const Potential& g) {
  header(os, g.dim(), "value");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (double x : g.point(i)) os << x << ',';
    os << g.value(i) << '\n';
  }
}

void write_measure_csv(std::ostream& os, const DiscreteMeasure& mu) {
  header(os, mu.dim(), "weight");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (double x : mu.point(i)) os << x << ',';
    os << mu.weight(i) << '\n';
  }
}

}  // namespace gammadiv
