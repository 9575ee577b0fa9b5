// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gammadiv/closedforms.hpp"
#include "gammadiv/gammadiv.hpp"
#include "gammadiv/io.hpp"
#include "gammadiv/uqdiffusion.hpp"
#include "gammadiv/uqstatic.hpp"
#include "gammadiv/version.hpp"

namespace gammadiv::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFooter = R"(CSV schemas (JSON is the canonical format):
  divergence          x[,x2...],g,gamma   one row per point of the ground set
  example             quantity,value
  uq static           c,upper,lower,divergence   (sensitivity: i,g,q_prime)
  uq diffusion        b,objective
Exit status: 0 success, 1 input error, 2 solver did not converge (report still written).
GAMMADIV_MAX_ITER overrides the iteration cap.)";

struct Config {
  double tol = 0.0;  // 0 keeps the default gd_tol
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
};

// Result of one command: the report and the exit status it implies.
struct Outcome {
  Json report;
  std::string csv;
  int code = kOk;
};

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json points_json(std::size_t dim, const std::vector<double>& coords) {
  Json pts = Json::array();
  const std::size_t n = coords.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    if (dim == 1) {
      pts.push_back(coords[i]);
    } else {
      Json p = Json::array();
      for (std::size_t d = 0; d < dim; ++d) p.push_back(coords[i * dim + d]);
      pts.push_back(p);
    }
  }
  return pts;
}

Json measure_json(const DiscreteMeasure& m) {
  return Json{{"points", points_json(m.dim(), m.coords())}, {"weights", m.weights()}};
}

Json potential_json(const Potential& g) {
  return Json{{"points", points_json(g.dim(), g.coords())}, {"values", g.values()}};
}

Json tolerances_json(const Tolerances& t) {
  return Json{{"mass_tol", t.mass_tol},         {"point_dedup_eps", t.point_dedup_eps},
              {"duality_gap_tol", t.duality_gap_tol}, {"lip_tol", t.lip_tol},
              {"cost_tri_tol", t.cost_tri_tol}, {"gd_tol", t.gd_tol},
              {"max_iter", t.max_iter}};
}

Json header(const std::string& command, const Tolerances& tol) {
  return Json{{"version", kVersion}, {"command", command}, {"tolerances", tolerances_json(tol)}};
}

Json report_json(const DivergenceReport& r) {
  return Json{{"method", r.method},
              {"value", r.value},
              {"re_part", r.re_part},
              {"w_part", r.w_part},
              {"primal_dual_gap", r.primal_dual_gap},
              {"iterations", r.iterations},
              {"gamma_star", measure_json(r.gamma_star)},
              {"g_star", potential_json(r.g_star)}};
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string key_value_csv(const Json& flat) {
  std::ostringstream os;
  os << "quantity,value\n";
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    if (it->is_number()) {
      os << it.key() << ',' << format_double(it->get<double>()) << '\n';
    } else if (it->is_boolean()) {
      os << it.key() << ',' << (it->get<bool>() ? 1 : 0) << '\n';
    } else if (it->is_string()) {
      os << it.key() << ',' << it->get<std::string>() << '\n';
    }
  }
  return os.str();
}

Tolerances make_tolerances(const Config& cfg) {
  Tolerances t = default_tolerances();
  if (cfg.tol != 0.0) {
    if (!(cfg.tol > 0.0)) throw InvalidInput("--tol must be positive");
    t.gd_tol = cfg.tol;
  }
  return t;
}

CostSpec parse_cost(const std::string& spec, const Tolerances& tol) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto scale = [&](double fallback) {
    if (arg.empty()) return fallback;
    std::size_t used = 0;
    double k = 0.0;
    try {
      k = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size() || !(k > 0.0)) throw InvalidInput("bad cost scale in '" + spec + "'");
    return k;
  };
  if (kind == "scaled") return CostSpec::scaled_metric(scale(1.0));
  if (kind == "halfsq") return CostSpec::half_square_gap(scale(1.0));
  if (kind == "matrix" && !arg.empty()) return load_cost_matrix(arg, tol);
  throw InvalidInput("unknown cost '" + spec + "' (scaled:K, halfsq[:K] or matrix:FILE)");
}

std::string divergence_csv(const DivergenceReport& r) {
  std::ostringstream os;
  const Potential& g = r.g_star;
  for (std::size_t d = 0; d < g.dim(); ++d) os << (d == 0 ? "x" : ",x" + std::to_string(d + 1));
  os << ",g,gamma\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t d = 0; d < g.dim(); ++d) os << (d ? "," : "") << format_double(g.point(i)[d]);
    const std::size_t k = r.gamma_star.find(g.point(i));
    const double w = k < r.gamma_star.size() ? r.gamma_star.weight(k) : 0.0;
    os << ',' << format_double(g.value(i)) << ',' << format_double(w) << '\n';
  }
  return os.str();
}

// Runs a solver, keeping the best iterate when it stops short.
DivergenceReport solve_or_best(const std::function<DivergenceReport()>& solve, bool& converged) {
  try {
    return solve();
  } catch (const SolverNotConverged& e) {
    converged = false;
    return e.best();
  }
}

struct DivergenceArgs {
  std::string mu;
  std::string nu;
  std::string cost = "scaled:1";
  std::string mode = "dual";
  double scale = 1.0;
};

Outcome cmd_divergence(const DivergenceArgs& a, const Config& cfg) {
  const Tolerances tol = make_tolerances(cfg);
  const DiscreteMeasure mu = load_measure(a.mu, tol).measure;
  const DiscreteMeasure nu = load_measure(a.nu, tol).measure;
  if (!(a.scale > 0.0)) throw InvalidInput("--scale must be positive");
  const CostSpec cost = parse_cost(a.cost, tol).scaled(a.scale);
  SolverOptions opts;
  opts.tol = tol;

  Outcome o;
  o.report = header("divergence", tol);
  o.report["cost"] = a.cost;
  o.report["scale"] = a.scale;
  o.report["mode"] = a.mode;
  bool converged = true;
  std::optional<DivergenceReport> primal;
  std::optional<DivergenceReport> dual;
  if (a.mode != "dual") {
    primal = solve_or_best([&] { return gamma_div_primal(mu, nu, cost, opts); }, converged);
  }
  if (a.mode != "primal") {
    dual = solve_or_best([&] { return gamma_div_dual(mu, nu, cost, opts); }, converged);
  }
  const DivergenceReport& main = dual ? *dual : *primal;
  o.report["value"] = main.value;
  if (primal) o.report["primal"] = report_json(*primal);
  if (dual) o.report["dual"] = report_json(*dual);
  if (primal && dual) {
    const double diff = std::abs(primal->value - dual->value);
    o.report["primal_dual_difference"] = diff;
    if (diff > tol.gd_tol) converged = false;
  }
  o.report["converged"] = converged;
  o.csv = divergence_csv(main);
  o.code = converged ? kOk : kNotConverged;
  return o;
}

struct ExampleArgs {
  std::string name;
  double c = 0.1;
  double s1 = 1.0;
  double s2 = 1.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double k = 1.0;
  std::string points;
  std::vector<double> y;
  std::size_t j = 0;
  std::string density = "exp:1";
  std::size_t n = 0;  // 0 picks the default grid for the example
};

std::function<double(double)> density_family(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  double a = 1.0;
  if (colon != std::string::npos) {
    try {
      a = std::stod(spec.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput("bad density parameter in '" + spec + "'");
    }
  }
  if (kind == "exp") return [a](double x) { return std::exp(a * x); };
  if (kind == "linear") return [a](double x) { return 1.0 + a * x; };
  if (kind == "power") return [a](double x) { return std::pow(1.0 + x, a); };
  throw InvalidInput("unknown density '" + spec + "' (exp:A, linear:A or power:A)");
}

// Dual solve on grid discretizations of two densities with the unit metric.
Json numeric_check(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double closed,
                   const Tolerances& tol, bool& converged) {
  SolverOptions opts;
  opts.tol = tol;
  const DivergenceReport r = solve_or_best(
      [&] { return gamma_div_dual(mu, nu, CostSpec::scaled_metric(1.0), opts); }, converged);
  return Json{{"value", r.value},
              {"primal_dual_gap", r.primal_dual_gap},
              {"abs_difference", std::abs(r.value - closed)}};
}

DiscreteMeasure uniform_cells(double right, std::size_t per_unit, const Tolerances& tol) {
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::round(right * static_cast<double>(per_unit))));
  return to_discrete(GridDensity::uniform(0.0, right, cells), tol);
}

Outcome cmd_example(const ExampleArgs& a, const Config& cfg) {
  const Tolerances tol = make_tolerances(cfg);
  Outcome o;
  o.report = header("example " + a.name, tol);
  Json flat;
  bool converged = true;
  if (a.name == "uniform-stretch" || a.name == "uniform-shrink") {
    const bool stretch = a.name == "uniform-stretch";
    const UniformPairSolution s = stretch ? uniform_stretch(a.c) : uniform_shrink(a.c);
    flat = Json{{"c", s.c},
                {"b", s.b},
                {"root_residual", s.root_residual},
                {"boundary_case", s.boundary_case},
                {"value", s.value},
                {"re_part", s.re_part},
                {"w_part", s.w_part},
                {"rel_entropy_mu_nu", number_or_null(s.rel_entropy_mu_nu)},
                {"transport_mu_nu", s.transport_mu_nu}};
    const std::size_t n = a.n ? a.n : 2000;
    const auto mu = uniform_cells(stretch ? 1.0 + a.c : 1.0 - a.c, n, tol);
    const auto nu = uniform_cells(1.0, n, tol);
    o.report["numeric"] = numeric_check(mu, nu, s.value, tol, converged);
    o.report["numeric"]["n"] = n;
  } else if (a.name == "density-stretch") {
    const auto f = density_family(a.density);
    const DensityStretchSolution s = density_stretch(f, a.c);
    flat = Json{{"c", s.c},
                {"density", a.density},
                {"b", s.b},
                {"h_at_zero", s.h_at_zero},
                {"boundary_case", s.boundary_case},
                {"value", s.value},
                {"re_part", s.re_part},
                {"w_part", s.w_part}};
    const std::size_t n = a.n ? a.n : 2000;
    const auto cells = [&](double right) {
      return static_cast<std::size_t>(std::max(1.0, std::round(right * static_cast<double>(n))));
    };
    const auto mu = to_discrete(GridDensity::from_function(0.0, 1.0 + a.c, cells(1.0 + a.c), f), tol);
    const auto nu = to_discrete(GridDensity::from_function(0.0, 1.0, cells(1.0), f), tol);
    o.report["numeric"] = numeric_check(mu, nu, s.value, tol, converged);
    o.report["numeric"]["n"] = n;
  } else if (a.name == "add-point" || a.name == "remove-point") {
    if (a.points.empty()) throw InvalidInput("--points FILE is required for " + a.name);
    const DiscreteMeasure base = load_measure(a.points, tol).measure;
    const DiscretePointSolution s = a.name == "add-point"
                                        ? discrete_add_point(base.dim(), base.coords(), a.y)
                                        : discrete_remove_point(base.dim(), base.coords(), a.j);
    flat = Json{{"radius", s.radius},
                {"ball_size", s.ball_size},
                {"c0", s.c0},
                {"value", s.value},
                {"re_part", s.re_part},
                {"w_part", s.w_part}};
    o.report["gamma_star"] = measure_json(s.gamma_star);
    o.report["g_star"] = potential_json(s.g_star);
    o.report["numeric"] = numeric_check(s.mu, s.nu, s.value, tol, converged);
  } else if (a.name == "gaussian") {
    if (!(a.s1 > 0.0) || !(a.s2 > 0.0)) throw InvalidInput("--s1 and --s2 must be positive");
    const GaussianParams mu{a.b1, a.s1 * a.s1};
    const GaussianParams nu{a.b2, a.s2 * a.s2};
    const GaussianDivergence d = gaussian_gamma_div(mu, nu, a.k);
    flat = Json{{"case", to_string(d.which)},
                {"value", d.value},
                {"re_part", d.re_part},
                {"w_part", d.w_part},
                {"gamma_mean", d.gamma_star.mean},
                {"gamma_var", d.gamma_star.variance},
                {"kl", gaussian_kl(mu, nu)}};
    const std::size_t n = a.n ? a.n : 801;
    double numeric = 0.0;
    try {
      numeric = gaussian_grid_divergence(gaussian_grid(mu, nu, n), a.k);
      o.report["numeric"] = Json{{"n", n}, {"value", numeric},
                                 {"abs_difference", std::abs(numeric - d.value)}};
    } catch (const NonConvergence& e) {
      converged = false;
      o.report["numeric"] = Json{{"n", n}, {"error", e.what()}};
    }
  } else {
    throw InvalidInput("unknown example '" + a.name +
                       "' (uniform-stretch, uniform-shrink, density-stretch, add-point, "
                       "remove-point, gaussian)");
  }
  o.report["closed_form"] = flat;
  o.report["converged"] = converged;
  o.csv = key_value_csv(flat);
  o.code = converged ? kOk : kNotConverged;
  return o;
}

struct StaticArgs {
  std::string sensitivity;
  std::string mu;
  std::string nu;
  std::string f;
  std::string cost = "scaled:1";
  std::string c_grid;
  bool linearized = false;
};

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty()) return {};
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidInput("bad --c-grid '" + spec + "' (lo:hi:n)");
    }
  }
  if (parts.size() != 3 || !(parts[2] >= 1.0)) throw InvalidInput("bad --c-grid '" + spec + "' (lo:hi:n)");
  return log_grid(parts[0], parts[1], static_cast<std::size_t>(parts[2]));
}

Outcome cmd_uq_static(const StaticArgs& a, const Config& cfg) {
  const Tolerances tol = make_tolerances(cfg);
  Outcome o;
  o.report = header("uq static", tol);
  if (!a.sensitivity.empty()) {
    const SensitivityInput in = load_sensitivity(a.sensitivity);
    const SensitivitySolution s = sensitivity_minmax(in.dim, in.points, in.p, in.p_prime, in.f);
    double mean = 0.0;
    for (std::size_t i = 0; i < in.p.size(); ++i) mean += in.p[i] * in.f[i];
    double var = 0.0;
    for (std::size_t i = 0; i < in.p.size(); ++i) var += in.p[i] * (in.f[i] - mean) * (in.f[i] - mean);
    const SaddleCheck sc = saddle_check(in.dim, in.points, in.p, in.p_prime, var, s.g_star, s.q_prime_star);
    o.report["sensitivity"] = Json{{"bound", s.bound},
                                   {"case", to_string(s.which)},
                                   {"g_star", s.g_star},
                                   {"q_prime_star", s.q_prime_star},
                                   {"variance_multiplier", s.variance_multiplier},
                                   {"lipschitz_active", s.lipschitz_active},
                                   {"variance_active", s.variance_active},
                                   {"saddle_inner_sup", number_or_null(sc.inner_sup)},
                                   {"saddle_outer_inf", number_or_null(sc.outer_inf)}};
    std::ostringstream os;
    os << "i,g,q_prime\n";
    for (std::size_t i = 0; i < s.g_star.size(); ++i) {
      os << i << ',' << format_double(s.g_star[i]) << ',' << format_double(s.q_prime_star[i]) << '\n';
    }
    o.csv = os.str();
    return o;
  }
  if (a.mu.empty() || a.nu.empty() || a.f.empty()) {
    throw InvalidInput("uq static needs --sensitivity FILE or all of --mu, --nu and --f");
  }
  const DiscreteMeasure mu = load_measure(a.mu, tol).measure;
  const DiscreteMeasure nu = load_measure(a.nu, tol).measure;
  const Observable f = load_observable(a.f);
  const CostSpec cost = parse_cost(a.cost, tol);
  SolverOptions opts;
  opts.tol = tol;
  const UQBoundReport r = uq_bounds(f, nu, mu, cost, parse_grid(a.c_grid), opts);
  auto terms = [](const BoundTerms& t) {
    return Json{{"risk", t.risk}, {"re", t.re}, {"w", t.w}};
  };
  Json sweep = Json::array();
  std::ostringstream os;
  os << "c,upper,lower,divergence\n";
  for (const auto& p : r.sweep) {
    sweep.push_back(Json{{"c", p.c}, {"upper", p.upper}, {"lower", p.lower}, {"divergence", p.divergence}});
    os << format_double(p.c) << ',' << format_double(p.upper) << ',' << format_double(p.lower) << ','
       << format_double(p.divergence) << '\n';
  }
  o.report["upper"] = r.upper;
  o.report["lower"] = r.lower;
  o.report["optimal_c_upper"] = r.optimal_c_upper;
  o.report["optimal_c_lower"] = r.optimal_c_lower;
  o.report["upper_terms"] = terms(r.upper_terms);
  o.report["lower_terms"] = terms(r.lower_terms);
  o.report["optimal_gamma_upper"] = measure_json(r.optimal_gamma_upper);
  o.report["optimal_gamma_lower"] = measure_json(r.optimal_gamma_lower);
  o.report["observed"] = r.observed ? Json(*r.observed) : Json(nullptr);
  o.report["class_violation"] = r.class_violation;
  o.report["sweep"] = sweep;
  if (a.linearized) {
    const LinearizedBound lb = linearized_bound(f, nu, mu, cost, opts);
    o.report["linearized"] = Json{{"value", lb.value},
                                  {"re_part", lb.re_part},
                                  {"w_part", lb.w_part},
                                  {"multiplier", lb.multiplier},
                                  {"gamma_star", measure_json(lb.gamma_star)}};
  }
  o.csv = os.str();
  return o;
}

struct DiffusionArgs {
  double a = 1.0;
  double sigma = 1.0;
  double u = 0.0;
  double v = 1.0;
  std::optional<double> v_lo;
  std::optional<double> v_hi;
  std::int64_t N = 100;
  bool simulate = false;
  std::int64_t horizon = 10000000;
  std::int64_t burn_in = 10000;
  std::int64_t replicas = 1;
};

Outcome cmd_uq_diffusion(const DiffusionArgs& a, const Config& cfg) {
  const Tolerances tol = make_tolerances(cfg);
  const double v_lo = a.v_lo.value_or(a.v);
  const double v_hi = a.v_hi.value_or(a.v);
  const ACUTBoundReport r = acut_bound(a.a, a.sigma, std::abs(a.u), v_lo, v_hi);
  Outcome o;
  o.report = header("uq diffusion", tol);
  auto terms = [](const ACUTTerms& t) {
    return Json{{"drift", t.drift}, {"diffusion", t.diffusion}, {"base", t.base}};
  };
  o.report["model"] = Json{{"a", a.a}, {"sigma", a.sigma}, {"u", a.u}, {"v_lo", v_lo}, {"v_hi", v_hi}};
  o.report["bound"] = r.bound;
  o.report["optimal_b"] = r.optimal_b;
  o.report["terms"] = terms(r.terms);
  o.report["fixed_b"] = r.fixed_b;
  o.report["fixed_bound"] = r.fixed_bound;
  o.report["fixed_terms"] = terms(r.fixed_terms);
  if (v_lo == v_hi) {
    // Stationary law of the continuum model with constant coefficients.
    const double m = a.sigma * a.u / a.a;
    const double moment = m * m + a.sigma * a.sigma * v_lo * v_lo / (2.0 * a.a);
    o.report["analytic_moment"] = moment;
    o.report["margin"] = r.bound - moment;
  }
  if (a.simulate) {
    if (!cfg.seed) throw InvalidInput("--simulate needs --seed");
    OUModel model{a.a, a.sigma, a.N};
    Perturbation pert{BoundedFunction::constant(a.u), BoundedFunction::constant(a.v)};
    if (a.v_lo || a.v_hi) {
      throw InvalidInput("--simulate needs a constant v (use --v)");
    }
    const MomentEstimate e =
        simulate_stationary_moment(model, pert, a.horizon, a.burn_in, *cfg.seed, a.replicas);
    o.report["simulation"] = Json{{"N", a.N},
                                  {"horizon", a.horizon},
                                  {"burn_in", a.burn_in},
                                  {"replicas", a.replicas},
                                  {"seed", *cfg.seed},
                                  {"second_moment", e.second_moment},
                                  {"half_width", e.half_width},
                                  {"first_moment", e.first_moment},
                                  {"margin", r.bound - e.second_moment}};
  }
  std::ostringstream os;
  os << "b,objective\n";
  for (const auto& [b, v] : r.sweep) os << format_double(b) << ',' << format_double(v) << '\n';
  o.csv = os.str();
  return o;
}

void emit(const Outcome& o, const Config& cfg, std::ostream& out) {
  const std::string text = cfg.format == "csv" ? o.csv : o.report.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + cfg.out);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divergence between measures, closed-form examples and uncertainty bounds."};
  app.footer(kFooter);
  app.require_subcommand(1);
  Config cfg;
  app.add_option("--tol", cfg.tol, "Acceptance tolerance for divergence solvers (gd_tol)");
  app.add_option("--out", cfg.out, "Write the report to FILE instead of standard output");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "Seed for stochastic commands");

  DivergenceArgs div;
  auto* sub_div = app.add_subcommand("divergence", "Divergence between two measure files");
  sub_div->fallthrough();
  sub_div->add_option("--mu", div.mu, "Measure file for mu")->required();
  sub_div->add_option("--nu", div.nu, "Measure file for nu")->required();
  sub_div->add_option("--cost", div.cost, "scaled:K, halfsq[:K] or matrix:FILE");
  sub_div->add_option("--mode", div.mode, "Solver")->check(CLI::IsMember({"primal", "dual", "both"}));
  sub_div->add_option("--scale", div.scale, "Multiply the cost by B");

  ExampleArgs ex;
  auto* sub_ex = app.add_subcommand("example", "Closed-form examples with a numeric cross-check");
  sub_ex->fallthrough();
  sub_ex->add_option("name", ex.name,
                     "uniform-stretch, uniform-shrink, density-stretch, add-point, remove-point "
                     "or gaussian")
      ->required();
  sub_ex->add_option("--c", ex.c, "Stretch or shrink amount");
  sub_ex->add_option("--b1", ex.b1, "Mean of mu (gaussian)");
  sub_ex->add_option("--s1", ex.s1, "Standard deviation of mu (gaussian)");
  sub_ex->add_option("--b2", ex.b2, "Mean of nu (gaussian)");
  sub_ex->add_option("--s2", ex.s2, "Standard deviation of nu (gaussian)");
  sub_ex->add_option("--k", ex.k, "Class constant (gaussian)");
  sub_ex->add_option("--points", ex.points, "Measure file whose atoms form the point set");
  sub_ex->add_option("--y", ex.y, "Added point (add-point)");
  sub_ex->add_option("--j", ex.j, "Index of the removed point (remove-point)");
  sub_ex->add_option("--density", ex.density, "exp:A, linear:A or power:A (density-stretch)");
  sub_ex->add_option("--n", ex.n, "Grid size of the numeric cross-check");

  auto* sub_uq = app.add_subcommand("uq", "Uncertainty bounds");
  sub_uq->fallthrough();
  sub_uq->require_subcommand(1);
  StaticArgs st;
  auto* sub_static = sub_uq->add_subcommand("static", "Bounds on E_mu f - E_nu f");
  sub_static->fallthrough();
  sub_static->add_option("--sensitivity", st.sensitivity, "Sensitivity instance file");
  sub_static->add_option("--mu", st.mu, "Measure file for mu");
  sub_static->add_option("--nu", st.nu, "Measure file for nu");
  sub_static->add_option("--f", st.f, "Observable file");
  sub_static->add_option("--cost", st.cost, "scaled:K, halfsq[:K] or matrix:FILE");
  sub_static->add_option("--c-grid", st.c_grid, "lo:hi:n log grid of c");
  sub_static->add_flag("--linearized", st.linearized, "Also report the linearized bound");
  DiffusionArgs df;
  auto* sub_diff = sub_uq->add_subcommand("diffusion", "Second-moment bound for the perturbed OU chain");
  sub_diff->fallthrough();
  sub_diff->add_option("--a", df.a, "Mean reversion");
  sub_diff->add_option("--sigma", df.sigma, "Noise scale");
  sub_diff->add_option("--u", df.u, "Drift perturbation (constant, or sup |u|)");
  sub_diff->add_option("--v", df.v, "Noise perturbation (constant)");
  sub_diff->add_option("--v-lo", df.v_lo, "Lower end of the v envelope");
  sub_diff->add_option("--v-hi", df.v_hi, "Upper end of the v envelope");
  sub_diff->add_option("--N", df.N, "Steps per unit time of the simulated chain");
  sub_diff->add_flag("--simulate", df.simulate, "Estimate the stationary moment by simulation");
  sub_diff->add_option("--horizon", df.horizon, "Simulated steps");
  sub_diff->add_option("--burn-in", df.burn_in, "Discarded leading steps");
  sub_diff->add_option("--replicas", df.replicas, "Independent chains");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kOk : kInputError;
  }

  try {
    Outcome o;
    if (sub_div->parsed()) {
      o = cmd_divergence(div, cfg);
    } else if (sub_ex->parsed()) {
      o = cmd_example(ex, cfg);
    } else if (sub_static->parsed()) {
      o = cmd_uq_static(st, cfg);
    } else {
      o = cmd_uq_diffusion(df, cfg);
    }
    emit(o, cfg, out);
    if (o.code == kNotConverged) err << "warning: solver did not reach its tolerance\n";
    return o.code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kNotConverged;
  }
}

}  // namespace gammadiv::cli
