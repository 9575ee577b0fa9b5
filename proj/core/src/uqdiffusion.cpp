// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include "gammadiv/uqdiffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "gammadiv/closedforms.hpp"
#include "gammadiv/errors.hpp"
#include "gammadiv/random.hpp"
#include "gammadiv/uqstatic.hpp"
#include "parallel.hpp"

namespace gammadiv {

void OUModel::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("model: a must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("model: sigma must be positive");
  if (N < 1 || !(static_cast<double>(N) > a)) {
    throw InvalidInput("model: N must be a positive integer larger than a");
  }
}

BoundedFunction BoundedFunction::constant(double value) {
  if (!std::isfinite(value)) throw InvalidInput("bounded function: value must be finite");
  BoundedFunction f;
  f.constant_ = value;
  return f;
}

BoundedFunction BoundedFunction::table(std::vector<double> xs, std::vector<double> values) {
  if (xs.empty() || xs.size() != values.size()) {
    throw InvalidInput("bounded function: table needs matching, non-empty grid and values");
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(values[i])) {
      throw InvalidInput("bounded function: table entries must be finite");
    }
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw InvalidInput("bounded function: grid must be strictly increasing");
    }
  }
  BoundedFunction f;
  f.xs_ = std::move(xs);
  f.values_ = std::move(values);
  f.constant_ = f.values_.front();
  return f;
}

double BoundedFunction::operator()(double x) const {
  if (xs_.empty()) return constant_;
  if (x <= xs_.front()) return values_.front();
  if (x >= xs_.back()) return values_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

double BoundedFunction::inf() const {
  return xs_.empty() ? constant_ : *std::min_element(values_.begin(), values_.end());
}

double BoundedFunction::sup() const {
  return xs_.empty() ? constant_ : *std::max_element(values_.begin(), values_.end());
}

double BoundedFunction::sup_abs() const { return std::max(std::abs(inf()), std::abs(sup())); }

void Perturbation::validate() const {
  if (!(v.inf() > 0.0)) throw InvalidInput("perturbation: v must be bounded below by a positive constant");
}

QuadraticMap forward_map(double b, double c, double d, double lambda, double alpha,
                         double sigma2) {
  (void)d;  // the constant of g cancels
  QuadraticMap out;
  const double s = 1.0 - 2.0 * b * sigma2;
  if (!(s > 0.0)) {
    out.infinite = true;
    out.quadratic = out.linear = out.constant = std::numeric_limits<double>::infinity();
    return out;
  }
  out.quadratic = b * (1.0 - alpha * alpha / s);
  out.linear = c * (1.0 - alpha / s);
  out.constant = lambda - c * c * sigma2 / (2.0 * s) + 0.5 * std::log(s);
  return out;
}

double quadratic_fixed_point(double q, double alpha, double sigma2) {
  if (!(q > 0.0) || !(sigma2 > 0.0) || !(std::abs(alpha) < 1.0)) {
    throw InvalidInput("quadratic_fixed_point: need q > 0, sigma2 > 0, |alpha| < 1");
  }
  auto h = [&](double b) { return b * (1.0 - alpha * alpha / (1.0 - 2.0 * b * sigma2)); };
  const double top = 0.5 / sigma2;
  const auto peak = boost::math::tools::brent_find_minima(
      [&](double b) { return -h(b); }, 0.0, top * (1.0 - 1e-12), 52);
  const double target = 0.5 * q;
  if (-peak.second < target) {
    throw InvalidInput("quadratic_fixed_point: q/2 exceeds the largest attainable coefficient " +
                       std::to_string(-peak.second));
  }
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(
      [&](double b) { return h(b) - target; }, 0.0, peak.first, -target, -peak.second - target,
      boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

ACUTTerms acut_terms(double a, double sigma, double u_sup, double v_lo, double v_hi, double b) {
  const double s2 = sigma * sigma;
  const double gap = a - b * s2;
  const double vdev = std::max(std::abs(v_lo * v_lo - 1.0), std::abs(v_hi * v_hi - 1.0));
  ACUTTerms t;
  t.diffusion = s2 * vdev / (2.0 * gap);
  t.drift = u_sup == 0.0 ? 0.0 : u_sup * u_sup / (4.0 * b * gap);
  t.base = s2 / (2.0 * gap);
  return t;
}

ACUTBoundReport acut_bound(double a, double sigma, double u_sup, double v_lo, double v_hi) {
  if (!(a > 0.0) || !(sigma > 0.0)) throw InvalidInput("acut_bound: a and sigma must be positive");
  if (!(u_sup >= 0.0) || !std::isfinite(u_sup)) throw InvalidInput("acut_bound: u_sup must be >= 0");
  if (!(v_lo > 0.0) || !(v_hi >= v_lo) || !std::isfinite(v_hi)) {
    throw InvalidInput("acut_bound: need 0 < v_lo <= v_hi");
  }
  auto total = [&](double b) {
    const auto t = acut_terms(a, sigma, u_sup, v_lo, v_hi, b);
    return t.drift + t.diffusion + t.base;
  };
  const double top = a / (sigma * sigma);
  const double b_min = 1e-6 * top;
  const auto grid = log_grid(b_min, top - b_min, 512);
  ACUTBoundReport r;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.sweep.emplace_back(grid[i], total(grid[i]));
    if (r.sweep[i].second < r.sweep[arg].second) arg = i;
  }
  r.optimal_b = grid[arg];
  r.bound = r.sweep[arg].second;
  if (arg > 0 && arg + 1 < grid.size()) {
    const auto m = boost::math::tools::brent_find_minima(total, grid[arg - 1], grid[arg + 1], 52);
    if (m.second < r.bound) {
      r.optimal_b = m.first;
      r.bound = m.second;
    }
  }
  r.terms = acut_terms(a, sigma, u_sup, v_lo, v_hi, r.optimal_b);
  r.fixed_b = 0.5 * top;
  r.fixed_terms = acut_terms(a, sigma, u_sup, v_lo, v_hi, r.fixed_b);
  r.fixed_bound = r.fixed_terms.drift + r.fixed_terms.diffusion + r.fixed_terms.base;
  return r;
}

namespace {

struct StepKernels {
  GaussianParams q;
  GaussianParams p;
};

StepKernels step_kernels(const OUModel& model, double x, const Perturbation& pert) {
  model.validate();
  pert.validate();
  const double n = static_cast<double>(model.N);
  const double s2 = model.step_variance();
  const double v = pert.v(x);
  return {{model.alpha() * x + model.sigma * pert.u(x) / n, s2 * v * v},
          {model.alpha() * x, s2}};
}

}  // namespace

double gaussian_step_div(const OUModel& model, double x, const Perturbation& pert, double k) {
  if (!(k > 0.0)) throw InvalidInput("gaussian_step_div: k must be positive");
  const auto ker = step_kernels(model, x, pert);
  const double v = pert.v(x);
  if (v != 1.0) {
    const double spread = std::abs(1.0 - 1.0 / (v * v)) / (model.sigma * model.sigma);
    if (!(static_cast<double>(model.N) * spread > k)) {
      const double need = std::floor(k / spread) + 1.0;
      throw InvalidInput("gaussian_step_div: N = " + std::to_string(model.N) +
                         " too small for the variance mismatch; need N >= " +
                         std::to_string(static_cast<long long>(need)));
    }
  }
  return gaussian_gamma_div(ker.q, ker.p, k).value;
}

double gaussian_step_kl(const OUModel& model, double x, const Perturbation& pert) {
  const auto ker = step_kernels(model, x, pert);
  return gaussian_kl(ker.q, ker.p);
}

MomentEstimate simulate_stationary_moment(const OUModel& model, const Perturbation& pert,
                                          std::int64_t horizon, std::int64_t burn_in,
                                          std::uint64_t seed, std::int64_t replicas) {
  model.validate();
  pert.validate();
  if (burn_in < 0 || horizon <= burn_in) throw InvalidInput("simulate: need horizon > burn_in >= 0");
  if (replicas < 1) throw InvalidInput("simulate: replicas must be positive");
  constexpr std::int64_t kBatches = 16;
  const std::int64_t kept = horizon - burn_in;
  if (kept < kBatches) throw InvalidInput("simulate: need at least 16 steps after burn-in");

  const double alpha = model.alpha();
  const double n = static_cast<double>(model.N);
  const double drift_scale = model.sigma / n;
  const double noise_scale = model.sigma / std::sqrt(n);
  const bool constant = pert.u.is_constant() && pert.v.is_constant();
  const double u0 = pert.u(0.0);
  const double v0 = pert.v(0.0);

  const auto nrep = static_cast<std::size_t>(replicas);
  std::vector<std::vector<double>> sq(nrep, std::vector<double>(kBatches, 0.0));
  std::vector<double> first(nrep, 0.0);
  detail::parallel_for(nrep, [&](std::size_t r) {
    const NormalStream normals(seed, r);
    double x = 0.0;
    double z1 = 0.0;
    double sum1 = 0.0;
    std::int64_t batch = 0;
    std::int64_t in_batch = 0;
    const std::int64_t per_batch = kept / kBatches;
    double acc = 0.0;
    for (std::int64_t k = 0; k < horizon; ++k) {
      double z;
      if ((k & 1) == 0) {
        const auto zz = normals.pair(static_cast<std::uint64_t>(k) >> 1);
        z = zz.first;
        z1 = zz.second;
      } else {
        z = z1;
      }
      const double u = constant ? u0 : pert.u(x);
      const double v = constant ? v0 : pert.v(x);
      x = alpha * x + drift_scale * u + noise_scale * v * z;
      if (k < burn_in) continue;
      sum1 += x;
      acc += x * x;
      // The last batch absorbs the remainder of kept / 16.
      if (++in_batch == per_batch && batch + 1 < kBatches) {
        sq[r][static_cast<std::size_t>(batch)] = acc / static_cast<double>(in_batch);
        acc = 0.0;
        in_batch = 0;
        ++batch;
      }
    }
    sq[r][static_cast<std::size_t>(batch)] = acc / static_cast<double>(in_batch);
    first[r] = sum1 / static_cast<double>(kept);
  });

  MomentEstimate out;
  out.steps = kept;
  out.replicas = replicas;
  const double count = static_cast<double>(nrep * kBatches);
  double mean = 0.0;
  for (const auto& b : sq) {
    for (double v : b) mean += v;
  }
  mean /= count;
  double ss = 0.0;
  for (const auto& b : sq) {
    for (double v : b) ss += (v - mean) * (v - mean);
  }
  out.second_moment = mean;
  out.half_width = 1.96 * std::sqrt(ss / (count - 1.0) / count);
  for (double f : first) out.first_moment += f;
  out.first_moment /= static_cast<double>(nrep);
  return out;
}

}  // namespace gammadiv
