// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "gammadiv/gammadiv.hpp"
#include "gammadiv/transport.hpp"
#include "gammadiv/uqdiffusion.hpp"
#include "gammadiv/uqstatic.hpp"

namespace {

using namespace gammadiv;

DiscreteMeasure random_cloud(std::size_t n, std::size_t dim, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> coords(n * dim);
  std::vector<double> w(n);
  for (double& c : coords) c = unit(rng);
  double s = 0.0;
  for (double& x : w) s += (x = 0.1 + unit(rng));
  for (double& x : w) x /= s;
  return DiscreteMeasure::probability(dim, std::move(coords), std::move(w));
}

// Uniform grid on [0, 1 + c] against the grid on [0, 1], both with n cells.
std::pair<DiscreteMeasure, DiscreteMeasure> stretch_pair(std::size_t n, double c) {
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    a[i] = (1.0 + c) * t;
    b[i] = t;
  }
  return {DiscreteMeasure::uniform(1, a), DiscreteMeasure::uniform(1, b)};
}

void BM_OtLp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = random_cloud(n, 2, 1);
  const auto nu = random_cloud(n, 2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ot_lp(mu, nu, CostSpec::scaled_metric(1.0)).cost);
  }
}
BENCHMARK(BM_OtLp)->Arg(8)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DualCloud(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = random_cloud(n, 2, 3);
  const auto nu = random_cloud(n, 2, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_div_dual(mu, nu, CostSpec::scaled_metric(1.0)).value);
  }
}
BENCHMARK(BM_DualCloud)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_PrimalCloud(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto mu = random_cloud(n, 2, 5);
  const auto nu = random_cloud(n, 2, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_div_primal(mu, nu, CostSpec::scaled_metric(1.0)).value);
  }
}
BENCHMARK(BM_PrimalCloud)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

// Long 1-D grids go through the banded chain solver.
void BM_DualChain(benchmark::State& state) {
  const auto [mu, nu] = stretch_pair(static_cast<std::size_t>(state.range(0)), 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma_div_dual(mu, nu, CostSpec::scaled_metric(1.0)).value);
  }
}
BENCHMARK(BM_DualChain)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Sensitivity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(n);
  std::vector<double> p(n);
  std::vector<double> pp(n);
  std::vector<double> f(n);
  double s = 0.0;
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = unit(rng);
    s += (p[i] = 0.1 + unit(rng));
    m += (pp[i] = unit(rng) - 0.5);
    f[i] = 0.3 * x[i] * x[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    p[i] /= s;
    pp[i] -= m / static_cast<double>(n);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(sensitivity_minmax(1, x, p, pp, f).bound);
  }
}
BENCHMARK(BM_Sensitivity)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Simulation(benchmark::State& state) {
  const OUModel model{1.0, 1.0, 100};
  const Perturbation pert{BoundedFunction::constant(0.2), BoundedFunction::constant(1.1)};
  const std::int64_t horizon = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_stationary_moment(model, pert, horizon, 1000, 1).second_moment);
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_Simulation)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
