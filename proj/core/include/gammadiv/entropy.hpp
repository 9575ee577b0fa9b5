// Copyright 2026 The gammadiv Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <span>

#include "gammadiv/measures.hpp"
#include "gammadiv/transport.hpp"

namespace gammadiv {

// Extended reals are plain doubles: +infinity is the IEEE value, which
// propagates through sums and compares above every finite number.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// R(mu || nu) = sum_i mu_i log(mu_i / nu_i); +infinity unless mu << nu.
double rel_entropy(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// log sum_i exp(g_i) nu_i, with g given at the atoms of nu (in nu's order).
double log_mgf(std::span<const double> g_on_nu, const DiscreteMeasure& nu);
// Same with g taken from a potential defined on supp(nu).
double log_mgf(const Potential& g, const DiscreteMeasure& nu);

struct TiltedMeasure {
  DiscreteMeasure base;
  std::vector<double> g;  // potential at the atoms of base
  DiscreteMeasure result;
};

// d(result)/d(nu) = exp(g) / int exp(g) d(nu).
TiltedMeasure tilt(const DiscreteMeasure& nu, std::span<const double> g_on_nu);
TiltedMeasure tilt(const DiscreteMeasure& nu, const Potential& g);

}  // namespace gammadiv
