// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "warpspec/base.hpp"
#include "warpspec/perturbation.hpp"
#include "warpspec/sturm.hpp"

namespace warpspec::testing {

inline constexpr double kTwoPi = 6.283185307179586;

inline BaseMesh circle(int n, double length = kTwoPi) {
  return build_base_mesh(BaseKind::kCircle, length, n, BoundaryCondition::kPeriodic);
}

inline WarpingSpec fourier(double a0, std::vector<double> cos_coeffs = {},
                           std::vector<double> sin_coeffs = {}, bool require_positive = true) {
  WarpingSpec spec;
  spec.a0 = a0;
  spec.cos_coeffs = std::move(cos_coeffs);
  spec.sin_coeffs = std::move(sin_coeffs);
  spec.require_positive = require_positive;
  return spec;
}

inline WarpingSpec direction(double a0, std::vector<double> cos_coeffs = {},
                             std::vector<double> sin_coeffs = {}) {
  return fourier(a0, std::move(cos_coeffs), std::move(sin_coeffs), false);
}

inline WarpField warp(const BaseMesh& mesh, const WarpingSpec& spec, int m = 1) {
  return sample_warping(spec, mesh, m);
}

// Periodic 3-point symbol 2(1 - cos(k h)) / h^2.
inline double symbol(double k, double h) { return 2.0 * (1.0 - std::cos(k * h)) / (h * h); }

// Random positive warp of low Fourier degree, min value >= 0.3.
inline WarpingSpec random_positive_spec(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WarpingSpec spec;
  double amplitude = 0.0;
  for (int k = 0; k < degree; ++k) {
    spec.cos_coeffs.push_back(u(rng));
    spec.sin_coeffs.push_back(u(rng));
    amplitude += std::abs(spec.cos_coeffs.back()) + std::abs(spec.sin_coeffs.back());
  }
  spec.a0 = amplitude + 0.3 + std::abs(u(rng));
  return spec;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace warpspec::testing
