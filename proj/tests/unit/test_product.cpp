// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "warpspec/assembler.hpp"
#include "warpspec/error.hpp"
#include "warpspec/fiber.hpp"
#include "warpspec/product.hpp"

using namespace warpspec;
using namespace warpspec::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SpectrumClassification assembled(const WarpField& f, int n_fiber) {
  const auto fiber = discrete_circle_fiber(n_fiber, kTwoPi);
  return assemble_spectrum(spectrum_of_family(f, fiber, kInf), fiber, kInf, kDefaultClusterTol);
}

}  // namespace

TEST_SUITE("product") {

TEST_CASE("flat product stiffness is the 5-point Laplacian") {
  const int nb = 6, nf = 5;
  const BaseMesh mesh = circle(nb);
  const auto op = assemble_full_product(warp(mesh, fourier(1.0)), nf, kTwoPi);
  const double hx = mesh.spacing(), hy = kTwoPi / nf;
  for (int a = 0; a < nb * nf; ++a) {
    for (int b = 0; b < nb * nf; ++b) {
      const int ia = a / nf, ja = a % nf, ib = b / nf, jb = b % nf;
      const int di = (ia - ib + nb) % nb, dj = (ja - jb + nf) % nf;
      double expect = 0.0;
      if (a == b) expect = 2.0 * hy / hx + 2.0 * hx / hy;
      else if (dj == 0 && (di == 1 || di == nb - 1)) expect = -hy / hx;
      else if (di == 0 && (dj == 1 || dj == nf - 1)) expect = -hx / hy;
      CHECK(op.stiffness(a, b) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(op.weight[a] == doctest::Approx(hx * hy));
  }
}

TEST_CASE("product stiffness is symmetric") {
  const auto op = assemble_full_product(warp(circle(12), fourier(2.0, {1.0})), 8, kTwoPi);
  CHECK(op.stiffness.is_symmetric());
}

TEST_CASE("constant warp separates with fiber values divided by c^2") {
  const int nb = 10, nf = 8;
  const double c = 1.6;
  const BaseMesh mesh = circle(nb);
  const auto full = product_eigenvalues(assemble_full_product(warp(mesh, fourier(c)), nf, kTwoPi));
  std::vector<double> expect;
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nf; ++k)
      expect.push_back(symbol(j, mesh.spacing()) + symbol(k, kTwoPi / nf) / (c * c));
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(full[i] == doctest::Approx(expect[i]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("flat torus is a Kronecker sum") {
  const BaseMesh mesh = circle(16);
  const WarpField f = warp(mesh, fourier(1.0));
  const auto op = assemble_full_product(f, 16, kTwoPi);
  const auto full = product_eigenvalues(op);
  std::vector<double> sums;
  for (int j = 0; j < 16; ++j)
    for (int k = 0; k < 16; ++k) sums.push_back(symbol(j, mesh.spacing()) + symbol(k, kTwoPi / 16));
  std::sort(sums.begin(), sums.end());
  for (std::size_t i = 0; i < sums.size(); ++i)
    CHECK(full[i] == doctest::Approx(sums[i]).epsilon(1e-12).scale(1.0));
  const auto report = validate_separation(full, assembled(f, 16), 256);
  CHECK(report.pass);
}

TEST_CASE("warped torus separates exactly") {
  const WarpField f = warp(circle(32), fourier(2.0, {1.0}));
  const auto report = validate_separation(assemble_full_product(f, 32, kTwoPi), assembled(f, 32), 40);
  CHECK(report.pass);
  CHECK(report.max_scaled_dev <= 1e-8);
  CHECK(report.per_level.size() == 40);
  CHECK(report.k == 40);
}

TEST_CASE("a mismatched warp fails validation") {
  const WarpField f = warp(circle(16), fourier(2.0, {1.0}));
  const WarpField g = warp(circle(16), fourier(2.0, {0.9}));
  const auto report = validate_separation(assemble_full_product(f, 16, kTwoPi), assembled(g, 16), 40);
  CHECK_FALSE(report.pass);
  CHECK(report.max_abs_dev > 1e-4);
}

TEST_CASE("product converges to the analytic-fiber spectrum at second order") {
  // Reference: the lowest nonzero level with analytic fiber values and a fine base.
  const auto fiber = circle_fiber(kTwoPi, 4.0);
  // Richardson extrapolation of the base discretisation from n = 256, 512.
  auto lowest_nonzero = [&](int n) {
    SolveOptions opts;
    opts.want_vectors = false;
    const auto family = spectrum_of_family(warp(circle(n), fourier(2.0, {1.0})), fiber, 2.0, opts);
    const auto s = assemble_spectrum(family, fiber, 2.0, kDefaultClusterTol);
    REQUIRE(s.levels.size() >= 2);
    return s.levels[1].lambda;
  };
  const double exact = (4.0 * lowest_nonzero(512) - lowest_nonzero(256)) / 3.0;
  std::vector<double> err;
  for (int n : {8, 16, 32}) {
    const auto full = product_eigenvalues(assemble_full_product(warp(circle(n), fourier(2.0, {1.0})), n, kTwoPi));
    err.push_back(std::abs(full[1] - exact));
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    CHECK(err[k] / err[k + 1] >= 3.5);
    CHECK(err[k] / err[k + 1] <= 4.5);
  }
}

TEST_CASE("product errors") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kConfig;
  };
  CHECK(code_of([] { assemble_full_product(warp(circle(128), fourier(1.0)), 64, kTwoPi); }) ==
        ErrorCode::kBudgetExceeded);
  CHECK(code_of([] { assemble_full_product(warp(circle(8), fourier(1.0), 2), 8, kTwoPi); }) ==
        ErrorCode::kInvalidArgument);
  CHECK(code_of([] { assemble_full_product(warp(circle(8), fourier(1.0)), 3, kTwoPi); }) ==
        ErrorCode::kTooCoarse);
  const WarpField f = warp(circle(8), fourier(1.0));
  CHECK(code_of([&] { validate_separation(std::vector<double>(10, 0.0), assembled(f, 8), 40); }) ==
        ErrorCode::kSizeMismatch);
}

}
