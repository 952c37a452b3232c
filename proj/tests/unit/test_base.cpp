// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "warpspec/error.hpp"

using namespace warpspec;
using namespace warpspec::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_SUITE("base") {

TEST_CASE("circle mesh") {
  const BaseMesh m = circle(4);
  REQUIRE(m.size() == 4);
  CHECK(m.spacing() == doctest::Approx(M_PI / 2));
  const double expect[] = {0.0, M_PI / 2, M_PI, 3 * M_PI / 2};
  for (int i = 0; i < 4; ++i) CHECK(m.nodes()[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  CHECK(m.faces().size() == 4);
  CHECK(m.periodic());
}

TEST_CASE("dirichlet interval uses interior nodes") {
  const BaseMesh m = build_base_mesh(BaseKind::kInterval, 1.0, 4, BoundaryCondition::kDirichlet);
  CHECK(m.spacing() == doctest::Approx(0.2));
  const double expect[] = {0.2, 0.4, 0.6, 0.8};
  for (int i = 0; i < 4; ++i) CHECK(m.nodes()[i] == doctest::Approx(expect[i]));
  CHECK(m.faces().size() == 5);
  CHECK(m.faces().front().left == Face::kNoNode);
  CHECK(m.faces().back().right == Face::kNoNode);
}

TEST_CASE("neumann interval uses cell centres") {
  const BaseMesh m = build_base_mesh(BaseKind::kInterval, 2.0, 4, BoundaryCondition::kNeumann);
  CHECK(m.spacing() == doctest::Approx(0.5));
  CHECK(m.nodes()[0] == doctest::Approx(0.25));
  CHECK(m.nodes()[3] == doctest::Approx(1.75));
  std::vector<double> u{1.0, 2.0, 4.0, 8.0};
  CHECK(m.face_difference(u, m.faces().front()) == 0.0);
  CHECK(m.face_difference(u, m.faces().back()) == 0.0);
}

TEST_CASE("mesh errors") {
  CHECK(code_of([] { circle(3); }) == ErrorCode::kTooCoarse);
  CHECK(code_of([] { circle(8, -1.0); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] {
          build_base_mesh(BaseKind::kCircle, 1.0, 8, BoundaryCondition::kDirichlet);
        }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] {
          build_base_mesh(BaseKind::kInterval, 1.0, 8, BoundaryCondition::kPeriodic);
        }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("sampling a constant warp") {
  const WarpField f = warp(circle(8), fourier(2.0));
  for (double v : f.node_values()) CHECK(v == 2.0);
  for (double v : f.face_values()) CHECK(v == 2.0);
}

TEST_CASE("sampling 2 + cos x") {
  const WarpField f = warp(circle(4), fourier(2.0, {1.0}));
  const double expect[] = {3.0, 2.0, 1.0, 2.0};
  for (int i = 0; i < 4; ++i) CHECK(f.node_values()[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  // Faces carry the closed form at the midpoints.
  CHECK(f.face_values().size() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(f.face_values()[k] == doctest::Approx(2.0 + std::cos(circle(4).faces()[k].x)));
}

TEST_CASE("raw samples average onto faces") {
  WarpingSpec spec;
  spec.raw = std::vector<double>{1.0, 2.0, 3.0, 4.0};
  const WarpField f = warp(circle(4), spec);
  CHECK(f.node_values()[2] == 3.0);
  const auto faces = f.mesh.faces();
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const double mean =
        0.5 * (f.node_values()[faces[k].left] + f.node_values()[faces[k].right]);
    CHECK(f.face_values()[k] == mean);
  }
  spec.raw = std::vector<double>{1.0, 2.0};
  CHECK(code_of([&] { warp(circle(4), spec); }) == ErrorCode::kLengthMismatch);
}

TEST_CASE("nonpositive and nonfinite warps") {
  CHECK(code_of([] { warp(circle(8), fourier(0.5, {1.0})); }) == ErrorCode::kNonPositiveWarp);
  CHECK_NOTHROW(sample_warping(fourier(0.5, {1.0}), circle(8), 1, false));
  WarpingSpec spec;
  spec.raw = std::vector<double>{1.0, std::nan(""), 1.0, 1.0};
  CHECK(code_of([&] { warp(circle(4), spec); }) == ErrorCode::kNonFiniteInput);
}

TEST_CASE("weighted inner product") {
  for (int n : {4, 7, 16, 33}) {
    const BaseMesh mesh = circle(n);
    std::vector<double> one(mesh.size(), 1.0);
    CHECK(weighted_inner(one, one, warp(mesh, fourier(1.0))) == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(weighted_inner(one, one, warp(mesh, fourier(3.0))) ==
          doctest::Approx(3.0 * kTwoPi).epsilon(1e-14));
    // Exponent 0: the bare measure of the base, for any warp.
    CHECK(weighted_inner(one, one, warp(mesh, fourier(2.0, {0.5}, {0.3})), 0) ==
          doctest::Approx(kTwoPi).epsilon(1e-15));
  }
  const BaseMesh mesh = circle(16);
  std::vector<double> c(16), one(16, 1.0);
  for (int i = 0; i < 16; ++i) c[i] = std::cos(mesh.nodes()[i]);
  CHECK(std::abs(weighted_inner(c, one, warp(mesh, fourier(1.0)))) < 1e-14);
  CHECK(code_of([&] { weighted_inner(c, std::vector<double>(3), warp(mesh, fourier(1.0))); }) ==
        ErrorCode::kLengthMismatch);
}

TEST_CASE("weighted inner product is symmetric positive definite") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const BaseMesh mesh = circle(12 + trial);
    const WarpField f = warp(mesh, random_positive_spec(rng, 3), 1 + trial % 3);
    std::vector<double> u(mesh.size()), v(mesh.size());
    for (auto& x : u) x = g(rng);
    for (auto& x : v) x = g(rng);
    CHECK(weighted_inner(u, v, f) == doctest::Approx(weighted_inner(v, u, f)).epsilon(1e-14));
    CHECK(weighted_inner(u, u, f) > 0.0);
  }
}

TEST_CASE("weighted inner product converges at second order") {
  // Midpoint rule on cell centres: int_0^1 e^x (1 + x^2) dx = 2e - 3.
  const double exact = 2.0 * std::exp(1.0) - 3.0;
  std::vector<double> err;
  for (int n : {16, 32, 64}) {
    const BaseMesh mesh = build_base_mesh(BaseKind::kInterval, 1.0, n, BoundaryCondition::kNeumann);
    const WarpField f = warp(mesh, fourier(1.0));
    std::vector<double> u(mesh.size()), v(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      u[i] = std::exp(mesh.nodes()[i]);
      v[i] = 1.0 + mesh.nodes()[i] * mesh.nodes()[i];
    }
    err.push_back(std::abs(weighted_inner(u, v, f) - exact));
  }
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    const double ratio = err[k] / err[k + 1];
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("dirichlet energy") {
  const BaseMesh mesh = circle(64);
  const WarpField f = warp(mesh, fourier(1.0));
  CHECK(dirichlet_energy(std::vector<double>(64, 5.0), f, 1) == 0.0);
  CHECK(dirichlet_energy(std::vector<double>(64, 5.0), warp(mesh, fourier(2.0, {0.7})), 1) == 0.0);
  std::vector<double> s(64);
  for (int i = 0; i < 64; ++i) s[i] = std::sin(mesh.nodes()[i]);
  const double h = mesh.spacing();
  const double e = dirichlet_energy(s, f, 0);
  // Exact discrete value is pi times the 3-point symbol.
  CHECK(e == doctest::Approx(M_PI * symbol(1.0, h)).epsilon(1e-12));
  CHECK(std::abs(e - M_PI) < 3e-3);
  s[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK(code_of([&] { dirichlet_energy(s, f, 0); }) == ErrorCode::kNonFiniteInput);
}

}
