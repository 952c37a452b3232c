// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "warpspec/error.hpp"
#include "warpspec/fiber.hpp"

using namespace warpspec;

namespace {

constexpr double kTwoPi = 6.283185307179586;

void check_levels(const FiberSpectrum& s, std::vector<std::pair<double, int>> expect) {
  REQUIRE(s.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(s[i].mu == doctest::Approx(expect[i].first).epsilon(1e-13));
    CHECK(s[i].mult == expect[i].second);
  }
}

void check_invariants(const FiberSpectrum& s) {
  REQUIRE(s.size() > 0);
  CHECK(s[0].mu == 0.0);
  CHECK(s[0].mult == 1);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].mu > s[i - 1].mu);
  for (const auto& level : s.levels()) {
    CHECK(level.mult >= 1);
    if (level.label) CHECK(level.label->real_dim >= 1);
  }
}

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

TEST_SUITE("fiber") {

TEST_CASE("circle fiber") {
  check_levels(circle_fiber(kTwoPi, 5.0), {{0, 1}, {1, 2}, {4, 2}});
  check_levels(circle_fiber(M_PI, 5.0), {{0, 1}, {4, 2}});
  check_levels(circle_fiber(kTwoPi, 0.0), {{0, 1}});
  const auto s = circle_fiber(kTwoPi, 30.0);
  check_invariants(s);
  CHECK(s.fiber_dim() == 1);
  CHECK(s.labelled());
  CHECK(s[2].label->tag == "rotation_k=2");
  CHECK(s[2].label->real_dim == 2);
  CHECK(code_of([] { circle_fiber(kTwoPi, -1.0); }) == ErrorCode::kInvalidCutoff);
  CHECK(code_of([] { circle_fiber(0.0, 1.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("sphere fiber") {
  check_levels(sphere_fiber(2), {{0, 1}, {2, 3}, {6, 5}});
  check_levels(sphere_fiber(0), {{0, 1}});
  const auto s = sphere_fiber(4);
  check_invariants(s);
  CHECK(s.fiber_dim() == 2);
  CHECK(s[3].label->tag == "so3_irrep_dim_7");
  CHECK(s[3].label->real_dim == 7);
  CHECK(code_of([] { sphere_fiber(-1); }) == ErrorCode::kInvalidCutoff);
}

TEST_CASE("discrete circle fiber") {
  check_levels(discrete_circle_fiber(4, kTwoPi),
               {{0, 1}, {8 / (M_PI * M_PI), 2}, {16 / (M_PI * M_PI), 1}});
  for (int n : {4, 5, 8, 9, 32, 33}) {
    const auto s = discrete_circle_fiber(n, kTwoPi);
    check_invariants(s);
    CHECK(s.size() == static_cast<std::size_t>(n / 2 + 1));
    CHECK(s.total_multiplicity() == n);
  }
  CHECK(code_of([] { discrete_circle_fiber(3, kTwoPi); }) == ErrorCode::kTooCoarse);
}

TEST_CASE("discrete fiber converges to the circle at second order") {
  const auto exact = circle_fiber(kTwoPi, 10.0);
  std::vector<double> err;
  for (int n : {16, 32, 64}) {
    const auto d = discrete_circle_fiber(n, kTwoPi);
    double worst = 0.0;
    for (std::size_t k = 0; k < exact.size(); ++k)
      worst = std::max(worst, std::abs(d[k].mu - exact[k].mu));
    err.push_back(worst);
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("custom fiber") {
  check_levels(custom_fiber({{0, 1, std::nullopt}, {3, 2, std::nullopt}}, 1), {{0, 1}, {3, 2}});
  check_levels(custom_fiber({{3, 2, std::nullopt}, {0, 1, std::nullopt}}, 1), {{0, 1}, {3, 2}});
  const auto merged =
      custom_fiber({{0, 1, std::nullopt}, {2, 1, IrrepLabel{"a", 1}}, {2, 2, IrrepLabel{"b", 2}}}, 1);
  check_levels(merged, {{0, 1}, {2, 3}});
  CHECK_FALSE(merged[1].label.has_value());
  CHECK(code_of([] { custom_fiber({{-1, 1, std::nullopt}}, 1); }) ==
        ErrorCode::kNegativeEigenvalue);
  CHECK(code_of([] { custom_fiber({{0, 0, std::nullopt}}, 1); }) == ErrorCode::kZeroMultiplicity);
  CHECK(code_of([] { custom_fiber({{0, 1, std::nullopt}, {1, 3, IrrepLabel{"x", 2}}}, 1); }) ==
        ErrorCode::kLabelMismatch);
  // Two copies of a 2-dimensional irrep at one eigenvalue.
  CHECK_NOTHROW(custom_fiber({{0, 1, std::nullopt}, {1, 4, IrrepLabel{"x", 2}}}, 1));
}

}
