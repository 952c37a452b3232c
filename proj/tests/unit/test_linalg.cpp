// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "warpspec/error.hpp"
#include "warpspec/linalg.hpp"

using namespace warpspec;

namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

double residual(const Matrix& a, const SymmetricEigenResult& r) {
  double worst = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    auto v = r.vectors.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
      worst = std::max(worst, std::abs(s - r.values[k] * v[i]));
    }
  }
  return worst;
}

double orthogonality(const Matrix& v) {
  double worst = 0.0;
  for (std::size_t a = 0; a < v.rows(); ++a)
    for (std::size_t b = 0; b < v.rows(); ++b)
      worst = std::max(worst, std::abs(dot(v.row(a), v.row(b)) - (a == b ? 1.0 : 0.0)));
  return worst;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("householder and jacobi agree on random symmetric matrices") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Matrix a = random_symmetric(40, seed);
    const auto ql = symmetric_eigen(a, true, EigenBackend::kHouseholderQL);
    const auto jac = symmetric_eigen(a, true, EigenBackend::kJacobi);
    CHECK(std::is_sorted(ql.values.begin(), ql.values.end()));
    for (std::size_t k = 0; k < ql.values.size(); ++k)
      CHECK(ql.values[k] == doctest::Approx(jac.values[k]).epsilon(1e-12));
    CHECK(residual(a, ql) < 1e-12);
    CHECK(residual(a, jac) < 1e-12);
    CHECK(orthogonality(ql.vectors) < 1e-13);
    CHECK(orthogonality(jac.vectors) < 1e-13);
  }
}

TEST_CASE("trace is preserved") {
  const Matrix a = random_symmetric(25, 9);
  const auto r = symmetric_eigen(a, false);
  double tr = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 25; ++i) tr += a(i, i);
  for (double v : r.values) sum += v;
  CHECK(sum == doctest::Approx(tr).epsilon(1e-12));
}

TEST_CASE("tridiagonal solver matches the dense path") {
  std::vector<double> diag{2.0, 3.0, 1.0, 4.0, 5.0, 0.5};
  std::vector<double> sub{-1.0, 0.3, 0.7, -0.2, 1.1};
  Matrix a(6, 6);
  for (std::size_t i = 0; i < 6; ++i) a(i, i) = diag[i];
  for (std::size_t i = 0; i < 5; ++i) a(i + 1, i) = a(i, i + 1) = sub[i];
  const auto t = tridiagonal_eigen(diag, sub, true);
  const auto d = symmetric_eigen(a, false, EigenBackend::kJacobi);
  for (std::size_t k = 0; k < 6; ++k) CHECK(t.values[k] == doctest::Approx(d.values[k]).epsilon(1e-13));
  CHECK(residual(a, t) < 1e-13);
}

TEST_CASE("diagonal and 1x1 matrices") {
  Matrix a(3, 3);
  a(0, 0) = 3.0;
  a(1, 1) = -1.0;
  a(2, 2) = 2.0;
  const auto r = symmetric_eigen(a, true);
  CHECK(r.values == std::vector<double>{-1.0, 2.0, 3.0});
  const auto one = symmetric_eigen(Matrix(1, 1, 7.0), true);
  CHECK(one.values == std::vector<double>{7.0});
  CHECK(std::abs(one.vectors(0, 0)) == 1.0);
}

TEST_CASE("gram eigen matches the dense solver on G^T G") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 12, rows = 20;
  Matrix g(n, rows);  // row k is column k of G
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t r = 0; r < rows; ++r) g(k, r) = u(rng);
  Matrix gram(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) gram(a, b) = dot(g.row(a), g.row(b));
  const auto ref = symmetric_eigen(gram, false);
  const auto got = gram_eigen(g, true);
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(got.values[k] == doctest::Approx(ref.values[k]).epsilon(1e-12));
    for (std::size_t l = 0; l < n; ++l)
      CHECK(dot(got.vectors.row(k), got.vectors.row(l)) == doctest::Approx(k == l).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("matrix helpers") {
  Matrix a(2, 3);
  a(0, 2) = 5.0;
  CHECK(a.transposed()(2, 0) == 5.0);
  CHECK(Matrix::identity(3).is_symmetric());
  CHECK_FALSE(a.is_symmetric());
  CHECK(dot(std::vector<double>{1, 2}, std::vector<double>{3, 4}) == 11.0);
}

}
