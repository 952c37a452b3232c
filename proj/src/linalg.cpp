// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "warpspec/error.hpp"

namespace warpspec {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool Matrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

constexpr int kMaxQlIterations = 60;
constexpr int kMaxJacobiSweeps = 100;

// Householder reduction to tridiagonal form (the EISPACK tred2 scheme).
// `s` holds the input matrix and is used transposed, so that every inner
// loop of the reduction and of the back-accumulation runs along a row.
// On exit row k of `s` is the k-th column of the accumulated transform.
void householder_tridiagonalize(Matrix& s, std::vector<double>& d, std::vector<double>& e,
                                bool accumulate) {
  const std::size_t n = s.rows();
  auto v = [&s](std::size_t r, std::size_t c) -> double& { return s(c, r); };

  for (std::size_t j = 0; j < n; ++j) d[j] = v(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
        v(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        v(j, i) = f;
        g = e[j] + v(j, j) * f;
        auto col = s.row(j);
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += col[k] * d[k];
          e[k] += col[k] * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        auto col = s.row(j);
        for (std::size_t k = j; k <= i - 1; ++k) col[k] -= (f * e[k] + g * d[k]);
        d[j] = v(i - 1, j);
        v(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    v(n - 1, i) = v(i, i);
    v(i, i) = 1.0;
    const double h = d[i + 1];
    if (accumulate && h != 0.0) {
      auto next = s.row(i + 1);
      for (std::size_t k = 0; k <= i; ++k) d[k] = next[k] / h;
      for (std::size_t j = 0; j <= i; ++j) {
        auto col = s.row(j);
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += next[k] * col[k];
        for (std::size_t k = 0; k <= i; ++k) col[k] -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = v(n - 1, j);
    v(n - 1, j) = 0.0;
  }
  v(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
// `e[i]` is the coupling between rows i-1 and i on entry (e[0] unused).
// Rotations are applied to rows of `z` when `vectors` is set.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::abs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > kMaxQlIterations) {
          throw Error(ErrorCode::kConvergenceFailure,
                      "tridiagonal QL did not converge (size " + std::to_string(n) + ")");
        }
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = c, c3 = c;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t ii = m; ii-- > l;) {
          const std::size_t i = ii;
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (z != nullptr) {
            auto lo = z->row(i);
            auto hi = z->row(i + 1);
            for (std::size_t k = 0; k < lo.size(); ++k) {
              const double t = hi[k];
              hi[k] = s * lo[k] + c * t;
              lo[k] = c * lo[k] - s * t;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

SymmetricEigenResult sorted(std::vector<double> values, const Matrix* vectors) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  SymmetricEigenResult out;
  out.values.reserve(values.size());
  for (std::size_t k : order) out.values.push_back(values[k]);
  if (vectors != nullptr) {
    out.vectors = Matrix(vectors->rows(), vectors->cols());
    for (std::size_t k = 0; k < order.size(); ++k) {
      auto src = vectors->row(order[k]);
      std::copy(src.begin(), src.end(), out.vectors.row(k).begin());
    }
  }
  return out;
}

SymmetricEigenResult householder_ql(const Matrix& a, bool want_vectors) {
  const std::size_t n = a.rows();
  Matrix s = a;
  std::vector<double> d(n), e(n);
  householder_tridiagonalize(s, d, e, want_vectors);
  tridiagonal_ql(d, e, want_vectors ? &s : nullptr);
  return sorted(std::move(d), want_vectors ? &s : nullptr);
}

SymmetricEigenResult jacobi(const Matrix& input, bool want_vectors) {
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);  // row k accumulates eigenvector k
  std::vector<double> d(n), b(n), z(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) b[p] = d[p] = a(p, p);

  auto rotate = [](Matrix& m, std::size_t i, std::size_t j, std::size_t k, std::size_t l,
                   double s, double tau) {
    const double g = m(i, j);
    const double h = m(k, l);
    m(i, j) = g - s * (h + g * tau);
    m(k, l) = h + s * (g - h * tau);
  };

  for (int sweep = 1; sweep <= kMaxJacobiSweeps; ++sweep) {
    double sm = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) sm += std::abs(a(p, q));
    if (sm == 0.0) return sorted(std::move(d), want_vectors ? &v : nullptr);

    const double tresh = sweep < 4 ? 0.2 * sm / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double g = 100.0 * std::abs(a(p, q));
        if (sweep > 4 && std::abs(d[p]) + g == std::abs(d[p]) &&
            std::abs(d[q]) + g == std::abs(d[q])) {
          a(p, q) = 0.0;
        } else if (std::abs(a(p, q)) > tresh) {
          double h = d[q] - d[p];
          double t;
          if (std::abs(h) + g == std::abs(h)) {
            t = a(p, q) / h;
          } else {
            const double theta = 0.5 * h / a(p, q);
            t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          const double tau = s / (1.0 + c);
          h = t * a(p, q);
          z[p] -= h;
          z[q] += h;
          d[p] -= h;
          d[q] += h;
          a(p, q) = 0.0;
          for (std::size_t j = 0; j < p; ++j) rotate(a, j, p, j, q, s, tau);
          for (std::size_t j = p + 1; j < q; ++j) rotate(a, p, j, j, q, s, tau);
          for (std::size_t j = q + 1; j < n; ++j) rotate(a, p, j, q, j, s, tau);
          if (want_vectors)
            for (std::size_t j = 0; j < n; ++j) rotate(v, p, j, q, j, s, tau);
        }
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      b[p] += z[p];
      d[p] = b[p];
      z[p] = 0.0;
    }
  }
  throw Error(ErrorCode::kConvergenceFailure,
              "Jacobi rotations did not converge (size " + std::to_string(n) + ")");
}

}  // namespace

SymmetricEigenResult gram_eigen(const Matrix& columns, bool want_vectors) {
  const std::size_t n = columns.rows();
  if (n == 0) return {};
  Matrix g = columns;  // row k is column k of the factor
  Matrix v;
  if (want_vectors) v = Matrix::identity(n);
  const double tol = std::numeric_limits<double>::epsilon() *
                    std::sqrt(static_cast<double>(columns.cols()));
  double largest = 0.0;
  for (std::size_t k = 0; k < n; ++k) largest = std::max(largest, dot(g.row(k), g.row(k)));
  // a column this small is roundoff from a null direction
  const double negligible = tol * tol * largest;

  auto rotate = [](std::span<double> x, std::span<double> y, double c, double s) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double a = x[k];
      const double b = y[k];
      x[k] = c * a - s * b;
      y[k] = s * a + c * b;
    }
  };

  for (int sweep = 1; sweep <= kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        auto gp = g.row(p);
        auto gq = g.row(q);
        const double alpha = dot(gp, gp);
        const double beta = dot(gq, gq);
        const double gamma = dot(gp, gq);
        if (alpha <= negligible || beta <= negligible) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        double t = 1.0 / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        if (zeta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        rotate(gp, gq, c, s);
        if (want_vectors) rotate(v.row(p), v.row(q), c, s);
      }
    }
    if (!rotated) {
      std::vector<double> values(n);
      for (std::size_t k = 0; k < n; ++k) values[k] = dot(g.row(k), g.row(k));
      return sorted(std::move(values), want_vectors ? &v : nullptr);
    }
  }
  throw Error(ErrorCode::kConvergenceFailure,
              "one-sided Jacobi did not converge (size " + std::to_string(n) + ")");
}

SymmetricEigenResult symmetric_eigen(const Matrix& a, bool want_vectors, EigenBackend backend) {
  if (a.rows() != a.cols())
    throw Error(ErrorCode::kInvalidArgument, "symmetric_eigen: matrix is not square");
  if (a.rows() == 0) return {};
  // a bare matrix carries no factor, so the factored backend falls back to
  // two-sided rotations
  if (backend == EigenBackend::kJacobi || backend == EigenBackend::kFactoredJacobi)
    return jacobi(a, want_vectors);
  return householder_ql(a, want_vectors);
}

SymmetricEigenResult tridiagonal_eigen(std::span<const double> diag, std::span<const double> sub,
                                       bool want_vectors) {
  const std::size_t n = diag.size();
  if (n == 0) return {};
  if (sub.size() + 1 != n)
    throw Error(ErrorCode::kLengthMismatch, "tridiagonal_eigen: sub-diagonal length mismatch");
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = sub[i - 1];
  Matrix z;
  if (want_vectors) z = Matrix::identity(n);
  tridiagonal_ql(d, e, want_vectors ? &z : nullptr);
  return sorted(std::move(d), want_vectors ? &z : nullptr);
}

}  // namespace warpspec
