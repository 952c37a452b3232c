// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "warpspec/error.hpp"

namespace warpspec {

std::vector<double> CyclicTridiagonal::apply(std::span<const double> u) const {
  const std::size_t n = size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = diag[i] * u[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i] += sub[i] * u[i + 1];
    out[i + 1] += sub[i] * u[i];
  }
  if (corner != 0.0) {
    out[0] += corner * u[n - 1];
    out[n - 1] += corner * u[0];
  }
  return out;
}

double CyclicTridiagonal::bilinear(std::span<const double> u, std::span<const double> v) const {
  return dot(u, apply(v));
}

Matrix CyclicTridiagonal::dense() const {
  const std::size_t n = size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) m(i + 1, i) = m(i, i + 1) = sub[i];
  m(n - 1, 0) += corner;
  m(0, n - 1) += corner;
  return m;
}

CyclicTridiagonal flux_stiffness(const BaseMesh& mesh, std::span<const double> face_coeff,
                                 std::span<const double> node_coeff) {
  const std::size_t n = mesh.size();
  CyclicTridiagonal k;
  k.diag.assign(node_coeff.begin(), node_coeff.end());
  k.sub.assign(n - 1, 0.0);
  const auto faces = mesh.faces();
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    const double c = face_coeff[f];
    const bool has_left = face.left != Face::kNoNode;
    const bool has_right = face.right != Face::kNoNode;
    if (has_left && has_right) {
      const auto l = static_cast<std::size_t>(face.left);
      const auto r = static_cast<std::size_t>(face.right);
      k.diag[l] += c;
      k.diag[r] += c;
      if (r == l + 1) {
        k.sub[l] -= c;
      } else {
        k.corner -= c;  // the wrap face (n-1, 0)
      }
    } else if (mesh.bc() == BoundaryCondition::kDirichlet) {
      k.diag[static_cast<std::size_t>(has_left ? face.left : face.right)] += c;
    }
  }
  return k;
}

WeightedOperator assemble_operator(const WarpField& warp, double mu) {
  if (!warp.strictly_positive())
    throw Error(ErrorCode::kNonPositiveWarp, "L^f_mu needs a strictly positive warp");
  if (!(mu >= 0.0) || !std::isfinite(mu))
    throw Error(ErrorCode::kInvalidArgument, "mu must be finite and >= 0");

  const int m = warp.m_fiber;
  const double h = warp.mesh.spacing();
  const auto f_node = warp.node_values();
  const auto f_face = warp.face_values();

  std::vector<double> face_coeff(f_face.size());
  for (std::size_t k = 0; k < f_face.size(); ++k) face_coeff[k] = std::pow(f_face[k], m) / h;
  std::vector<double> node_coeff(f_node.size());
  std::vector<double> weight(f_node.size());
  for (std::size_t i = 0; i < f_node.size(); ++i) {
    node_coeff[i] = mu * std::pow(f_node[i], m - 2) * h;
    weight[i] = std::pow(f_node[i], m) * h;
  }
  CyclicTridiagonal stiffness = flux_stiffness(warp.mesh, face_coeff, node_coeff);
  return {warp, mu, std::move(stiffness), std::move(weight), std::move(face_coeff),
          std::move(node_coeff)};
}

double EigenDecomposition::inner(std::span<const double> u, std::span<const double> v) const {
  double s = 0.0;
  for (std::size_t i = 0; i < weight.size(); ++i) s += u[i] * v[i] * weight[i];
  return s;
}

std::pair<std::size_t, std::size_t> cluster_around(std::span<const double> eigenvalues,
                                                   std::size_t j, double rel_gap) {
  auto close = [&](std::size_t a, std::size_t b) {
    return eigenvalues[b] - eigenvalues[a] <=
           rel_gap * (1.0 + std::max(std::abs(eigenvalues[a]), std::abs(eigenvalues[b])));
  };
  std::size_t first = j;
  while (first > 0 && close(first - 1, first)) --first;
  std::size_t last = j + 1;
  while (last < eigenvalues.size() && close(last - 1, last)) ++last;
  return {first, last};
}

namespace {

// Flips a vector so that its first entry that is not roundoff is positive.
void fix_sign(std::span<double> v) {
  double peak = 0.0;
  for (double x : v) peak = std::max(peak, std::abs(x));
  for (double x : v) {
    if (std::abs(x) > 1e-8 * peak) {
      if (x < 0)
        for (double& y : v) y = -y;
      return;
    }
  }
}

// Rotates the orthonormal rows [first, last) of `vecs` into a basis of the
// same span that depends only on the span: repeatedly pick the coordinate
// with the largest projection onto the remaining subspace and reflect so
// that a single row carries it with a positive entry.
void canonicalize_cluster(Matrix& vecs, std::size_t first, std::size_t last) {
  const std::size_t n = vecs.cols();
  std::vector<bool> used(n, false);
  for (std::size_t r = first; r + 1 < last; ++r) {
    std::vector<double> norms(n, 0.0);
    double best = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (used[c]) continue;
      double s = 0.0;
      for (std::size_t q = r; q < last; ++q) s += vecs(q, c) * vecs(q, c);
      norms[c] = s;
      best = std::max(best, s);
    }
    std::size_t pivot = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!used[c] && norms[c] >= best * (1.0 - 1e-8)) {
        pivot = c;
        break;
      }
    }
    used[pivot] = true;

    // Householder reflector H on rows r..last-1 with H q = e_r, where q is
    // the normalised pivot column.
    const std::size_t p = last - r;
    std::vector<double> q(p);
    const double norm = std::sqrt(norms[pivot]);
    for (std::size_t a = 0; a < p; ++a) q[a] = vecs(r + a, pivot) / norm;
    std::vector<double> w = q;
    w[0] -= 1.0;
    const double ww = dot(w, w);
    if (ww > 1e-30) {
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        for (std::size_t a = 0; a < p; ++a) s += w[a] * vecs(r + a, c);
        const double scale = 2.0 * s / ww;
        for (std::size_t a = 0; a < p; ++a) vecs(r + a, c) -= scale * w[a];
      }
    }
  }
  fix_sign(vecs.row(last - 1));
}

// K = G^T G with one row of G per face and per positive node term. Row k of
// the result is column k of G W^{-1/2}.
Matrix scaled_factor(const WeightedOperator& op, std::span<const double> inv_sqrt_w) {
  const std::size_t n = op.weight.size();
  const auto faces = op.warp.mesh.faces();
  const bool dirichlet = op.warp.mesh.bc() == BoundaryCondition::kDirichlet;
  std::size_t rows = 0;
  for (const Face& face : faces)
    rows += (face.left != Face::kNoNode && face.right != Face::kNoNode) || dirichlet;
  for (double c : op.node_coeff) rows += c > 0.0;

  Matrix g(n, rows);
  std::size_t r = 0;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const Face& face = faces[k];
    const double s = std::sqrt(op.face_coeff[k]);
    const bool has_left = face.left != Face::kNoNode;
    const bool has_right = face.right != Face::kNoNode;
    if (has_left && has_right) {
      const auto l = static_cast<std::size_t>(face.left);
      const auto rt = static_cast<std::size_t>(face.right);
      g(rt, r) = s * inv_sqrt_w[rt];
      g(l, r) = -s * inv_sqrt_w[l];
      ++r;
    } else if (dirichlet) {
      const auto i = static_cast<std::size_t>(has_left ? face.left : face.right);
      g(i, r++) = s * inv_sqrt_w[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (op.node_coeff[i] > 0.0) g(i, r++) = std::sqrt(op.node_coeff[i]) * inv_sqrt_w[i];
  return g;
}

}  // namespace

EigenDecomposition eigensolve(const WeightedOperator& op, const SolveOptions& options) {
  const std::size_t n = op.weight.size();
  std::vector<double> inv_sqrt_w(n);
  for (std::size_t i = 0; i < n; ++i) inv_sqrt_w[i] = 1.0 / std::sqrt(op.weight[i]);

  // M = W^{-1/2} K W^{-1/2} keeps the stencil shape.
  CyclicTridiagonal scaled = op.stiffness;
  for (std::size_t i = 0; i < n; ++i) scaled.diag[i] *= inv_sqrt_w[i] * inv_sqrt_w[i];
  for (std::size_t i = 0; i + 1 < n; ++i) scaled.sub[i] *= inv_sqrt_w[i] * inv_sqrt_w[i + 1];
  scaled.corner *= inv_sqrt_w[0] * inv_sqrt_w[n - 1];

  SymmetricEigenResult raw;
  try {
    if (options.backend == EigenBackend::kFactoredJacobi) {
      raw = gram_eigen(scaled_factor(op, inv_sqrt_w), options.want_vectors);
    } else if (scaled.corner == 0.0 && options.backend == EigenBackend::kAuto) {
      raw = tridiagonal_eigen(scaled.diag, scaled.sub, options.want_vectors);
    } else {
      raw = symmetric_eigen(scaled.dense(), options.want_vectors, options.backend);
    }
  } catch (const Error& e) {
    throw Error(e.code(), std::string(e.what()) + " [size " + std::to_string(n) + ", mu " +
                              std::to_string(op.mu) + "]");
  }

  EigenDecomposition out;
  out.mu = op.mu;
  out.weight = op.weight;
  out.eigenvalues = std::move(raw.values);

  if (options.want_vectors) {
    for (std::size_t j = 0; j < out.eigenvalues.size();) {
      const auto [first, last] = cluster_around(out.eigenvalues, j, options.cluster_gap);
      if (last - first == 1) {
        fix_sign(raw.vectors.row(first));
      } else {
        canonicalize_cluster(raw.vectors, first, last);
      }
      j = last;
    }
    out.eigenvectors.resize(out.eigenvalues.size());
    for (std::size_t j = 0; j < out.eigenvalues.size(); ++j) {
      auto row = raw.vectors.row(j);
      auto& phi = out.eigenvectors[j];
      phi.resize(n);
      for (std::size_t i = 0; i < n; ++i) phi[i] = row[i] * inv_sqrt_w[i];
    }
  }

  if (options.count && *options.count < out.eigenvalues.size()) {
    out.eigenvalues.resize(*options.count);
    if (options.want_vectors) out.eigenvectors.resize(*options.count);
  }
  return out;
}

FamilySpectrum spectrum_of_family(const WarpField& warp, const FiberSpectrum& fiber,
                                  double lambda_max, const SolveOptions& options) {
  FamilySpectrum family{warp, lambda_max, {}, {}};
  if (lambda_max < 0.0) return family;
  const double f_max = warp.max_value();
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    const double mu = fiber[i].mu;
    const double bound = mu / (f_max * f_max);
    if (bound > lambda_max) {
      family.skipped.push_back({i, mu, bound});
      continue;
    }
    EigenDecomposition dec = eigensolve(assemble_operator(warp, mu), options);
    std::size_t keep = 0;
    while (keep < dec.size() && dec.eigenvalues[keep] <= lambda_max) ++keep;
    dec.eigenvalues.resize(keep);
    if (!dec.eigenvectors.empty()) dec.eigenvectors.resize(keep);
    family.branches.push_back({i, mu, std::move(dec)});
  }
  return family;
}

}  // namespace warpspec
