// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/product.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "warpspec/error.hpp"

namespace warpspec {

ProductOperator assemble_full_product(const WarpField& warp, int n_fiber,
                                      double fiber_circumference) {
  if (warp.m_fiber != 1)
    throw Error(ErrorCode::kInvalidArgument, "the product validator handles circle fibers (m=1)");
  if (n_fiber < 4) throw Error(ErrorCode::kTooCoarse, "fiber grid needs n_F >= 4");
  if (!(fiber_circumference > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "fiber circumference must be positive");
  if (!warp.strictly_positive())
    throw Error(ErrorCode::kNonPositiveWarp, "product operator needs a positive warp");
  const std::size_t nb = warp.mesh.size();
  const auto nf = static_cast<std::size_t>(n_fiber);
  if (nb * nf > kProductBudget) {
    throw Error(ErrorCode::kBudgetExceeded, "product grid " + std::to_string(nb) + "x" +
                                                std::to_string(nf) + " exceeds " +
                                                std::to_string(kProductBudget) + " points");
  }

  const double hx = warp.mesh.spacing();
  const double hy = fiber_circumference / n_fiber;
  const auto f = warp.node_values();
  const auto ff = warp.face_values();
  const auto faces = warp.mesh.faces();
  const std::size_t n = nb * nf;

  ProductOperator op{warp, nf, hy, Matrix(n, n), std::vector<double>(n)};
  auto couple = [&op](std::size_t a, std::size_t b, double c) {
    op.stiffness(a, a) += c;
    op.stiffness(b, b) += c;
    op.stiffness(a, b) -= c;
    op.stiffness(b, a) -= c;
  };

  for (std::size_t j = 0; j < nf; ++j) {
    // Base direction: flux f_face (u_r - u_l) / h_x^2 scaled by h_x h_y.
    for (std::size_t k = 0; k < faces.size(); ++k) {
      const double c = ff[k] * hy / hx;
      const bool has_left = faces[k].left != Face::kNoNode;
      const bool has_right = faces[k].right != Face::kNoNode;
      if (has_left && has_right) {
        couple(static_cast<std::size_t>(faces[k].left) * nf + j,
               static_cast<std::size_t>(faces[k].right) * nf + j, c);
      } else if (warp.mesh.bc() == BoundaryCondition::kDirichlet) {
        const auto i = static_cast<std::size_t>(has_left ? faces[k].left : faces[k].right);
        op.stiffness(i * nf + j, i * nf + j) += c;
      }
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    // Fiber direction: f^-2 u_yy multiplied through by the weight f.
    const double c = hx / (f[i] * hy);
    for (std::size_t j = 0; j < nf; ++j) couple(i * nf + j, i * nf + (j + 1) % nf, c);
    for (std::size_t j = 0; j < nf; ++j) op.weight[i * nf + j] = f[i] * hx * hy;
  }
  return op;
}

std::vector<double> product_eigenvalues(const ProductOperator& op) {
  const std::size_t n = op.weight.size();
  Matrix scaled = op.stiffness;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(op.weight[i]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) scaled(a, b) *= s[a] * s[b];
  return symmetric_eigen(scaled, false).values;
}

std::vector<double> expand_multiset(const SpectrumClassification& assembled) {
  std::vector<double> out;
  for (const auto& level : assembled.levels)
    for (const auto& src : level.sources)
      for (double lambda : src.lambdas)
        for (int c = 0; c < src.m_fiber; ++c) out.push_back(lambda);
  std::sort(out.begin(), out.end());
  return out;
}

ValidationReport validate_separation(std::span<const double> full,
                                     const SpectrumClassification& assembled, std::size_t k,
                                     double tolerance) {
  const std::vector<double> expanded = expand_multiset(assembled);
  if (full.size() < k || expanded.size() < k) {
    throw Error(ErrorCode::kSizeMismatch, "need " + std::to_string(k) + " eigenvalues, have " +
                                              std::to_string(full.size()) + " (product) and " +
                                              std::to_string(expanded.size()) + " (assembled)");
  }
  ValidationReport report;
  report.k = k;
  report.tolerance = tolerance;
  report.pass = true;
  for (std::size_t i = 0; i < k; ++i) {
    const double dev = std::abs(full[i] - expanded[i]);
    const double scaled = dev / (1.0 + std::abs(expanded[i]));
    report.max_abs_dev = std::max(report.max_abs_dev, dev);
    report.max_scaled_dev = std::max(report.max_scaled_dev, scaled);
    if (scaled > tolerance) report.pass = false;
    report.per_level.push_back({i, full[i], expanded[i], dev});
  }
  return report;
}

ValidationReport validate_separation(const ProductOperator& op,
                                     const SpectrumClassification& assembled, std::size_t k,
                                     double tolerance) {
  return validate_separation(product_eigenvalues(op), assembled, k, tolerance);
}

}  // namespace warpspec
