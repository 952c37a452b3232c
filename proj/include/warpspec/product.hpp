// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "warpspec/assembler.hpp"
#include "warpspec/base.hpp"
#include "warpspec/linalg.hpp"

namespace warpspec {

/// Direct discretisation of the warped Laplacian on B x_f S^1 (m = 1) as a
/// pencil on the n_B x n_F tensor grid. Node (i, j) has index i * n_F + j.
struct ProductOperator {
  WarpField warp;
  std::size_t n_fiber = 0;
  double fiber_spacing = 0.0;
  Matrix stiffness;            // symmetric, dense
  std::vector<double> weight;  // f_i h_x h_y
};

inline constexpr std::size_t kProductBudget = 4096;

/// Quadratic form sum f_face (d_x u / h_x)^2 h_x h_y + sum f^-1 (d_y u / h_y)^2 h_x h_y.
/// Throws InvalidArgument unless m = 1, BudgetExceeded above kProductBudget
/// grid points.
ProductOperator assemble_full_product(const WarpField& warp, int n_fiber,
                                      double fiber_circumference);

/// Eigenvalues of the product pencil, ascending.
std::vector<double> product_eigenvalues(const ProductOperator& op);

struct ValidationEntry {
  std::size_t index = 0;
  double full = 0.0;
  double assembled = 0.0;
  double deviation = 0.0;
};

struct ValidationReport {
  std::size_t k = 0;
  double max_abs_dev = 0.0;
  double max_scaled_dev = 0.0;  // max |dev| / (1 + |lambda|)
  double tolerance = 1e-8;
  bool pass = false;
  std::vector<ValidationEntry> per_level;
};

/// Compares the k lowest product eigenvalues with the assembled multiset
/// (each raw source value repeated m_F times). PASS iff every deviation is
/// <= tolerance * (1 + |lambda|). Throws SizeMismatch if either side has
/// fewer than k values.
ValidationReport validate_separation(const ProductOperator& op,
                                     const SpectrumClassification& assembled, std::size_t k,
                                     double tolerance = 1e-8);
ValidationReport validate_separation(std::span<const double> full,
                                     const SpectrumClassification& assembled, std::size_t k,
                                     double tolerance = 1e-8);

/// The assembled multiset, ascending.
std::vector<double> expand_multiset(const SpectrumClassification& assembled);

}  // namespace warpspec
