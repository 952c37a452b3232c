// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "warpspec/base.hpp"
#include "warpspec/fiber.hpp"
#include "warpspec/linalg.hpp"

namespace warpspec {

/// Symmetric tridiagonal matrix with an optional wrap-around coupling
/// between the first and last rows (periodic stencils).
struct CyclicTridiagonal {
  std::vector<double> diag;
  std::vector<double> sub;  // entry (i+1, i)
  double corner = 0.0;      // entry (n-1, 0), zero for interval bases

  std::size_t size() const noexcept { return diag.size(); }
  std::vector<double> apply(std::span<const double> u) const;
  double bilinear(std::span<const double> u, std::span<const double> v) const;
  Matrix dense() const;
};

/// Flux-form stiffness: every face contributes coefficient `face_coeff[k]`
/// times (u_r - u_l)(v_r - v_l), every node `node_coeff[i]` u_i v_i.
CyclicTridiagonal flux_stiffness(const BaseMesh& mesh, std::span<const double> face_coeff,
                                 std::span<const double> node_coeff);

/// The pencil (K, W) for L^f_mu in divergence form:
///   (f^m phi')' - mu f^(m-2) phi = -lambda f^m phi.
struct WeightedOperator {
  WarpField warp;
  double mu = 0.0;
  CyclicTridiagonal stiffness;
  std::vector<double> weight;  // diagonal of W, f_i^m h
  std::vector<double> face_coeff;  // f_face^m / h, one per mesh face
  std::vector<double> node_coeff;  // mu f^(m-2) h
};

/// Throws NonPositiveWarp if the warp is not strictly positive and
/// InvalidArgument for mu < 0.
WeightedOperator assemble_operator(const WarpField& warp, double mu);

/// Eigenpairs of the pencil, eigenvalues ascending, eigenvectors
/// W-orthonormal (sum phi_a phi_b W_ii = delta_ab).
struct EigenDecomposition {
  double mu = 0.0;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // empty when not requested
  std::vector<double> weight;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  std::span<const double> vector(std::size_t j) const { return eigenvectors.at(j); }
  double inner(std::span<const double> u, std::span<const double> v) const;
};

struct SolveOptions {
  EigenBackend backend = EigenBackend::kAuto;
  std::optional<std::size_t> count;  // keep only the lowest `count` pairs
  bool want_vectors = true;
  /// Relative gap below which eigenvalues are treated as one cluster when
  /// choosing a canonical eigenvector basis.
  double cluster_gap = 1e-9;
};

EigenDecomposition eigensolve(const WeightedOperator& op, const SolveOptions& options = {});

/// Indices [first, last) of the numerical cluster containing eigenvalue j.
std::pair<std::size_t, std::size_t> cluster_around(std::span<const double> eigenvalues,
                                                   std::size_t j, double rel_gap);

struct FamilyBranch {
  std::size_t fiber_index = 0;
  double mu = 0.0;
  EigenDecomposition decomposition;  // eigenvalues <= lambda_max only
};

/// A fiber level left out because mu / max(f)^2 already exceeds lambda_max.
struct SkippedLevel {
  std::size_t fiber_index = 0;
  double mu = 0.0;
  double lower_bound = 0.0;
};

struct FamilySpectrum {
  WarpField warp;
  double lambda_max = 0.0;
  std::vector<FamilyBranch> branches;
  std::vector<SkippedLevel> skipped;
};

/// Solves L^f_mu for every fiber eigenvalue mu that can contribute below
/// lambda_max.
FamilySpectrum spectrum_of_family(const WarpField& warp, const FiberSpectrum& fiber,
                                  double lambda_max, const SolveOptions& options = {});

}  // namespace warpspec
