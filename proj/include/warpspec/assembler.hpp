// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpspec/fiber.hpp"
#include "warpspec/sturm.hpp"

namespace warpspec {

/// Contribution of one fiber eigenvalue mu to a level: the base eigenvalues
/// of L^f_mu that fell into the cluster.
struct LevelSource {
  std::size_t fiber_index = 0;
  double mu = 0.0;
  std::vector<std::size_t> base_indices;
  std::vector<double> lambdas;  // raw values, same order as base_indices
  int m_fiber = 1;              // multiplicity of mu on the fiber
  std::optional<IrrepLabel> label;

  int m_base() const noexcept { return static_cast<int>(base_indices.size()); }
};

struct AssembledLevel {
  double lambda = 0.0;  // mean of the clustered raw values
  std::vector<LevelSource> sources;
  int total_mult = 0;   // sum of m_base * m_fiber
  bool warped_simple = false;
  std::optional<bool> g_simple;
};

struct SpectrumClassification {
  std::vector<AssembledLevel> levels;
  double cluster_tol = 0.0;
  std::vector<SkippedLevel> skipped;
  std::string g_simple_note;  // why G-simplicity was not evaluated, if so
  std::string multiplicity_convention = "real dimensions";
};

/// Eigenvalues of L^f_mu for the fiber level `fiber_index`, ascending.
struct BranchValues {
  std::size_t fiber_index = 0;
  std::vector<double> eigenvalues;
};

/// Merges (mu, j, lambda) triples with lambda <= lambda_max into levels by
/// single-linkage clustering: neighbours a <= b join when
/// b - a <= cluster_tol * (1 + |b|). Multiplicities follow
/// m(lambda) = sum_mu m_L(lambda) m_F(mu).
SpectrumClassification assemble_spectrum(std::span<const BranchValues> branches,
                                         const FiberSpectrum& fiber, double lambda_max,
                                         double cluster_tol);

/// Same, from solved families. Throws InconsistentFamily if a branch does
/// not belong to `fiber`.
SpectrumClassification assemble_spectrum(const FamilySpectrum& family, const FiberSpectrum& fiber,
                                         double lambda_max, double cluster_tol);

inline constexpr double kDefaultClusterTol = 1e-7;

/// One source with m_L = 1.
std::vector<bool> classify_warped_simple(std::span<const AssembledLevel> levels);

/// Warped-simple and the single source is labelled with dim == m_F.
/// Unlabelled sources give std::nullopt.
std::vector<std::optional<bool>> classify_g_simple(std::span<const AssembledLevel> levels);

}  // namespace warpspec
