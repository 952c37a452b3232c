// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "warpspec/assembler.hpp"
#include "warpspec/base.hpp"
#include "warpspec/fiber.hpp"
#include "warpspec/linalg.hpp"
#include "warpspec/sturm.hpp"

namespace warpspec {

/// Direction r of a warping perturbation f(t) = f0 + t r. No sign constraint.
struct PerturbationDirection {
  WarpingSpec spec;
  SampledFunction samples;
};

PerturbationDirection make_direction(const WarpingSpec& spec, const BaseMesh& mesh);

/// f0 + t r. Throws PositivityLost if the result is not strictly positive.
WarpField perturbed_warp(const WarpField& f0, const PerturbationDirection& r, double t);

/// Power of f0 weighting the first-variation integrand. The printed form of
/// the warped first-variation formula carries f0^(m+1); re-deriving it from
/// the Rayleigh quotient of the pencil gives f0^(m-1). kPrinted is kept only
/// to demonstrate the discrepancy.
enum class WarpExponent { kCorrected, kPrinted };

struct DerivativeOptions {
  WarpExponent exponent = WarpExponent::kCorrected;
  double cluster_gap = 1e-9;        // relative gap that counts as degenerate
  double normalization_tol = 1e-8;  // |<phi,phi>_W - 1|
};

// First variation of a simple eigenvalue of L^{f0}_mu along r:
//   lambda' = -sum_B [(m lambda + (2-m) mu / f0^2) phi^2 - m |grad phi|^2] f0^(m-1) r
// with phi^2 terms on nodes and gradients as face differences.

/// From an explicit eigenpair; checks W-normalisation only.
double derivative_from_eigenpair(const WarpField& f0, const PerturbationDirection& r, double mu,
                                 double lambda, std::span<const double> phi,
                                 const DerivativeOptions& options = {});

/// Eigenpair j of `dec` (solved at f0). Throws DegenerateEigenvalue if j
/// sits in a cluster.
double eigenvalue_derivative(const WarpField& f0, const PerturbationDirection& r,
                             const EigenDecomposition& dec, std::size_t j,
                             const DerivativeOptions& options = {});

/// The same slope written through L(phi^2): 1/2 sum [m L(phi^2) + (m-4) mu
/// phi^2 / f0^2] f0^(m-1) r, with L(phi^2) = 2 phi L phi + 2|grad phi|^2 +
/// mu phi^2 / f0^2 and L phi = -lambda phi.
double eigenvalue_derivative_via_L(const WarpField& f0, const PerturbationDirection& r,
                                   const EigenDecomposition& dec, std::size_t j,
                                   const DerivativeOptions& options = {});
double derivative_via_L_from_eigenpair(const WarpField& f0, const PerturbationDirection& r,
                                       double mu, double lambda, std::span<const double> phi,
                                       const DerivativeOptions& options = {});

/// Exact slope of the discrete pencil: phi^T (K' - lambda W') phi / phi^T W phi,
/// with K', W' the t-derivatives of the assembled matrices.
double hellmann_feynman_slope(const WarpField& f0, const PerturbationDirection& r,
                              const EigenDecomposition& dec, std::size_t j,
                              const DerivativeOptions& options = {});

struct FdOptions {
  std::vector<double> steps{0.02, 0.01, 0.005};  // descending
  double overlap_threshold = 0.9;
};

struct FdSlope {
  double slope = 0.0;    // Richardson-extrapolated when two or more steps
  double central = 0.0;  // plain central difference at `step`
  double step = 0.0;
  std::vector<double> central_by_step;
  std::vector<double> min_overlap_by_step;
};

/// Central differences of the eigenvalue curve of L^{f0+tr}_mu whose
/// eigenvector overlaps most with `reference` (W-normalised at f0).
/// Throws PositivityLost or MatchingAmbiguous (overlap below threshold).
FdSlope fd_slope(const WarpField& f0, const PerturbationDirection& r, double mu,
                 std::span<const double> reference, const FdOptions& options = {});
FdSlope fd_slope(const WarpField& f0, const PerturbationDirection& r, double mu, std::size_t j,
                 const FdOptions& options = {});

/// Slopes of the Kato curves through a degenerate eigenvalue.
struct SlopeMatrix {
  Matrix q;                                      // symmetric p x p
  std::vector<double> slopes;                    // eigenvalues of q, ascending
  std::vector<std::vector<double>> kato_vectors;  // t -> 0 limits of the curves
};

/// Q_ab = -sum [(m lambda + (2-m) mu / f0^2) phi_a phi_b - m <grad phi_a, grad phi_b>]
///        f0^(m-1) r over a W-orthonormal basis of one eigenspace.
SlopeMatrix degenerate_derivative_matrix(const WarpField& f0, const PerturbationDirection& r,
                                         double mu, double lambda,
                                         std::span<const std::vector<double>> basis,
                                         const DerivativeOptions& options = {});
SlopeMatrix degenerate_derivative_matrix(const WarpField& f0, const PerturbationDirection& r,
                                         const EigenDecomposition& dec, std::size_t first,
                                         std::size_t last, const DerivativeOptions& options = {});

/// Low-degree Fourier directions with a0 = 0 and coefficients uniform in
/// [-1, 1], drawn from mt19937_64(seed) in a platform-independent way.
std::vector<WarpingSpec> random_fourier_directions(std::uint64_t seed, std::size_t count,
                                                   int degree);

struct SplitOptions {
  double t = 0.1;
  double gap_tol = 1e-6;      // split when min gap - gap before > gap_tol * (1 + |lambda0|)
  double cluster_tol = 1e-6;  // for re-clustering the perturbed values
};

struct ClusterMember {
  std::size_t fiber_index = 0;
  double mu = 0.0;
  std::size_t base_index = 0;
  double lambda_before = 0.0;
  double lambda_after = 0.0;
};

struct CandidateOutcome {
  WarpingSpec spec;
  std::vector<ClusterMember> members;
  double min_gap = 0.0;
  double diameter = 0.0;
  bool split = false;
  std::vector<AssembledLevel> levels;  // re-clustered levels holding the members
};

struct SplitReport {
  double lambda0 = 0.0;
  double t = 0.0;
  double gap_before = 0.0;
  std::optional<std::uint64_t> seed;
  std::vector<CandidateOutcome> candidates;
  std::size_t chosen = 0;
  bool split = false;
};

/// Tries each candidate direction on the (mu, j) members of `target`:
/// re-solves at f0 + t r, measures the smallest pairwise gap and re-clusters.
/// Chooses the first candidate that splits, else the one with the best gap.
/// Throws InvalidArgument if the level has a single base eigenvalue.
SplitReport split_search(const WarpField& f0, const FiberSpectrum& fiber,
                         const AssembledLevel& target, std::span<const WarpingSpec> candidates,
                         const SplitOptions& options = {});

struct CurveBranch {
  std::size_t id = 0;
  std::size_t fiber_index = 0;
  double mu = 0.0;
  std::size_t start_index = 0;  // base index at the first grid point
  std::vector<double> values;   // one per grid point
};

struct Crossing {
  std::size_t branch_a = 0;
  std::size_t branch_b = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct EigenCurves {
  std::vector<double> t_grid;
  std::vector<CurveBranch> branches;
  std::vector<Crossing> crossings;  // sign changes between different mu families
  int bisections = 0;
};

struct TraceOptions {
  double overlap_threshold = 0.9;
  int max_bisections = 6;
  double cluster_gap = 1e-9;
};

/// Follows the k lowest (mu, j) branches of the family at f0 + t r across an
/// ascending t grid, matching eigenvectors between steps.
EigenCurves trace_curves(const WarpField& f0, const PerturbationDirection& r,
                         std::span<const double> t_grid, const FiberSpectrum& fiber,
                         std::size_t k, const TraceOptions& options = {});

}  // namespace warpspec
