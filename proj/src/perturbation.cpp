// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>

#include "warpspec/error.hpp"

namespace warpspec {

PerturbationDirection make_direction(const WarpingSpec& spec, const BaseMesh& mesh) {
  WarpingSpec copy = spec;
  copy.require_positive = false;
  return {copy, sample_function(copy, mesh)};
}

WarpField perturbed_warp(const WarpField& f0, const PerturbationDirection& r, double t) {
  if (r.samples.nodes.size() != f0.values.nodes.size() ||
      r.samples.faces.size() != f0.values.faces.size()) {
    throw Error(ErrorCode::kLengthMismatch, "perturbation direction lives on another mesh");
  }
  WarpField f = f0;
  for (std::size_t i = 0; i < f.values.nodes.size(); ++i)
    f.values.nodes[i] += t * r.samples.nodes[i];
  for (std::size_t k = 0; k < f.values.faces.size(); ++k)
    f.values.faces[k] += t * r.samples.faces[k];
  if (!f.strictly_positive()) {
    throw Error(ErrorCode::kPositivityLost,
                "f0 + t r is not positive at t=" + std::to_string(t) + " (min " +
                    std::to_string(f.min_value()) + ")");
  }
  return f;
}

namespace {

int weight_power(int m, WarpExponent exponent) {
  return exponent == WarpExponent::kCorrected ? m - 1 : m + 1;
}

void check_pair(const WarpField& f0, const PerturbationDirection& r,
                std::span<const double> phi) {
  if (phi.size() != f0.mesh.size() || r.samples.nodes.size() != f0.mesh.size())
    throw Error(ErrorCode::kLengthMismatch, "eigenvector and mesh sizes differ");
}

double weighted_norm_sq(const WarpField& f0, std::span<const double> phi) {
  return weighted_inner(phi, phi, f0);
}

void require_normalized(const WarpField& f0, std::span<const double> phi, double tol) {
  const double n = weighted_norm_sq(f0, phi);
  if (std::abs(n - 1.0) > tol) {
    throw Error(ErrorCode::kNotNormalized,
                "eigenvector has <phi,phi>_W = " + std::to_string(n) + ", expected 1");
  }
}

void require_simple(const EigenDecomposition& dec, std::size_t j, double gap) {
  if (j >= dec.size() || dec.eigenvectors.size() <= j)
    throw Error(ErrorCode::kInvalidArgument, "eigenpair index out of range");
  const auto [first, last] = cluster_around(dec.eigenvalues, j, gap);
  if (last - first > 1) {
    throw Error(ErrorCode::kDegenerateEigenvalue,
                "eigenvalue " + std::to_string(j) + " belongs to a cluster of size " +
                    std::to_string(last - first) + "; use degenerate_derivative_matrix");
  }
}

// Bilinear form behind both the simple slope and the degenerate matrix.
double slope_form(const WarpField& f0, const PerturbationDirection& r, double mu, double lambda,
                  std::span<const double> a, std::span<const double> b, int power) {
  const int m = f0.m_fiber;
  const double h = f0.mesh.spacing();
  const auto f = f0.node_values();
  const auto ff = f0.face_values();
  const auto& rn = r.samples.nodes;
  const auto& rf = r.samples.faces;

  double node_sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double coeff = m * lambda + (2 - m) * mu / (f[i] * f[i]);
    node_sum += coeff * a[i] * b[i] * std::pow(f[i], power) * rn[i];
  }
  double face_sum = 0.0;
  const auto faces = f0.mesh.faces();
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const double da = f0.mesh.face_difference(a, faces[k]) / h;
    const double db = f0.mesh.face_difference(b, faces[k]) / h;
    face_sum += da * db * std::pow(ff[k], power) * rf[k];
  }
  return -(node_sum - m * face_sum) * h;
}

}  // namespace

double derivative_from_eigenpair(const WarpField& f0, const PerturbationDirection& r, double mu,
                                 double lambda, std::span<const double> phi,
                                 const DerivativeOptions& options) {
  check_pair(f0, r, phi);
  require_normalized(f0, phi, options.normalization_tol);
  return slope_form(f0, r, mu, lambda, phi, phi, weight_power(f0.m_fiber, options.exponent));
}

double eigenvalue_derivative(const WarpField& f0, const PerturbationDirection& r,
                             const EigenDecomposition& dec, std::size_t j,
                             const DerivativeOptions& options) {
  require_simple(dec, j, options.cluster_gap);
  return derivative_from_eigenpair(f0, r, dec.mu, dec.eigenvalues[j], dec.vector(j), options);
}

double derivative_via_L_from_eigenpair(const WarpField& f0, const PerturbationDirection& r,
                                       double mu, double lambda, std::span<const double> phi,
                                       const DerivativeOptions& options) {
  check_pair(f0, r, phi);
  require_normalized(f0, phi, options.normalization_tol);
  const int m = f0.m_fiber;
  const int power = weight_power(m, options.exponent);
  const double h = f0.mesh.spacing();
  const auto f = f0.node_values();
  const auto ff = f0.face_values();
  const auto faces = f0.mesh.faces();

  // Pointwise part of m L(phi^2) + (m-4) mu phi^2 / f^2, using L phi = -lambda phi.
  double node_sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double phi2 = phi[i] * phi[i];
    const double potential = mu / (f[i] * f[i]) * phi2;
    const double l_phi = -lambda * phi[i];
    const double l_phi2_pointwise = 2.0 * phi[i] * l_phi + potential;
    node_sum += (m * l_phi2_pointwise + (m - 4) * potential) * std::pow(f[i], power) *
                r.samples.nodes[i];
  }
  // Gradient part 2|grad phi|^2 of L(phi^2), living on faces.
  double face_sum = 0.0;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const double d = f0.mesh.face_difference(phi, faces[k]) / h;
    face_sum += m * 2.0 * d * d * std::pow(ff[k], power) * r.samples.faces[k];
  }
  return 0.5 * (node_sum + face_sum) * h;
}

double eigenvalue_derivative_via_L(const WarpField& f0, const PerturbationDirection& r,
                                   const EigenDecomposition& dec, std::size_t j,
                                   const DerivativeOptions& options) {
  require_simple(dec, j, options.cluster_gap);
  return derivative_via_L_from_eigenpair(f0, r, dec.mu, dec.eigenvalues[j], dec.vector(j),
                                         options);
}

double hellmann_feynman_slope(const WarpField& f0, const PerturbationDirection& r,
                              const EigenDecomposition& dec, std::size_t j,
                              const DerivativeOptions& options) {
  require_simple(dec, j, options.cluster_gap);
  const auto phi = dec.vector(j);
  check_pair(f0, r, phi);
  const int m = f0.m_fiber;
  const double mu = dec.mu;
  const double h = f0.mesh.spacing();
  const auto f = f0.node_values();
  const auto ff = f0.face_values();

  // d/dt of f^m / h on faces, mu f^(m-2) h and f^m h on nodes.
  std::vector<double> dk_face(ff.size());
  for (std::size_t k = 0; k < ff.size(); ++k)
    dk_face[k] = m * std::pow(ff[k], m - 1) * r.samples.faces[k] / h;
  std::vector<double> dk_node(f.size());
  std::vector<double> dw(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    dk_node[i] = mu * (m - 2) * std::pow(f[i], m - 3) * r.samples.nodes[i] * h;
    dw[i] = m * std::pow(f[i], m - 1) * r.samples.nodes[i] * h;
  }
  const CyclicTridiagonal dk = flux_stiffness(f0.mesh, dk_face, dk_node);

  double w_term = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) w_term += dw[i] * phi[i] * phi[i];
  const double norm = dec.inner(phi, phi);
  return (dk.bilinear(phi, phi) - dec.eigenvalues[j] * w_term) / norm;
}

namespace {

// Index of the eigenvector of `dec` with the largest |<reference, phi>_W|,
// and that overlap normalised by the reference's W-norm.
std::pair<std::size_t, double> best_overlap(const EigenDecomposition& dec,
                                            std::span<const double> reference) {
  const double ref_norm = std::sqrt(dec.inner(reference, reference));
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t c = 0; c < dec.size(); ++c) {
    const double o = std::abs(dec.inner(reference, dec.vector(c))) / ref_norm;
    if (o > best_value) {
      best_value = o;
      best = c;
    }
  }
  return {best, best_value};
}

}  // namespace

FdSlope fd_slope(const WarpField& f0, const PerturbationDirection& r, double mu,
                 std::span<const double> reference, const FdOptions& options) {
  if (options.steps.empty())
    throw Error(ErrorCode::kInvalidArgument, "fd_slope needs at least one step");
  for (std::size_t s = 0; s < options.steps.size(); ++s) {
    if (!(options.steps[s] > 0.0) || (s > 0 && !(options.steps[s] < options.steps[s - 1])))
      throw Error(ErrorCode::kInvalidArgument, "fd_slope steps must be positive and descending");
  }

  FdSlope out;
  for (double t : options.steps) {
    double lambdas[2];
    double min_overlap = 1.0;
    for (int side = 0; side < 2; ++side) {
      const double ts = side == 0 ? t : -t;
      const EigenDecomposition dec = eigensolve(assemble_operator(perturbed_warp(f0, r, ts), mu));
      const auto [index, overlap] = best_overlap(dec, reference);
      if (overlap < options.overlap_threshold) {
        throw Error(ErrorCode::kMatchingAmbiguous,
                    "curve matching at t=" + std::to_string(ts) + " has overlap " +
                        std::to_string(overlap));
      }
      min_overlap = std::min(min_overlap, overlap);
      lambdas[side] = dec.eigenvalues[index];
    }
    out.central_by_step.push_back((lambdas[0] - lambdas[1]) / (2.0 * t));
    out.min_overlap_by_step.push_back(min_overlap);
  }

  const auto& d = out.central_by_step;
  const auto& steps = options.steps;
  if (d.size() == 1) {
    out.slope = out.central = d[0];
    out.step = steps[0];
    return out;
  }
  // Central differences carry an even error expansion in t, so eliminate
  // the t^2 term from each consecutive pair.
  std::vector<double> extrapolated;
  for (std::size_t k = 0; k + 1 < d.size(); ++k) {
    const double a2 = steps[k] * steps[k];
    const double b2 = steps[k + 1] * steps[k + 1];
    extrapolated.push_back((a2 * d[k + 1] - b2 * d[k]) / (a2 - b2));
  }
  std::size_t chosen = 0;
  if (extrapolated.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < extrapolated.size(); ++k) {
      const double spread = std::abs(extrapolated[k] - extrapolated[k - 1]);
      if (spread < best) {
        best = spread;
        chosen = k;
      }
    }
  }
  out.slope = extrapolated[chosen];
  out.central = d[chosen + 1];
  out.step = steps[chosen + 1];
  return out;
}

FdSlope fd_slope(const WarpField& f0, const PerturbationDirection& r, double mu, std::size_t j,
                 const FdOptions& options) {
  const EigenDecomposition dec = eigensolve(assemble_operator(f0, mu));
  if (j >= dec.size()) throw Error(ErrorCode::kInvalidArgument, "eigenpair index out of range");
  return fd_slope(f0, r, mu, dec.vector(j), options);
}

SlopeMatrix degenerate_derivative_matrix(const WarpField& f0, const PerturbationDirection& r,
                                         double mu, double lambda,
                                         std::span<const std::vector<double>> basis,
                                         const DerivativeOptions& options) {
  const std::size_t p = basis.size();
  if (p == 0) throw Error(ErrorCode::kInvalidArgument, "empty eigenspace basis");
  for (const auto& v : basis) check_pair(f0, r, v);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      const double g = weighted_inner(basis[a], basis[b], f0);
      if (std::abs(g - (a == b ? 1.0 : 0.0)) > options.normalization_tol) {
        throw Error(ErrorCode::kNotOrthonormal,
                    "basis Gram entry (" + std::to_string(a) + "," + std::to_string(b) +
                        ") = " + std::to_string(g));
      }
    }
  }

  const int power = weight_power(f0.m_fiber, options.exponent);
  SlopeMatrix out;
  out.q = Matrix(p, p);
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b) {
      const double v = slope_form(f0, r, mu, lambda, basis[a], basis[b], power);
      out.q(a, b) = out.q(b, a) = v;
    }
  }
  const SymmetricEigenResult eig = symmetric_eigen(out.q, true, EigenBackend::kJacobi);
  out.slopes = eig.values;
  for (std::size_t k = 0; k < p; ++k) {
    std::vector<double> v(f0.mesh.size(), 0.0);
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += eig.vectors(k, a) * basis[a][i];
    out.kato_vectors.push_back(std::move(v));
  }
  return out;
}

SlopeMatrix degenerate_derivative_matrix(const WarpField& f0, const PerturbationDirection& r,
                                         const EigenDecomposition& dec, std::size_t first,
                                         std::size_t last, const DerivativeOptions& options) {
  if (!(first < last) || last > dec.size() || dec.eigenvectors.size() < last)
    throw Error(ErrorCode::kInvalidArgument, "cluster range out of bounds");
  double lambda = 0.0;
  for (std::size_t j = first; j < last; ++j) lambda += dec.eigenvalues[j];
  lambda /= static_cast<double>(last - first);
  std::span<const std::vector<double>> basis(dec.eigenvectors.data() + first, last - first);
  return degenerate_derivative_matrix(f0, r, dec.mu, lambda, basis, options);
}

std::vector<WarpingSpec> random_fourier_directions(std::uint64_t seed, std::size_t count,
                                                   int degree) {
  if (degree < 1) throw Error(ErrorCode::kInvalidArgument, "degree must be >= 1");
  std::mt19937_64 engine(seed);
  // 53 random mantissa bits; std::uniform_real_distribution is not
  // reproducible across standard libraries.
  auto uniform = [&engine] {
    return 2.0 * (static_cast<double>(engine() >> 11) * 0x1.0p-53) - 1.0;
  };
  std::vector<WarpingSpec> out;
  for (std::size_t c = 0; c < count; ++c) {
    WarpingSpec spec;
    spec.require_positive = false;
    for (int k = 0; k < degree; ++k) {
      spec.cos_coeffs.push_back(uniform());
      spec.sin_coeffs.push_back(uniform());
    }
    out.push_back(std::move(spec));
  }
  return out;
}

namespace {

double min_adjacent_gap(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < values.size(); ++i) gap = std::min(gap, values[i] - values[i - 1]);
  return gap;
}

}  // namespace

SplitReport split_search(const WarpField& f0, const FiberSpectrum& fiber,
                         const AssembledLevel& target, std::span<const WarpingSpec> candidates,
                         const SplitOptions& options) {
  std::vector<ClusterMember> members;
  for (const auto& src : target.sources)
    for (std::size_t k = 0; k < src.base_indices.size(); ++k)
      members.push_back({src.fiber_index, src.mu, src.base_indices[k], src.lambdas[k], 0.0});
  if (members.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "split_search needs a level with at least two base eigenvalues");
  }
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "no candidate directions");

  SplitReport report;
  report.lambda0 = target.lambda;
  report.t = options.t;
  {
    std::vector<double> before;
    for (const auto& m : members) before.push_back(m.lambda_before);
    report.gap_before = min_adjacent_gap(before);
  }
  const double threshold = options.gap_tol * (1.0 + std::abs(target.lambda));

  std::set<std::size_t> fiber_indices;
  for (const auto& m : members) fiber_indices.insert(m.fiber_index);

  std::optional<std::size_t> first_split;
  for (const WarpingSpec& spec : candidates) {
    const PerturbationDirection r = make_direction(spec, f0.mesh);
    const WarpField f = perturbed_warp(f0, r, options.t);

    std::vector<BranchValues> branches;
    for (std::size_t index : fiber_indices) {
      SolveOptions solve;
      solve.want_vectors = false;
      EigenDecomposition dec = eigensolve(assemble_operator(f, fiber[index].mu), solve);
      branches.push_back({index, std::move(dec.eigenvalues)});
    }
    CandidateOutcome outcome;
    outcome.spec = spec;
    outcome.members = members;
    std::vector<double> after;
    for (auto& m : outcome.members) {
      const auto it = std::find_if(branches.begin(), branches.end(), [&](const BranchValues& b) {
        return b.fiber_index == m.fiber_index;
      });
      m.lambda_after = it->eigenvalues.at(m.base_index);
      after.push_back(m.lambda_after);
    }
    outcome.min_gap = min_adjacent_gap(after);
    outcome.diameter = *std::max_element(after.begin(), after.end()) -
                       *std::min_element(after.begin(), after.end());
    // Discretisation can leave a small gap between members of different
    // families, so a split has to open the gap beyond its starting value.
    outcome.split = outcome.min_gap - report.gap_before > threshold;

    const auto reclustered = assemble_spectrum(branches, fiber,
                                               std::numeric_limits<double>::infinity(),
                                               options.cluster_tol);
    for (const auto& level : reclustered.levels) {
      const bool holds_member = std::any_of(
          level.sources.begin(), level.sources.end(), [&](const LevelSource& src) {
            return std::any_of(outcome.members.begin(), outcome.members.end(),
                               [&](const ClusterMember& m) {
                                 return m.fiber_index == src.fiber_index &&
                                        std::find(src.base_indices.begin(),
                                                  src.base_indices.end(),
                                                  m.base_index) != src.base_indices.end();
                               });
          });
      if (holds_member) outcome.levels.push_back(level);
    }

    if (outcome.split && !first_split) first_split = report.candidates.size();
    report.candidates.push_back(std::move(outcome));
  }

  if (first_split) {
    report.chosen = *first_split;
    report.split = true;
  } else {
    std::size_t best = 0;
    for (std::size_t c = 1; c < report.candidates.size(); ++c)
      if (report.candidates[c].min_gap > report.candidates[best].min_gap) best = c;
    report.chosen = best;
  }
  return report;
}

namespace {

struct FamilyState {
  double t = 0.0;
  EigenDecomposition dec;
  std::vector<std::size_t> tracked;  // current eigen index of each tracked branch
};

EigenDecomposition solve_at(const WarpField& f0, const PerturbationDirection& r, double mu,
                            double t) {
  return eigensolve(assemble_operator(perturbed_warp(f0, r, t), mu));
}

// Matches tracked branches of `prev` to eigenpairs of `next`. A branch in a
// numerical cluster scores each candidate by its projection onto the whole
// cluster, since the basis inside a cluster carries no information.
std::pair<std::vector<std::size_t>, double> match_branches(const FamilyState& prev,
                                                           const EigenDecomposition& next,
                                                           double cluster_gap) {
  struct Entry {
    long long quantized;
    std::size_t branch;
    std::size_t candidate;
    double score;
  };
  std::vector<Entry> entries;
  for (std::size_t b = 0; b < prev.tracked.size(); ++b) {
    const auto [first, last] = cluster_around(prev.dec.eigenvalues, prev.tracked[b], cluster_gap);
    for (std::size_t c = 0; c < next.size(); ++c) {
      double s = 0.0;
      for (std::size_t q = first; q < last; ++q) {
        const double o = next.inner(prev.dec.vector(q), next.vector(c));
        s += o * o;
      }
      const double score = std::sqrt(s);
      entries.push_back({std::llround(score * 1e6), b, c, score});
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tuple(-a.quantized, a.branch, a.candidate) <
           std::tuple(-b.quantized, b.branch, b.candidate);
  });
  std::vector<std::size_t> assigned(prev.tracked.size(), next.size());
  std::vector<bool> taken(next.size(), false);
  double min_score = 1.0;
  std::size_t remaining = prev.tracked.size();
  for (const Entry& e : entries) {
    if (remaining == 0) break;
    if (assigned[e.branch] != next.size() || taken[e.candidate]) continue;
    assigned[e.branch] = e.candidate;
    taken[e.candidate] = true;
    min_score = std::min(min_score, e.score);
    --remaining;
  }
  return {assigned, min_score};
}

FamilyState advance(const WarpField& f0, const PerturbationDirection& r, double mu,
                    const FamilyState& prev, double t, int depth, const TraceOptions& options,
                    int& bisections) {
  EigenDecomposition next = solve_at(f0, r, mu, t);
  auto [assigned, score] = match_branches(prev, next, options.cluster_gap);
  if (score >= options.overlap_threshold) return {t, std::move(next), std::move(assigned)};
  if (depth >= options.max_bisections) {
    throw Error(ErrorCode::kMatchingAmbiguous,
                "branch matching for mu=" + std::to_string(mu) + " failed between t=" +
                    std::to_string(prev.t) + " and t=" + std::to_string(t) + " (overlap " +
                    std::to_string(score) + ")");
  }
  ++bisections;
  const FamilyState mid =
      advance(f0, r, mu, prev, 0.5 * (prev.t + t), depth + 1, options, bisections);
  return advance(f0, r, mu, mid, t, depth + 1, options, bisections);
}

}  // namespace

EigenCurves trace_curves(const WarpField& f0, const PerturbationDirection& r,
                         std::span<const double> t_grid, const FiberSpectrum& fiber,
                         std::size_t k, const TraceOptions& options) {
  if (t_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty t grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw Error(ErrorCode::kInvalidArgument, "t grid must be strictly ascending");
  for (double t : t_grid) (void)perturbed_warp(f0, r, t);  // positivity on the whole grid

  EigenCurves curves;
  curves.t_grid.assign(t_grid.begin(), t_grid.end());

  // Lowest k (mu, j) pairs at the first grid point.
  std::vector<FamilyState> states;
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t i = 0; i < fiber.size(); ++i) {
    states.push_back({t_grid[0], solve_at(f0, r, fiber[i].mu, t_grid[0]), {}});
    for (std::size_t j = 0; j < states.back().dec.size(); ++j)
      candidates.emplace_back(states.back().dec.eigenvalues[j], i, j);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.resize(std::min(k, candidates.size()));
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
  });

  // branch_of[i][b]: curve id of tracked branch b in family i.
  std::vector<std::vector<std::size_t>> branch_of(fiber.size());
  for (const auto& [lambda, i, j] : candidates) {
    CurveBranch branch;
    branch.id = curves.branches.size();
    branch.fiber_index = i;
    branch.mu = fiber[i].mu;
    branch.start_index = j;
    branch.values.push_back(lambda);
    branch_of[i].push_back(branch.id);
    states[i].tracked.push_back(j);
    curves.branches.push_back(std::move(branch));
  }

  for (std::size_t i = 0; i < fiber.size(); ++i) {
    if (branch_of[i].empty()) continue;
    FamilyState state = std::move(states[i]);
    for (std::size_t g = 1; g < t_grid.size(); ++g) {
      state = advance(f0, r, fiber[i].mu, state, t_grid[g], 0, options, curves.bisections);
      for (std::size_t b = 0; b < branch_of[i].size(); ++b)
        curves.branches[branch_of[i][b]].values.push_back(
            state.dec.eigenvalues[state.tracked[b]]);
    }
  }

  for (std::size_t a = 0; a < curves.branches.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.branches.size(); ++b) {
      const auto& ba = curves.branches[a];
      const auto& bb = curves.branches[b];
      if (ba.fiber_index == bb.fiber_index) continue;
      for (std::size_t g = 0; g + 1 < t_grid.size(); ++g) {
        const double d0 = ba.values[g] - bb.values[g];
        const double d1 = ba.values[g + 1] - bb.values[g + 1];
        if (d0 * d1 < 0.0 || (d1 == 0.0 && d0 != 0.0))
          curves.crossings.push_back({ba.id, bb.id, t_grid[g], t_grid[g + 1]});
      }
    }
  }
  return curves;
}

}  // namespace warpspec
