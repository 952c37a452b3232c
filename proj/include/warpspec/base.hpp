// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace warpspec {

enum class BaseKind { kCircle, kInterval };
enum class BoundaryCondition { kPeriodic, kDirichlet, kNeumann };

/// A face sits between two grid nodes and carries one flux. On interval
/// bases the two boundary faces have a missing neighbour (`kNoNode`).
struct Face {
  static constexpr std::ptrdiff_t kNoNode = -1;
  std::ptrdiff_t left = kNoNode;
  std::ptrdiff_t right = kNoNode;
  double x = 0.0;
};

/// Uniform grid on a compact 1-D base: a circle (periodic) or an interval
/// with Dirichlet (interior nodes) or Neumann (cell centres) conditions.
class BaseMesh {
 public:
  BaseKind kind() const noexcept { return kind_; }
  BoundaryCondition bc() const noexcept { return bc_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const Face> faces() const noexcept { return faces_; }
  bool periodic() const noexcept { return bc_ == BoundaryCondition::kPeriodic; }

  /// u_right - u_left across `face`, with the boundary closure applied:
  /// zero ghost value for Dirichlet, zero flux for Neumann.
  double face_difference(std::span<const double> u, const Face& face) const;

  friend bool operator==(const BaseMesh& a, const BaseMesh& b) {
    return a.kind_ == b.kind_ && a.bc_ == b.bc_ && a.length_ == b.length_ &&
           a.nodes_.size() == b.nodes_.size();
  }

 private:
  friend BaseMesh build_base_mesh(BaseKind, double, int, BoundaryCondition);

  BaseKind kind_ = BaseKind::kCircle;
  BoundaryCondition bc_ = BoundaryCondition::kPeriodic;
  double length_ = 0.0;
  double h_ = 0.0;
  std::vector<double> nodes_;
  std::vector<Face> faces_;
};

/// Throws TooCoarse for n < 4, InvalidArgument for a nonpositive length or
/// an incompatible kind/bc pair.
BaseMesh build_base_mesh(BaseKind kind, double length, int n, BoundaryCondition bc);

/// f(x) = a0 + sum_k a_k cos(2 pi k x / L) + b_k sin(2 pi k x / L), with k
/// starting at 1; or raw node samples when `raw` is set.
struct WarpingSpec {
  double a0 = 0.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
  std::optional<std::vector<double>> raw;
  bool require_positive = true;

  double evaluate(double x, double length) const;
};

/// A function sampled at nodes and at faces of a mesh.
struct SampledFunction {
  std::vector<double> nodes;
  std::vector<double> faces;
};

SampledFunction sample_function(const WarpingSpec& spec, const BaseMesh& mesh);

/// Warping function on the base together with the fiber dimension m. The
/// operator and the derivative formulas read powers of these samples.
struct WarpField {
  BaseMesh mesh;
  SampledFunction values;
  int m_fiber = 1;

  std::span<const double> node_values() const noexcept { return values.nodes; }
  std::span<const double> face_values() const noexcept { return values.faces; }
  double min_value() const;
  double max_value() const;
  bool strictly_positive() const;
};

/// Throws NonPositiveWarp when `require_positive` and any node or face value
/// is <= 0, NonFiniteInput for NaN/inf samples.
WarpField sample_warping(const WarpingSpec& spec, const BaseMesh& mesh, int m_fiber,
                         bool require_positive);
inline WarpField sample_warping(const WarpingSpec& spec, const BaseMesh& mesh, int m_fiber) {
  return sample_warping(spec, mesh, m_fiber, spec.require_positive);
}

/// Discrete L^2(B, f^m dvol) inner product: sum u_i v_i f_i^e h, with e = m
/// unless `weight_exponent` overrides it.
double weighted_inner(std::span<const double> u, std::span<const double> v,
                      const WarpField& warp, std::optional<int> weight_exponent = std::nullopt);

/// sum over faces of f_face^e ((u_r - u_l)/h)^2 h.
double dirichlet_energy(std::span<const double> u, const WarpField& warp, int weight_exponent);

}  // namespace warpspec
