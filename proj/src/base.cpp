// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/base.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "warpspec/error.hpp"

namespace warpspec {

BaseMesh build_base_mesh(BaseKind kind, double length, int n, BoundaryCondition bc) {
  if (n < 4)
    throw Error(ErrorCode::kTooCoarse, "base mesh needs n >= 4, got " + std::to_string(n));
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(ErrorCode::kInvalidArgument, "base length must be positive and finite");
  if ((kind == BaseKind::kCircle) != (bc == BoundaryCondition::kPeriodic))
    throw Error(ErrorCode::kInvalidArgument,
                "circle bases are periodic and interval bases are dirichlet or neumann");

  BaseMesh mesh;
  mesh.kind_ = kind;
  mesh.bc_ = bc;
  mesh.length_ = length;
  const auto count = static_cast<std::size_t>(n);
  mesh.nodes_.resize(count);

  switch (bc) {
    case BoundaryCondition::kPeriodic:
      mesh.h_ = length / n;
      for (std::size_t i = 0; i < count; ++i) mesh.nodes_[i] = static_cast<double>(i) * mesh.h_;
      for (std::size_t i = 0; i < count; ++i) {
        mesh.faces_.push_back({static_cast<std::ptrdiff_t>(i),
                               static_cast<std::ptrdiff_t>((i + 1) % count),
                               (static_cast<double>(i) + 0.5) * mesh.h_});
      }
      break;
    case BoundaryCondition::kDirichlet:
      mesh.h_ = length / (n + 1);
      for (std::size_t i = 0; i < count; ++i)
        mesh.nodes_[i] = static_cast<double>(i + 1) * mesh.h_;
      for (std::size_t i = 0; i <= count; ++i) {
        const std::ptrdiff_t left = i == 0 ? Face::kNoNode : static_cast<std::ptrdiff_t>(i) - 1;
        const std::ptrdiff_t right = i == count ? Face::kNoNode : static_cast<std::ptrdiff_t>(i);
        mesh.faces_.push_back({left, right, (static_cast<double>(i) + 0.5) * mesh.h_});
      }
      break;
    case BoundaryCondition::kNeumann:
      mesh.h_ = length / n;
      for (std::size_t i = 0; i < count; ++i)
        mesh.nodes_[i] = (static_cast<double>(i) + 0.5) * mesh.h_;
      for (std::size_t i = 0; i <= count; ++i) {
        const std::ptrdiff_t left = i == 0 ? Face::kNoNode : static_cast<std::ptrdiff_t>(i) - 1;
        const std::ptrdiff_t right = i == count ? Face::kNoNode : static_cast<std::ptrdiff_t>(i);
        mesh.faces_.push_back({left, right, static_cast<double>(i) * mesh.h_});
      }
      break;
  }
  return mesh;
}

double BaseMesh::face_difference(std::span<const double> u, const Face& face) const {
  const bool has_left = face.left != Face::kNoNode;
  const bool has_right = face.right != Face::kNoNode;
  if (has_left && has_right)
    return u[static_cast<std::size_t>(face.right)] - u[static_cast<std::size_t>(face.left)];
  if (bc_ == BoundaryCondition::kNeumann) return 0.0;
  return has_right ? u[static_cast<std::size_t>(face.right)]
                   : -u[static_cast<std::size_t>(face.left)];
}

double WarpingSpec::evaluate(double x, double length) const {
  const double w = 2.0 * std::numbers::pi * x / length;
  double f = a0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    f += cos_coeffs[k] * std::cos(static_cast<double>(k + 1) * w);
  for (std::size_t k = 0; k < sin_coeffs.size(); ++k)
    f += sin_coeffs[k] * std::sin(static_cast<double>(k + 1) * w);
  return f;
}

SampledFunction sample_function(const WarpingSpec& spec, const BaseMesh& mesh) {
  SampledFunction out;
  const auto nodes = mesh.nodes();
  const auto faces = mesh.faces();
  if (spec.raw) {
    const auto& raw = *spec.raw;
    if (raw.size() != mesh.size()) {
      throw Error(ErrorCode::kLengthMismatch, "raw warp has " + std::to_string(raw.size()) +
                                                  " samples, mesh has " +
                                                  std::to_string(mesh.size()));
    }
    out.nodes = raw;
    out.faces.reserve(faces.size());
    for (const Face& face : faces) {
      if (face.left == Face::kNoNode) {
        out.faces.push_back(raw[static_cast<std::size_t>(face.right)]);
      } else if (face.right == Face::kNoNode) {
        out.faces.push_back(raw[static_cast<std::size_t>(face.left)]);
      } else {
        out.faces.push_back(0.5 * (raw[static_cast<std::size_t>(face.left)] +
                                   raw[static_cast<std::size_t>(face.right)]));
      }
    }
  } else {
    out.nodes.reserve(nodes.size());
    for (double x : nodes) out.nodes.push_back(spec.evaluate(x, mesh.length()));
    out.faces.reserve(faces.size());
    for (const Face& face : faces) out.faces.push_back(spec.evaluate(face.x, mesh.length()));
  }

  const auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(out.nodes.begin(), out.nodes.end(), finite) ||
      !std::all_of(out.faces.begin(), out.faces.end(), finite)) {
    throw Error(ErrorCode::kNonFiniteInput, "sampled function has non-finite values");
  }
  return out;
}

double WarpField::min_value() const {
  double lo = *std::min_element(values.nodes.begin(), values.nodes.end());
  for (double v : values.faces) lo = std::min(lo, v);
  return lo;
}

double WarpField::max_value() const {
  double hi = *std::max_element(values.nodes.begin(), values.nodes.end());
  for (double v : values.faces) hi = std::max(hi, v);
  return hi;
}

bool WarpField::strictly_positive() const { return min_value() > 0.0; }

WarpField sample_warping(const WarpingSpec& spec, const BaseMesh& mesh, int m_fiber,
                         bool require_positive) {
  if (m_fiber < 1)
    throw Error(ErrorCode::kInvalidArgument, "fiber dimension must be >= 1");
  WarpField warp{mesh, sample_function(spec, mesh), m_fiber};
  if (require_positive && !warp.strictly_positive()) {
    throw Error(ErrorCode::kNonPositiveWarp,
                "warping function is not positive on the mesh (min " +
                    std::to_string(warp.min_value()) + ")");
  }
  return warp;
}

namespace {

void require_node_array(std::span<const double> u, const WarpField& warp) {
  if (u.size() != warp.mesh.size()) {
    throw Error(ErrorCode::kLengthMismatch, "node array has " + std::to_string(u.size()) +
                                                " entries, mesh has " +
                                                std::to_string(warp.mesh.size()));
  }
  for (double x : u)
    if (!std::isfinite(x)) throw Error(ErrorCode::kNonFiniteInput, "node array is not finite");
}

}  // namespace

double weighted_inner(std::span<const double> u, std::span<const double> v, const WarpField& warp,
                      std::optional<int> weight_exponent) {
  require_node_array(u, warp);
  require_node_array(v, warp);
  const int e = weight_exponent.value_or(warp.m_fiber);
  const auto f = warp.node_values();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i] * std::pow(f[i], e);
  return s * warp.mesh.spacing();
}

double dirichlet_energy(std::span<const double> u, const WarpField& warp, int weight_exponent) {
  require_node_array(u, warp);
  const double h = warp.mesh.spacing();
  const auto faces = warp.mesh.faces();
  const auto f = warp.face_values();
  double s = 0.0;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const double d = warp.mesh.face_difference(u, faces[k]) / h;
    s += std::pow(f[k], weight_exponent) * d * d;
  }
  return s * h;
}

}  // namespace warpspec
