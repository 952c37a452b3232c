// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "warpspec/error.hpp"

namespace warpspec {

FiberSpectrum::FiberSpectrum(std::vector<FiberLevel> levels, int fiber_dim,
                             std::string description)
    : levels_(std::move(levels)), fiber_dim_(fiber_dim), description_(std::move(description)) {
  if (levels_.empty()) throw Error(ErrorCode::kInvalidArgument, "fiber spectrum is empty");
  if (fiber_dim_ < 1) throw Error(ErrorCode::kInvalidArgument, "fiber dimension must be >= 1");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const FiberLevel& level = levels_[i];
    if (!std::isfinite(level.mu))
      throw Error(ErrorCode::kNonFiniteInput, "fiber eigenvalue is not finite");
    if (level.mu < 0.0)
      throw Error(ErrorCode::kNegativeEigenvalue, "fiber eigenvalues must be >= 0");
    if (level.mult < 1)
      throw Error(ErrorCode::kZeroMultiplicity, "fiber multiplicities must be >= 1");
    if (i > 0 && !(levels_[i - 1].mu < level.mu))
      throw Error(ErrorCode::kInvalidArgument, "fiber eigenvalues must be strictly increasing");
    if (level.label && (level.label->real_dim < 1 || level.mult % level.label->real_dim != 0)) {
      throw Error(ErrorCode::kLabelMismatch,
                  "label " + level.label->tag + " declares dimension " +
                      std::to_string(level.label->real_dim) + ", which does not divide " +
                      "multiplicity " + std::to_string(level.mult));
    }
  }
}

bool FiberSpectrum::labelled() const noexcept {
  return std::all_of(levels_.begin(), levels_.end(),
                     [](const FiberLevel& l) { return l.label.has_value(); });
}

int FiberSpectrum::total_multiplicity() const noexcept {
  int total = 0;
  for (const auto& l : levels_) total += l.mult;
  return total;
}

namespace {

IrrepLabel rotation_label(int k, int dim) { return {"rotation_k=" + std::to_string(k), dim}; }

}  // namespace

FiberSpectrum circle_fiber(double circumference, double mu_max) {
  if (!(circumference > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "circle circumference must be positive");
  if (!(mu_max >= 0.0)) throw Error(ErrorCode::kInvalidCutoff, "mu_max must be >= 0");
  std::vector<FiberLevel> levels;
  for (int k = 0;; ++k) {
    const double freq = 2.0 * std::numbers::pi * k / circumference;
    const double mu = freq * freq;
    if (mu > mu_max) break;
    const int mult = k == 0 ? 1 : 2;
    levels.push_back({mu, mult, rotation_label(k, mult)});
  }
  return FiberSpectrum(std::move(levels), 1,
                       "circle(circumference=" + std::to_string(circumference) + ")");
}

FiberSpectrum sphere_fiber(int l_max) {
  if (l_max < 0) throw Error(ErrorCode::kInvalidCutoff, "l_max must be >= 0");
  std::vector<FiberLevel> levels;
  for (int l = 0; l <= l_max; ++l) {
    const int dim = 2 * l + 1;
    levels.push_back({static_cast<double>(l) * (l + 1), dim,
                      IrrepLabel{"so3_irrep_dim_" + std::to_string(dim), dim}});
  }
  return FiberSpectrum(std::move(levels), 2, "round unit sphere S^2");
}

FiberSpectrum discrete_circle_fiber(int n_f, double circumference) {
  if (n_f < 4) throw Error(ErrorCode::kTooCoarse, "discrete fiber needs n_F >= 4");
  if (!(circumference > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "circle circumference must be positive");
  const double h = circumference / n_f;
  std::vector<FiberLevel> levels;
  for (int k = 0; k <= n_f / 2; ++k) {
    const double mu = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * k / n_f)) / (h * h);
    const int mult = (k == 0 || 2 * k == n_f) ? 1 : 2;
    levels.push_back({mu, mult, rotation_label(k, mult)});
  }
  return FiberSpectrum(std::move(levels), 1,
                       "discrete circle(n=" + std::to_string(n_f) +
                           ", circumference=" + std::to_string(circumference) + ")");
}

FiberSpectrum custom_fiber(std::vector<FiberLevel> entries, int fiber_dim) {
  if (entries.empty()) throw Error(ErrorCode::kInvalidArgument, "custom fiber has no entries");
  for (const auto& e : entries) {
    if (e.mu < 0.0) throw Error(ErrorCode::kNegativeEigenvalue, "fiber eigenvalues must be >= 0");
    if (e.mult < 1) throw Error(ErrorCode::kZeroMultiplicity, "fiber multiplicities must be >= 1");
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const FiberLevel& a, const FiberLevel& b) { return a.mu < b.mu; });
  std::vector<FiberLevel> merged;
  for (auto& e : entries) {
    if (!merged.empty() && merged.back().mu == e.mu) {
      // Two copies of a level no longer form a single irreducible piece.
      merged.back().mult += e.mult;
      merged.back().label.reset();
    } else {
      merged.push_back(std::move(e));
    }
  }
  return FiberSpectrum(std::move(merged), fiber_dim, "custom");
}

}  // namespace warpspec
