// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace warpspec {

/// Opaque tag for an irreducible real representation and its real dimension.
struct IrrepLabel {
  std::string tag;
  int real_dim = 1;

  friend bool operator==(const IrrepLabel&, const IrrepLabel&) = default;
};

struct FiberLevel {
  double mu = 0.0;
  int mult = 1;
  std::optional<IrrepLabel> label;
};

/// Eigenvalues of the fiber Laplacian (geometer's sign, mu >= 0) with
/// multiplicities, strictly increasing in mu.
class FiberSpectrum {
 public:
  /// Validates sortedness, mu >= 0, mult >= 1 and that a label dimension
  /// divides the multiplicity (mult / real_dim copies of the irrep).
  FiberSpectrum(std::vector<FiberLevel> levels, int fiber_dim, std::string description);

  const std::vector<FiberLevel>& levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  const FiberLevel& operator[](std::size_t i) const { return levels_[i]; }
  int fiber_dim() const noexcept { return fiber_dim_; }
  const std::string& description() const noexcept { return description_; }
  bool labelled() const noexcept;
  int total_multiplicity() const noexcept;

 private:
  std::vector<FiberLevel> levels_;
  int fiber_dim_;
  std::string description_;
};

/// Round circle of the given circumference: mu_k = (2 pi k / c)^2 up to mu_max.
FiberSpectrum circle_fiber(double circumference, double mu_max);

/// Unit round S^2: mu_l = l(l+1), multiplicity 2l+1, one SO(3) irrep per level.
FiberSpectrum sphere_fiber(int l_max);

/// Spectrum of the periodic 3-point Laplacian on n_f points of a circle.
FiberSpectrum discrete_circle_fiber(int n_f, double circumference);

/// User-supplied spectrum; entries are sorted and equal mu merged.
FiberSpectrum custom_fiber(std::vector<FiberLevel> entries, int fiber_dim);

}  // namespace warpspec
