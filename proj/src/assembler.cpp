// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "warpspec/error.hpp"

namespace warpspec {

namespace {

struct Triple {
  double lambda;
  std::size_t fiber_index;
  std::size_t base_index;
};

AssembledLevel make_level(std::span<const Triple> members, const FiberSpectrum& fiber) {
  AssembledLevel level;
  std::map<std::size_t, LevelSource> by_fiber;
  double sum = 0.0;
  for (const Triple& t : members) {
    sum += t.lambda;
    auto [it, inserted] = by_fiber.try_emplace(t.fiber_index);
    LevelSource& src = it->second;
    if (inserted) {
      src.fiber_index = t.fiber_index;
      src.mu = fiber[t.fiber_index].mu;
      src.m_fiber = fiber[t.fiber_index].mult;
      src.label = fiber[t.fiber_index].label;
    }
    src.base_indices.push_back(t.base_index);
    src.lambdas.push_back(t.lambda);
  }
  level.lambda = sum / static_cast<double>(members.size());
  for (auto& [index, src] : by_fiber) {
    level.total_mult += src.m_base() * src.m_fiber;
    level.sources.push_back(std::move(src));
  }
  return level;
}

}  // namespace

std::vector<bool> classify_warped_simple(std::span<const AssembledLevel> levels) {
  std::vector<bool> out;
  out.reserve(levels.size());
  for (const auto& level : levels)
    out.push_back(level.sources.size() == 1 && level.sources.front().m_base() == 1);
  return out;
}

std::vector<std::optional<bool>> classify_g_simple(std::span<const AssembledLevel> levels) {
  std::vector<std::optional<bool>> out;
  out.reserve(levels.size());
  const auto warped = classify_warped_simple(levels);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& sources = levels[i].sources;
    const bool labelled = std::all_of(sources.begin(), sources.end(),
                                      [](const LevelSource& s) { return s.label.has_value(); });
    if (!labelled) {
      out.push_back(std::nullopt);
      continue;
    }
    out.push_back(warped[i] && sources.front().label->real_dim == sources.front().m_fiber);
  }
  return out;
}

SpectrumClassification assemble_spectrum(std::span<const BranchValues> branches,
                                         const FiberSpectrum& fiber, double lambda_max,
                                         double cluster_tol) {
  if (!(cluster_tol > 0.0))
    throw Error(ErrorCode::kNonPositiveTolerance, "cluster_tol must be positive");

  std::vector<Triple> triples;
  for (const auto& branch : branches) {
    if (branch.fiber_index >= fiber.size()) {
      throw Error(ErrorCode::kInconsistentFamily,
                  "branch refers to fiber level " + std::to_string(branch.fiber_index) +
                      " but the fiber has " + std::to_string(fiber.size()));
    }
    for (std::size_t j = 0; j < branch.eigenvalues.size(); ++j) {
      const double lambda = branch.eigenvalues[j];
      if (lambda <= lambda_max) triples.push_back({lambda, branch.fiber_index, j});
    }
  }
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.lambda, a.fiber_index, a.base_index) <
           std::tie(b.lambda, b.fiber_index, b.base_index);
  });

  SpectrumClassification result;
  result.cluster_tol = cluster_tol;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= triples.size(); ++i) {
    const bool split =
        i == triples.size() ||
        triples[i].lambda - triples[i - 1].lambda >
            cluster_tol * (1.0 + std::abs(triples[i].lambda));
    if (split) {
      result.levels.push_back(
          make_level(std::span<const Triple>(triples).subspan(start, i - start), fiber));
      start = i;
    }
  }

  const auto warped = classify_warped_simple(result.levels);
  const auto g = classify_g_simple(result.levels);
  bool any_unlabelled = false;
  for (std::size_t i = 0; i < result.levels.size(); ++i) {
    result.levels[i].warped_simple = warped[i];
    result.levels[i].g_simple = g[i];
    any_unlabelled = any_unlabelled || !g[i].has_value();
  }
  if (any_unlabelled)
    result.g_simple_note = "fiber levels carry no irreducible-representation labels";
  return result;
}

SpectrumClassification assemble_spectrum(const FamilySpectrum& family, const FiberSpectrum& fiber,
                                         double lambda_max, double cluster_tol) {
  std::vector<BranchValues> values;
  values.reserve(family.branches.size());
  for (const auto& branch : family.branches) {
    if (branch.fiber_index >= fiber.size() || fiber[branch.fiber_index].mu != branch.mu) {
      throw Error(ErrorCode::kInconsistentFamily,
                  "family branch mu=" + std::to_string(branch.mu) +
                      " does not match the supplied fiber spectrum");
    }
    values.push_back({branch.fiber_index, branch.decomposition.eigenvalues});
  }
  SpectrumClassification result = assemble_spectrum(values, fiber, lambda_max, cluster_tol);
  result.skipped = family.skipped;
  return result;
}

}  // namespace warpspec
