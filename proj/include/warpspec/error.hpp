// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace warpspec {

enum class ErrorCode {
  kInvalidArgument,
  kTooCoarse,
  kNonPositiveWarp,
  kNonFiniteInput,
  kLengthMismatch,
  kInvalidCutoff,
  kNegativeEigenvalue,
  kZeroMultiplicity,
  kLabelMismatch,
  kConvergenceFailure,
  kInconsistentFamily,
  kNonPositiveTolerance,
  kDegenerateEigenvalue,
  kNotNormalized,
  kNotOrthonormal,
  kPositivityLost,
  kMatchingAmbiguous,
  kBudgetExceeded,
  kSizeMismatch,
  kUnwritableOutput,
  kConfig,
};

/// Stable machine-readable name, e.g. "NonPositiveWarp".
std::string_view error_code_name(ErrorCode code) noexcept;

/// Base exception for every domain failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a run configuration is malformed. Carries every offending key
/// path (dotted, e.g. "base.n") rather than stopping at the first.
class ConfigError : public Error {
 public:
  ConfigError(std::vector<std::string> keys, std::vector<std::string> messages);

  const std::vector<std::string>& keys() const noexcept { return keys_; }
  const std::vector<std::string>& messages() const noexcept { return messages_; }

 private:
  std::vector<std::string> keys_;
  std::vector<std::string> messages_;
};

}  // namespace warpspec
