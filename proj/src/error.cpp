// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/error.hpp"

#include <utility>

namespace warpspec {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kTooCoarse: return "TooCoarse";
    case ErrorCode::kNonPositiveWarp: return "NonPositiveWarp";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidCutoff: return "InvalidCutoff";
    case ErrorCode::kNegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::kZeroMultiplicity: return "ZeroMultiplicity";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kInconsistentFamily: return "InconsistentFamily";
    case ErrorCode::kNonPositiveTolerance: return "NonPositiveTolerance";
    case ErrorCode::kDegenerateEigenvalue: return "DegenerateEigenvalue";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kNotOrthonormal: return "NotOrthonormal";
    case ErrorCode::kPositivityLost: return "PositivityLost";
    case ErrorCode::kMatchingAmbiguous: return "MatchingAmbiguous";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
    case ErrorCode::kUnwritableOutput: return "UnwritableOutput";
    case ErrorCode::kConfig: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::string join_messages(const std::vector<std::string>& keys,
                          const std::vector<std::string>& messages) {
  std::string out = "invalid configuration:";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out += " [" + keys[i] + "]";
    if (i < messages.size()) out += " " + messages[i];
    if (i + 1 < keys.size()) out += ";";
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> keys, std::vector<std::string> messages)
    : Error(ErrorCode::kConfig, join_messages(keys, messages)),
      keys_(std::move(keys)),
      messages_(std::move(messages)) {}

}  // namespace warpspec
