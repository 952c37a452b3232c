// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace warpspec {

inline constexpr int kSchemaVersion = 1;

struct ReportFile {
  std::string name;
  std::string content;
};

struct RunResult {
  std::string command;
  std::vector<ReportFile> files;
  std::optional<bool> verdict;  // set by `validate`
};

/// Subcommands understood by run_command.
const std::vector<std::string>& known_commands();

/// Parses `config_json`, runs one pipeline and renders its reports in
/// memory. Throws ConfigError for schema problems (every offending key is
/// listed) and Error for domain failures. Output is byte-deterministic.
RunResult run_command(std::string_view command, std::string_view config_json);

/// Machine-readable description of a failure:
/// {"error": <code name>, "message": ..., "keys": [...]}.
std::string error_json(const std::exception& error);

/// 17 significant digits, as used in every CSV and JSON report.
std::string format_double(double value);

}  // namespace warpspec
