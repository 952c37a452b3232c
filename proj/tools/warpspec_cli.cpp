// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

// warpspec: run one spectral pipeline from a JSON config and write its
// CSV/JSON reports.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "warpspec/warpspec.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitConfig = 2;

std::string error_json(const std::string& code, const std::string& message,
                       const std::vector<std::string>& keys = {}) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["error"] = code;
  j["message"] = message;
  j["keys"] = keys;
  return j.dump(2) + "\n";
}

// All files are staged next to their targets and renamed only once every
// one of them has been written, so a failure leaves no partial report set.
bool write_reports(const wsp_report* report, const fs::path& dir, bool verbose) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto discard = [&staged] {
    std::error_code ignore;
    for (const auto& [tmp, target] : staged) fs::remove(tmp, ignore);
  };
  for (size_t i = 0; i < wsp_report_file_count(report); ++i) {
    const fs::path target = dir / wsp_report_file_name(report, i);
    fs::path tmp = target;
    tmp += ".partial";
    size_t length = 0;
    const char* data = wsp_report_file_contents(report, i, &length);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) out.write(data, static_cast<std::streamsize>(length));
    out.close();
    if (!out) {
      staged.emplace_back(tmp, target);
      discard();
      return false;
    }
    staged.emplace_back(tmp, target);
  }
  for (const auto& [tmp, target] : staged) {
    fs::rename(tmp, target, ec);
    if (ec) {
      discard();
      return false;
    }
    if (verbose) std::cerr << "wrote " << target.string() << "\n";
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of Laplacians on warped products B x_f F"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string output_dir;
  bool verbose = false;

  const char* commands[] = {"spectrum", "assemble", "classify", "derivative",
                            "split",    "trace",    "validate"};
  const char* help[] = {
      "eigenvalues of L^f_mu for every fiber level",
      "assembled spectrum with multiplicities",
      "assembled spectrum with warped-simple / G-simple flags",
      "eigenvalue derivative along a warping perturbation",
      "search for a perturbation that splits a degenerate level",
      "eigenvalue curves along f + t r",
      "compare against a full product discretisation",
  };
  for (size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], help[i]);
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
    sub->add_option("-o,--output", output_dir, "output directory (overrides output.directory)");
    sub->add_flag("-v,--verbose", verbose, "log written files to stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("ConfigError", e.what(), {"argv"});
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << error_json("ConfigError", "cannot read config file " + config_path, {"config"});
    return kExitConfig;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string config = buffer.str();

  if (output_dir.empty()) {
    output_dir = ".";
    const auto root = nlohmann::json::parse(config, nullptr, false);
    if (root.is_object() && root.contains("output") && root["output"].is_object() &&
        root["output"].contains("directory") && root["output"]["directory"].is_string())
      output_dir = root["output"]["directory"].get<std::string>();
  }

  wsp_report* report = nullptr;
  const wsp_status status = wsp_run(command.c_str(), config.c_str(), &report);
  if (status != WSP_OK) {
    std::cerr << wsp_last_error();
    return status == WSP_CONFIG_ERROR ? kExitConfig : kExitDomain;
  }
  if (!write_reports(report, output_dir, verbose)) {
    wsp_report_destroy(report);
    std::cerr << error_json("UnwritableOutput", "cannot write reports to " + output_dir,
                            {"output.directory"});
    return kExitDomain;
  }
  const int verdict = wsp_report_verdict(report);
  wsp_report_destroy(report);
  if (verdict == 0) {
    if (verbose) std::cerr << "validation FAIL\n";
    return kExitDomain;
  }
  return kExitOk;
}
