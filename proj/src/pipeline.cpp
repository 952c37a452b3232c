// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "warpspec/assembler.hpp"
#include "warpspec/base.hpp"
#include "warpspec/error.hpp"
#include "warpspec/fiber.hpp"
#include "warpspec/perturbation.hpp"
#include "warpspec/product.hpp"
#include "warpspec/sturm.hpp"

namespace warpspec {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

// ---------------------------------------------------------------------------
// Rendering

void write_json(std::string& out, const ojson& j, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (j.type()) {
    case ojson::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += inner;
        write_json(out, j[i], depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += pad + "]";
      break;
    }
    case ojson::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += inner + ojson(it.key()).dump() + ": ";
        write_json(out, it.value(), depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += pad + "}";
      break;
    }
    default:
      out += j.dump();
  }
}

std::string render_json(const ojson& j) {
  std::string out;
  write_json(out, j, 0);
  out += "\n";
  return out;
}

ojson spec_json(const WarpingSpec& spec) {
  ojson j;
  j["a0"] = spec.a0;
  j["cos"] = spec.cos_coeffs;
  j["sin"] = spec.sin_coeffs;
  if (spec.raw) j["raw"] = *spec.raw;
  j["require_positive"] = spec.require_positive;
  return j;
}

std::string sources_field(const AssembledLevel& level) {
  std::string out;
  for (std::size_t s = 0; s < level.sources.size(); ++s) {
    const auto& src = level.sources[s];
    if (s > 0) out += "|";
    out += "mu=" + format_double(src.mu) + ";j=";
    for (std::size_t k = 0; k < src.base_indices.size(); ++k) {
      if (k > 0) out += " ";
      out += std::to_string(src.base_indices[k]);
    }
    out += ";mL=" + std::to_string(src.m_base()) + ";mF=" + std::to_string(src.m_fiber);
    if (src.label) out += ";label=" + src.label->tag;
  }
  return out;
}

// RFC 4180: quote fields holding separators or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string levels_csv(const std::vector<AssembledLevel>& levels) {
  std::string out = "lambda,total_mult,warped_simple,g_simple,sources\n";
  for (const auto& level : levels) {
    out += format_double(level.lambda) + "," + std::to_string(level.total_mult) + "," +
           (level.warped_simple ? "true" : "false") + "," +
           (level.g_simple ? (*level.g_simple ? "true" : "false") : "") + "," +
           csv_field(sources_field(level)) + "\n";
  }
  return out;
}

ojson level_json(const AssembledLevel& level) {
  ojson j;
  j["lambda"] = level.lambda;
  j["total_mult"] = level.total_mult;
  j["warped_simple"] = level.warped_simple;
  j["g_simple"] = level.g_simple ? ojson(*level.g_simple) : ojson(nullptr);
  ojson sources = ojson::array();
  for (const auto& src : level.sources) {
    ojson s;
    s["fiber_index"] = src.fiber_index;
    s["mu"] = src.mu;
    s["base_indices"] = src.base_indices;
    s["lambdas"] = src.lambdas;
    s["m_base"] = src.m_base();
    s["m_fiber"] = src.m_fiber;
    if (src.label) {
      s["label"] = src.label->tag;
      s["label_dim"] = src.label->real_dim;
    } else {
      s["label"] = nullptr;
    }
    sources.push_back(std::move(s));
  }
  j["sources"] = std::move(sources);
  return j;
}

ojson skipped_json(const std::vector<SkippedLevel>& skipped) {
  ojson out = ojson::array();
  for (const auto& s : skipped)
    out.push_back({{"fiber_index", s.fiber_index}, {"mu", s.mu}, {"lower_bound", s.lower_bound}});
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

class Reader {
 public:
  void fail(const std::string& key, const std::string& message) {
    keys_.push_back(key);
    messages_.push_back(message);
  }
  bool ok() const { return keys_.empty(); }
  void throw_if_failed() const {
    if (!ok()) throw ConfigError(keys_, messages_);
  }

  const json* object(const json& parent, const std::string& path, const std::string& key,
                     bool required) {
    const std::string full = join(path, key);
    if (!parent.is_object() || !parent.contains(key)) {
      if (required) fail(full, "required object is missing");
      return nullptr;
    }
    const json& child = parent.at(key);
    if (!child.is_object()) {
      fail(full, "must be an object");
      return nullptr;
    }
    return &child;
  }

  std::optional<double> number(const json* obj, const std::string& path, const std::string& key,
                               std::optional<double> fallback = std::nullopt) {
    const std::string full = join(path, key);
    if (obj == nullptr) return fallback;
    if (!obj->contains(key) || obj->at(key).is_null()) {
      if (!fallback) fail(full, "required number is missing");
      return fallback;
    }
    const json& v = obj->at(key);
    if (!v.is_number()) {
      fail(full, "must be a number");
      return std::nullopt;
    }
    return v.get<double>();
  }

  std::optional<long long> integer(const json* obj, const std::string& path,
                                   const std::string& key,
                                   std::optional<long long> fallback = std::nullopt) {
    const std::string full = join(path, key);
    if (obj == nullptr) return fallback;
    if (!obj->contains(key) || obj->at(key).is_null()) {
      if (!fallback) fail(full, "required integer is missing");
      return fallback;
    }
    const json& v = obj->at(key);
    if (!v.is_number_integer()) {
      fail(full, "must be an integer");
      return std::nullopt;
    }
    return v.get<long long>();
  }

  std::optional<std::string> string(const json* obj, const std::string& path,
                                    const std::string& key,
                                    std::optional<std::string> fallback = std::nullopt) {
    const std::string full = join(path, key);
    if (obj == nullptr) return fallback;
    if (!obj->contains(key) || obj->at(key).is_null()) {
      if (!fallback) fail(full, "required string is missing");
      return fallback;
    }
    const json& v = obj->at(key);
    if (!v.is_string()) {
      fail(full, "must be a string");
      return std::nullopt;
    }
    return v.get<std::string>();
  }

  std::optional<bool> boolean(const json* obj, const std::string& path, const std::string& key,
                              bool fallback) {
    if (obj == nullptr || !obj->contains(key) || obj->at(key).is_null()) return fallback;
    const json& v = obj->at(key);
    if (!v.is_boolean()) {
      fail(join(path, key), "must be a boolean");
      return std::nullopt;
    }
    return v.get<bool>();
  }

  std::optional<std::vector<double>> numbers(const json* obj, const std::string& path,
                                             const std::string& key, bool required) {
    const std::string full = join(path, key);
    if (obj == nullptr || !obj->contains(key) || obj->at(key).is_null()) {
      if (required) {
        fail(full, "required array is missing");
        return std::nullopt;
      }
      return std::vector<double>{};
    }
    const json& v = obj->at(key);
    if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& x) {
          return x.is_number();
        })) {
      fail(full, "must be an array of numbers");
      return std::nullopt;
    }
    return v.get<std::vector<double>>();
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  std::vector<std::string> keys_;
  std::vector<std::string> messages_;
};

std::optional<WarpingSpec> read_spec(Reader& rd, const json* obj, const std::string& path,
                                     bool default_positive) {
  if (obj == nullptr) return std::nullopt;
  WarpingSpec spec;
  const bool has_raw = obj->contains("raw") && !obj->at("raw").is_null();
  if (!has_raw && !obj->contains("a0") && !obj->contains("cos") && !obj->contains("sin")) {
    rd.fail(path, "needs a0/cos/sin coefficients or raw samples");
    return std::nullopt;
  }
  const auto a0 = rd.number(obj, path, "a0", 0.0);
  const auto cs = rd.numbers(obj, path, "cos", false);
  const auto sn = rd.numbers(obj, path, "sin", false);
  const auto pos = rd.boolean(obj, path, "require_positive", default_positive);
  std::optional<std::vector<double>> raw;
  if (has_raw) raw = rd.numbers(obj, path, "raw", true);
  if (!a0 || !cs || !sn || !pos || (has_raw && !raw)) return std::nullopt;
  spec.a0 = *a0;
  spec.cos_coeffs = *cs;
  spec.sin_coeffs = *sn;
  spec.require_positive = *pos;
  if (has_raw) spec.raw = *raw;
  return spec;
}

struct FiberConfig {
  std::string kind;
  int n = 0;
  double circumference = 0.0;
};

struct Common {
  std::optional<BaseMesh> mesh;
  std::optional<WarpField> warp;
  std::optional<FiberSpectrum> fiber;
  FiberConfig fiber_config;
  double lambda_max = 10.0;
  double cluster_tol = kDefaultClusterTol;
  SolveOptions solve;
  std::set<std::string> formats{"csv", "json"};
};

std::optional<FiberSpectrum> read_fiber(Reader& rd, const json* obj, FiberConfig& cfg) {
  if (obj == nullptr) return std::nullopt;
  const auto kind = rd.string(obj, "fiber", "kind");
  if (!kind) return std::nullopt;
  cfg.kind = *kind;
  try {
    if (*kind == "circle") {
      const auto c = rd.number(obj, "fiber", "circumference", 2.0 * M_PI);
      const auto mu_max = rd.number(obj, "fiber", "mu_max");
      if (!c || !mu_max) return std::nullopt;
      cfg.circumference = *c;
      return circle_fiber(*c, *mu_max);
    }
    if (*kind == "sphere") {
      const auto l_max = rd.integer(obj, "fiber", "l_max");
      if (!l_max) return std::nullopt;
      return sphere_fiber(static_cast<int>(*l_max));
    }
    if (*kind == "discrete_circle") {
      const auto n = rd.integer(obj, "fiber", "n");
      const auto c = rd.number(obj, "fiber", "circumference", 2.0 * M_PI);
      if (!n || !c) return std::nullopt;
      cfg.n = static_cast<int>(*n);
      cfg.circumference = *c;
      return discrete_circle_fiber(cfg.n, *c);
    }
    if (*kind == "custom") {
      const auto dim = rd.integer(obj, "fiber", "dim");
      if (!obj->contains("entries") || !obj->at("entries").is_array()) {
        rd.fail("fiber.entries", "must be an array of [mu, mult, label?, label_dim?]");
        return std::nullopt;
      }
      std::vector<FiberLevel> entries;
      const json& arr = obj->at("entries");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& e = arr[i];
        const std::string key = "fiber.entries[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() < 2 || e.size() > 4 || !e[0].is_number() ||
            !e[1].is_number_integer() || (e.size() >= 3 && !e[2].is_string()) ||
            (e.size() == 4 && !e[3].is_number_integer())) {
          rd.fail(key, "must be [mu, mult, label?, label_dim?]");
          continue;
        }
        FiberLevel level{e[0].get<double>(), e[1].get<int>(), std::nullopt};
        if (e.size() >= 3)
          level.label = IrrepLabel{e[2].get<std::string>(),
                                   e.size() == 4 ? e[3].get<int>() : level.mult};
        entries.push_back(std::move(level));
      }
      if (!dim || !rd.ok()) return std::nullopt;
      return custom_fiber(std::move(entries), static_cast<int>(*dim));
    }
    rd.fail("fiber.kind", "must be circle, sphere, discrete_circle or custom");
  } catch (const Error& e) {
    rd.fail("fiber", e.what());
  }
  return std::nullopt;
}

Common read_common(Reader& rd, const json& root) {
  Common c;
  const json* base = rd.object(root, "", "base", true);
  const json* warp = rd.object(root, "", "warp", true);
  const json* fiber = rd.object(root, "", "fiber", true);

  if (base != nullptr) {
    const auto kind = rd.string(base, "base", "kind");
    const auto length = rd.number(base, "base", "length");
    const auto n = rd.integer(base, "base", "n");
    const auto bc = rd.string(base, "base", "bc",
                                kind && *kind == "circle" ? std::optional<std::string>("periodic")
                                                          : std::nullopt);
    std::optional<BaseKind> k;
    std::optional<BoundaryCondition> b;
    if (kind) {
      if (*kind == "circle") k = BaseKind::kCircle;
      else if (*kind == "interval") k = BaseKind::kInterval;
      else rd.fail("base.kind", "must be circle or interval");
    }
    if (bc) {
      if (*bc == "periodic") b = BoundaryCondition::kPeriodic;
      else if (*bc == "dirichlet") b = BoundaryCondition::kDirichlet;
      else if (*bc == "neumann") b = BoundaryCondition::kNeumann;
      else rd.fail("base.bc", "must be periodic, dirichlet or neumann");
    }
    if (k && b && length && n) {
      try {
        c.mesh = build_base_mesh(*k, *length, static_cast<int>(*n), *b);
      } catch (const Error& e) {
        rd.fail("base", e.what());
      }
    }
  }

  c.fiber = read_fiber(rd, fiber, c.fiber_config);
  const auto m_fiber = rd.integer(&root, "", "m_fiber", c.fiber ? c.fiber->fiber_dim() : 1);
  if (c.fiber && m_fiber && *m_fiber != c.fiber->fiber_dim())
    rd.fail("m_fiber", "does not match the fiber dimension " +
                           std::to_string(c.fiber->fiber_dim()));

  const auto spec = read_spec(rd, warp, "warp", true);
  if (spec && c.mesh && m_fiber) {
    try {
      c.warp = sample_warping(*spec, *c.mesh, static_cast<int>(*m_fiber), spec->require_positive);
    } catch (const Error& e) {
      rd.fail("warp", e.what());
    }
  }

  if (const auto v = rd.number(&root, "", "lambda_max", 10.0)) c.lambda_max = *v;
  if (const auto v = rd.number(&root, "", "cluster_tol", kDefaultClusterTol)) {
    if (*v > 0.0) c.cluster_tol = *v;
    else rd.fail("cluster_tol", "must be positive");
  }
  if (const auto v = rd.string(&root, "", "solver", std::optional<std::string>("auto"))) {
    if (*v == "auto") c.solve.backend = EigenBackend::kAuto;
    else if (*v == "householder_ql") c.solve.backend = EigenBackend::kHouseholderQL;
    else if (*v == "jacobi") c.solve.backend = EigenBackend::kJacobi;
    else if (*v == "factored_jacobi") c.solve.backend = EigenBackend::kFactoredJacobi;
    else rd.fail("solver", "must be auto, householder_ql, jacobi or factored_jacobi");
  }

  if (const json* output = rd.object(root, "", "output", false)) {
    if (output->contains("formats")) {
      const json& f = output->at("formats");
      bool good = f.is_array() && !f.empty();
      std::set<std::string> formats;
      if (good) {
        for (const auto& x : f) {
          if (!x.is_string() || (x != "csv" && x != "json")) good = false;
          else formats.insert(x.get<std::string>());
        }
      }
      if (good) c.formats = formats;
      else rd.fail("output.formats", "must be a non-empty subset of [\"csv\", \"json\"]");
    }
  }
  return c;
}

ojson header(const std::string& command) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

void add(RunResult& result, const Common& c, const std::string& name, const std::string& format,
         std::string content) {
  if (c.formats.count(format) != 0) result.files.push_back({name, std::move(content)});
}

// ---------------------------------------------------------------------------
// Commands

RunResult run_spectrum(const Common& c) {
  const FamilySpectrum family = spectrum_of_family(*c.warp, *c.fiber, c.lambda_max, c.solve);
  RunResult result;
  std::string csv = "mu,j,lambda\n";
  ojson j = header("spectrum");
  j["lambda_max"] = c.lambda_max;
  ojson branches = ojson::array();
  for (const auto& b : family.branches) {
    for (std::size_t k = 0; k < b.decomposition.size(); ++k)
      csv += format_double(b.mu) + "," + std::to_string(k) + "," +
             format_double(b.decomposition.eigenvalues[k]) + "\n";
    branches.push_back({{"fiber_index", b.fiber_index},
                        {"mu", b.mu},
                        {"eigenvalues", b.decomposition.eigenvalues}});
  }
  j["branches"] = std::move(branches);
  j["skipped"] = skipped_json(family.skipped);
  add(result, c, "family.csv", "csv", std::move(csv));
  add(result, c, "family.json", "json", render_json(j));
  return result;
}

SpectrumClassification classify(const Common& c) {
  const FamilySpectrum family = spectrum_of_family(*c.warp, *c.fiber, c.lambda_max, c.solve);
  return assemble_spectrum(family, *c.fiber, c.lambda_max, c.cluster_tol);
}

ojson classification_json(const std::string& command, const SpectrumClassification& s,
                          const Common& c) {
  ojson j = header(command);
  j["lambda_max"] = c.lambda_max;
  j["cluster_tol"] = s.cluster_tol;
  j["multiplicity_convention"] = s.multiplicity_convention;
  j["fiber"] = c.fiber->description();
  ojson levels = ojson::array();
  for (const auto& level : s.levels) levels.push_back(level_json(level));
  j["levels"] = std::move(levels);
  j["skipped"] = skipped_json(s.skipped);
  return j;
}

RunResult run_assemble(const Common& c) {
  const SpectrumClassification s = classify(c);
  RunResult result;
  add(result, c, "spectrum.csv", "csv", levels_csv(s.levels));
  add(result, c, "spectrum.json", "json", render_json(classification_json("assemble", s, c)));
  return result;
}

RunResult run_classify(const Common& c) {
  const SpectrumClassification s = classify(c);
  ojson j = classification_json("classify", s, c);
  const auto warped = std::count_if(s.levels.begin(), s.levels.end(),
                                    [](const AssembledLevel& l) { return l.warped_simple; });
  const auto g = std::count_if(s.levels.begin(), s.levels.end(), [](const AssembledLevel& l) {
    return l.g_simple.value_or(false);
  });
  j["summary"] = {{"levels", s.levels.size()},
                  {"warped_simple", warped},
                  {"g_simple", g},
                  {"all_warped_simple", static_cast<std::size_t>(warped) == s.levels.size()},
                  {"g_simple_note", s.g_simple_note}};
  RunResult result;
  add(result, c, "levels.csv", "csv", levels_csv(s.levels));
  add(result, c, "levels.json", "json", render_json(j));
  return result;
}

FdOptions read_fd_options(Reader& rd, const json* block, const std::string& path) {
  FdOptions fd;
  if (block != nullptr && block->contains("steps")) {
    if (const auto steps = rd.numbers(block, path, "steps", true)) {
      if (steps->empty()) rd.fail(path + ".steps", "must not be empty");
      else fd.steps = *steps;
    }
  }
  return fd;
}

RunResult run_derivative(Reader& rd, const json& root, const Common& c) {
  const json* block = rd.object(root, "", "derivative", true);
  const auto spec = read_spec(rd, rd.object(block ? *block : json::object(), "derivative", "r",
                                            block != nullptr),
                              "derivative.r", false);
  const auto mu = rd.number(block, "derivative", "mu");
  const auto j_index = rd.integer(block, "derivative", "j", 0);
  const FdOptions fd = read_fd_options(rd, block, "derivative");
  if (mu && *mu < 0.0) rd.fail("derivative.mu", "must be >= 0");
  if (j_index && *j_index < 0) rd.fail("derivative.j", "must be >= 0");
  rd.throw_if_failed();

  const WarpField& f0 = *c.warp;
  const PerturbationDirection r = make_direction(*spec, f0.mesh);
  const EigenDecomposition dec = eigensolve(assemble_operator(f0, *mu), c.solve);
  const auto j = static_cast<std::size_t>(*j_index);
  if (j >= dec.size()) {
    throw ConfigError({"derivative.j"}, {"index exceeds the number of eigenvalues (" +
                                         std::to_string(dec.size()) + ")"});
  }
  DerivativeOptions opts;
  opts.cluster_gap = c.cluster_tol;
  const auto [first, last] = cluster_around(dec.eigenvalues, j, opts.cluster_gap);

  ojson out = header("derivative");
  out["mu"] = *mu;
  out["j"] = j;
  out["lambda0"] = dec.eigenvalues[j];
  out["direction"] = spec_json(r.spec);
  out["fd_steps"] = fd.steps;
  std::string csv = "mu,j,lambda0,curve,slope_formula,slope_via_L,slope_hf,slope_fd\n";
  const std::string prefix = format_double(*mu) + "," + std::to_string(j) + "," +
                             format_double(dec.eigenvalues[j]) + ",";

  if (last - first == 1) {
    const double formula = eigenvalue_derivative(f0, r, dec, j, opts);
    const double via_l = eigenvalue_derivative_via_L(f0, r, dec, j, opts);
    const double hf = hellmann_feynman_slope(f0, r, dec, j, opts);
    const FdSlope fds = fd_slope(f0, r, *mu, dec.vector(j), fd);
    DerivativeOptions printed = opts;
    printed.exponent = WarpExponent::kPrinted;
    const double printed_slope = eigenvalue_derivative(f0, r, dec, j, printed);
    out["degenerate"] = false;
    out["slope_formula"] = formula;
    out["slope_via_L"] = via_l;
    out["slope_hf"] = hf;
    out["slope_fd"] = fds.slope;
    out["fd_central"] = fds.central;
    out["fd_step"] = fds.step;
    out["slope_printed_exponent"] = printed_slope;
    out["residuals"] = {{"formula_minus_via_L", formula - via_l},
                        {"formula_minus_hf", formula - hf},
                        {"hf_minus_fd", hf - fds.slope}};
    out["degenerate_matrix"] = nullptr;
    csv += prefix + "0," + format_double(formula) + "," + format_double(via_l) + "," +
           format_double(hf) + "," + format_double(fds.slope) + "\n";
  } else {
    const SlopeMatrix q = degenerate_derivative_matrix(f0, r, dec, first, last, opts);
    ojson rows = ojson::array();
    for (std::size_t a = 0; a < q.q.rows(); ++a) {
      auto row = q.q.row(a);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    std::vector<double> fd_slopes;
    for (std::size_t k = 0; k < q.kato_vectors.size(); ++k) {
      fd_slopes.push_back(fd_slope(f0, r, *mu, q.kato_vectors[k], fd).slope);
      csv += prefix + std::to_string(k) + "," + format_double(q.slopes[k]) + ",,," +
             format_double(fd_slopes.back()) + "\n";
    }
    out["degenerate"] = true;
    out["cluster"] = {{"first", first}, {"last", last}};
    out["slope_formula"] = nullptr;
    out["slope_via_L"] = nullptr;
    out["slope_hf"] = nullptr;
    out["slope_fd"] = nullptr;
    out["degenerate_matrix"] = {{"q", std::move(rows)},
                                {"slopes", q.slopes},
                                {"fd_slopes", fd_slopes}};
  }
  RunResult result;
  add(result, c, "derivative.csv", "csv", std::move(csv));
  add(result, c, "derivative.json", "json", render_json(out));
  return result;
}

ojson member_json(const ClusterMember& m) {
  return {{"fiber_index", m.fiber_index},
          {"mu", m.mu},
          {"base_index", m.base_index},
          {"lambda_before", m.lambda_before},
          {"lambda_after", m.lambda_after}};
}

RunResult run_split(Reader& rd, const json& root, const Common& c) {
  const json* block = rd.object(root, "", "split", false);
  const auto t = rd.number(block, "split", "t", 0.1);
  const auto seed = rd.integer(block, "split", "seed", 42);
  const auto count = rd.integer(block, "split", "count", 4);
  const auto degree = rd.integer(block, "split", "degree", 3);
  const auto gap_tol = rd.number(block, "split", "gap_tol", 1e-6);
  const auto re_tol = rd.number(block, "split", "cluster_tol", 1e-6);
  const auto level_lambda = rd.number(block, "split", "level_lambda",
                                      std::numeric_limits<double>::quiet_NaN());
  std::vector<WarpingSpec> directions;
  const bool explicit_dirs = block != nullptr && block->contains("directions");
  if (explicit_dirs) {
    const json& arr = block->at("directions");
    if (!arr.is_array() || arr.empty()) {
      rd.fail("split.directions", "must be a non-empty array of warping specs");
    } else {
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string key = "split.directions[" + std::to_string(i) + "]";
        if (!arr[i].is_object()) {
          rd.fail(key, "must be an object");
          continue;
        }
        if (auto s = read_spec(rd, &arr[i], key, false)) directions.push_back(*s);
      }
    }
  }
  if (seed && *seed < 0) rd.fail("split.seed", "must be >= 0");
  if (count && *count < 1) rd.fail("split.count", "must be >= 1");
  if (degree && *degree < 1) rd.fail("split.degree", "must be >= 1");
  rd.throw_if_failed();

  const SpectrumClassification s = classify(c);
  // Target: the level nearest to level_lambda, or the first degenerate one.
  std::optional<std::size_t> target;
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& level = s.levels[i];
    int members = 0;
    for (const auto& src : level.sources) members += src.m_base();
    if (members < 2) continue;
    if (std::isnan(*level_lambda)) {
      target = i;
      break;
    }
    if (!target || std::abs(level.lambda - *level_lambda) <
                       std::abs(s.levels[*target].lambda - *level_lambda))
      target = i;
  }
  if (!target) {
    throw Error(ErrorCode::kInvalidArgument,
                "no level below lambda_max has two or more base eigenvalues to split");
  }

  if (!explicit_dirs)
    directions = random_fourier_directions(static_cast<std::uint64_t>(*seed),
                                           static_cast<std::size_t>(*count),
                                           static_cast<int>(*degree));
  SplitOptions opts{*t, *gap_tol, *re_tol};
  SplitReport report = split_search(*c.warp, *c.fiber, s.levels[*target], directions, opts);
  if (!explicit_dirs) report.seed = static_cast<std::uint64_t>(*seed);

  ojson out = header("split");
  out["lambda0"] = report.lambda0;
  out["t"] = report.t;
  out["seed"] = report.seed ? ojson(*report.seed) : ojson(nullptr);
  out["degree"] = explicit_dirs ? ojson(nullptr) : ojson(*degree);
  out["gap_tol"] = opts.gap_tol;
  out["gap_before"] = report.gap_before;
  out["target_level"] = level_json(s.levels[*target]);
  ojson cands = ojson::array();
  std::string csv = "candidate,min_gap,diameter,split\n";
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& cand = report.candidates[i];
    ojson cj;
    cj["direction"] = spec_json(cand.spec);
    cj["min_gap"] = cand.min_gap;
    cj["diameter"] = cand.diameter;
    cj["split"] = cand.split;
    ojson members = ojson::array();
    for (const auto& m : cand.members) members.push_back(member_json(m));
    cj["members"] = std::move(members);
    ojson levels = ojson::array();
    for (const auto& level : cand.levels) levels.push_back(level_json(level));
    cj["levels"] = std::move(levels);
    cands.push_back(std::move(cj));
    csv += std::to_string(i) + "," + format_double(cand.min_gap) + "," +
           format_double(cand.diameter) + "," + (cand.split ? "true" : "false") + "\n";
  }
  out["candidates"] = std::move(cands);
  out["chosen"] = report.chosen;
  out["split"] = report.split;
  RunResult result;
  add(result, c, "split.csv", "csv", std::move(csv));
  add(result, c, "split.json", "json", render_json(out));
  return result;
}

RunResult run_trace(Reader& rd, const json& root, const Common& c) {
  const json* block = rd.object(root, "", "trace", true);
  const auto spec = read_spec(rd, rd.object(block ? *block : json::object(), "trace", "r",
                                            block != nullptr),
                              "trace.r", false);
  const auto grid = rd.numbers(block, "trace", "t_grid", block != nullptr);
  const auto k = rd.integer(block, "trace", "k", 6);
  if (grid && block != nullptr && grid->empty()) rd.fail("trace.t_grid", "must not be empty");
  if (k && *k < 1) rd.fail("trace.k", "must be >= 1");
  rd.throw_if_failed();

  const PerturbationDirection r = make_direction(*spec, c.warp->mesh);
  const EigenCurves curves =
      trace_curves(*c.warp, r, *grid, *c.fiber, static_cast<std::size_t>(*k));

  std::string csv = "t,branch,mu,lambda\n";
  for (std::size_t g = 0; g < curves.t_grid.size(); ++g)
    for (const auto& b : curves.branches)
      csv += format_double(curves.t_grid[g]) + "," + std::to_string(b.id) + "," +
             format_double(b.mu) + "," + format_double(b.values[g]) + "\n";

  ojson out = header("trace");
  out["direction"] = spec_json(r.spec);
  out["t_grid"] = curves.t_grid;
  ojson branches = ojson::array();
  for (const auto& b : curves.branches) {
    branches.push_back({{"id", b.id},
                        {"fiber_index", b.fiber_index},
                        {"mu", b.mu},
                        {"start_index", b.start_index},
                        {"values", b.values}});
  }
  out["branches"] = std::move(branches);
  ojson crossings = ojson::array();
  for (const auto& x : curves.crossings)
    crossings.push_back(
        {{"branch_a", x.branch_a}, {"branch_b", x.branch_b}, {"t_lo", x.t_lo}, {"t_hi", x.t_hi}});
  out["crossings"] = std::move(crossings);
  out["bisections"] = curves.bisections;
  RunResult result;
  add(result, c, "curves.csv", "csv", std::move(csv));
  add(result, c, "curves.json", "json", render_json(out));
  return result;
}

RunResult run_validate(Reader& rd, const json& root, const Common& c) {
  const json* block = rd.object(root, "", "validate", false);
  const auto k = rd.integer(block, "validate", "k", 40);
  const auto tol = rd.number(block, "validate", "tolerance", 1e-8);
  if (c.fiber_config.kind != "discrete_circle")
    rd.fail("fiber.kind", "validate needs a discrete_circle fiber");
  if (c.warp && c.warp->m_fiber != 1) rd.fail("m_fiber", "validate needs m_fiber = 1");
  if (k && *k < 1) rd.fail("validate.k", "must be >= 1");
  rd.throw_if_failed();

  const double inf = std::numeric_limits<double>::infinity();
  const FamilySpectrum family = spectrum_of_family(*c.warp, *c.fiber, inf, c.solve);
  const SpectrumClassification assembled = assemble_spectrum(family, *c.fiber, inf, c.cluster_tol);
  const ProductOperator op =
      assemble_full_product(*c.warp, c.fiber_config.n, c.fiber_config.circumference);
  const ValidationReport report =
      validate_separation(op, assembled, static_cast<std::size_t>(*k), *tol);

  ojson out = header("validate");
  out["max_abs_dev"] = report.max_abs_dev;
  out["max_scaled_dev"] = report.max_scaled_dev;
  out["tolerance"] = report.tolerance;
  out["k"] = report.k;
  out["pass"] = report.pass;
  ojson per = ojson::array();
  for (const auto& e : report.per_level)
    per.push_back({{"index", e.index},
                   {"full", e.full},
                   {"assembled", e.assembled},
                   {"deviation", e.deviation}});
  out["per_level"] = std::move(per);
  RunResult result;
  result.verdict = report.pass;
  add(result, c, "validation.json", "json", render_json(out));
  return result;
}

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> commands{"spectrum", "assemble", "classify", "derivative",
                                                 "split",    "trace",    "validate"};
  return commands;
}

RunResult run_command(std::string_view command, std::string_view config_json) {
  const auto& commands = known_commands();
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError({"command"}, {"unknown subcommand '" + std::string(command) + "'"});

  json root;
  try {
    root = json::parse(config_json);
  } catch (const json::parse_error& e) {
    throw ConfigError({"$"}, {std::string("config is not valid JSON: ") + e.what()});
  }
  if (!root.is_object()) throw ConfigError({"$"}, {"config must be a JSON object"});

  Reader rd;
  const Common c = read_common(rd, root);
  RunResult result;
  const std::string cmd(command);
  if (cmd == "spectrum" || cmd == "assemble" || cmd == "classify") {
    rd.throw_if_failed();
    result = cmd == "spectrum" ? run_spectrum(c) : cmd == "assemble" ? run_assemble(c)
                                                                     : run_classify(c);
  } else if (cmd == "derivative") {
    result = run_derivative(rd, root, c);
  } else if (cmd == "split") {
    result = run_split(rd, root, c);
  } else if (cmd == "trace") {
    result = run_trace(rd, root, c);
  } else {
    result = run_validate(rd, root, c);
  }
  result.command = cmd;
  return result;
}

std::string error_json(const std::exception& error) {
  ojson j;
  j["schema_version"] = kSchemaVersion;
  if (const auto* ce = dynamic_cast<const ConfigError*>(&error)) {
    j["error"] = std::string(error_code_name(ce->code()));
    j["message"] = ce->what();
    j["keys"] = ce->keys();
    j["messages"] = ce->messages();
  } else if (const auto* e = dynamic_cast<const Error*>(&error)) {
    j["error"] = std::string(error_code_name(e->code()));
    j["message"] = e->what();
    j["keys"] = ojson::array();
  } else {
    j["error"] = "Internal";
    j["message"] = error.what();
    j["keys"] = ojson::array();
  }
  return render_json(j);
}

}  // namespace warpspec
