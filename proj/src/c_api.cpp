// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "warpspec/warpspec.h"

#include <exception>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "warpspec/base.hpp"
#include "warpspec/error.hpp"
#include "warpspec/fiber.hpp"
#include "warpspec/perturbation.hpp"
#include "warpspec/pipeline.hpp"
#include "warpspec/sturm.hpp"

struct wsp_mesh {
  warpspec::BaseMesh mesh;
};
struct wsp_warp {
  warpspec::WarpField field;
};
struct wsp_fiber {
  warpspec::FiberSpectrum spectrum;
};
struct wsp_report {
  warpspec::RunResult result;
};

namespace {

thread_local std::string last_error;

wsp_status fail(wsp_status status, std::string json) {
  last_error = std::move(json);
  return status;
}

wsp_status invalid(const char* what) {
  return fail(WSP_INVALID_ARGUMENT,
              warpspec::error_json(warpspec::Error(warpspec::ErrorCode::kInvalidArgument, what)));
}

template <typename F>
wsp_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return WSP_OK;
  } catch (const warpspec::ConfigError& e) {
    return fail(WSP_CONFIG_ERROR, warpspec::error_json(e));
  } catch (const warpspec::Error& e) {
    return fail(WSP_DOMAIN_ERROR, warpspec::error_json(e));
  } catch (const std::bad_alloc& e) {
    return fail(WSP_INTERNAL_ERROR, warpspec::error_json(e));
  } catch (const std::exception& e) {
    return fail(WSP_INTERNAL_ERROR, warpspec::error_json(e));
  } catch (...) {
    return fail(WSP_INTERNAL_ERROR, "{\"error\": \"Internal\", \"message\": \"unknown\"}\n");
  }
}

std::vector<double> copy(const double* p, size_t n) {
  return p == nullptr ? std::vector<double>{} : std::vector<double>(p, p + n);
}

}  // namespace

extern "C" {

const char* wsp_version(void) { return "0.1.0"; }

const char* wsp_last_error(void) { return last_error.c_str(); }

wsp_status wsp_run(const char* command, const char* config_json, wsp_report** out) {
  if (command == nullptr || config_json == nullptr || out == nullptr)
    return invalid("null argument to wsp_run");
  *out = nullptr;
  return guarded([&] { *out = new wsp_report{warpspec::run_command(command, config_json)}; });
}

size_t wsp_report_file_count(const wsp_report* report) {
  return report == nullptr ? 0 : report->result.files.size();
}

const char* wsp_report_file_name(const wsp_report* report, size_t index) {
  if (report == nullptr || index >= report->result.files.size()) return nullptr;
  return report->result.files[index].name.c_str();
}

const char* wsp_report_file_contents(const wsp_report* report, size_t index, size_t* length) {
  if (report == nullptr || index >= report->result.files.size()) return nullptr;
  const auto& content = report->result.files[index].content;
  if (length != nullptr) *length = content.size();
  return content.c_str();
}

int wsp_report_verdict(const wsp_report* report) {
  if (report == nullptr || !report->result.verdict) return -1;
  return *report->result.verdict ? 1 : 0;
}

void wsp_report_destroy(wsp_report* report) { delete report; }

wsp_status wsp_mesh_create(wsp_base_kind kind, double length, int n, wsp_bc bc, wsp_mesh** out) {
  if (out == nullptr) return invalid("null output handle");
  *out = nullptr;
  return guarded([&] {
    *out = new wsp_mesh{warpspec::build_base_mesh(static_cast<warpspec::BaseKind>(kind), length,
                                                  n, static_cast<warpspec::BoundaryCondition>(bc))};
  });
}

void wsp_mesh_destroy(wsp_mesh* mesh) { delete mesh; }

size_t wsp_mesh_size(const wsp_mesh* mesh) { return mesh == nullptr ? 0 : mesh->mesh.size(); }

double wsp_mesh_spacing(const wsp_mesh* mesh) {
  return mesh == nullptr ? 0.0 : mesh->mesh.spacing();
}

size_t wsp_mesh_nodes(const wsp_mesh* mesh, double* nodes, size_t capacity) {
  if (mesh == nullptr) return 0;
  const auto x = mesh->mesh.nodes();
  for (size_t i = 0; nodes != nullptr && i < capacity && i < x.size(); ++i) nodes[i] = x[i];
  return x.size();
}

wsp_status wsp_warp_create_fourier(const wsp_mesh* mesh, double a0, const double* cos_coeffs,
                                   size_t n_cos, const double* sin_coeffs, size_t n_sin,
                                   int m_fiber, wsp_warp** out) {
  if (mesh == nullptr || out == nullptr) return invalid("null handle");
  *out = nullptr;
  return guarded([&] {
    warpspec::WarpingSpec spec;
    spec.a0 = a0;
    spec.cos_coeffs = copy(cos_coeffs, n_cos);
    spec.sin_coeffs = copy(sin_coeffs, n_sin);
    *out = new wsp_warp{warpspec::sample_warping(spec, mesh->mesh, m_fiber)};
  });
}

wsp_status wsp_warp_create_samples(const wsp_mesh* mesh, const double* samples, size_t n,
                                   int m_fiber, wsp_warp** out) {
  if (mesh == nullptr || out == nullptr || samples == nullptr) return invalid("null handle");
  *out = nullptr;
  return guarded([&] {
    warpspec::WarpingSpec spec;
    spec.raw = copy(samples, n);
    *out = new wsp_warp{warpspec::sample_warping(spec, mesh->mesh, m_fiber)};
  });
}

void wsp_warp_destroy(wsp_warp* warp) { delete warp; }

wsp_status wsp_fiber_circle(double circumference, double mu_max, wsp_fiber** out) {
  if (out == nullptr) return invalid("null output handle");
  *out = nullptr;
  return guarded([&] { *out = new wsp_fiber{warpspec::circle_fiber(circumference, mu_max)}; });
}

wsp_status wsp_fiber_sphere(int l_max, wsp_fiber** out) {
  if (out == nullptr) return invalid("null output handle");
  *out = nullptr;
  return guarded([&] { *out = new wsp_fiber{warpspec::sphere_fiber(l_max)}; });
}

wsp_status wsp_fiber_discrete_circle(int n_f, double circumference, wsp_fiber** out) {
  if (out == nullptr) return invalid("null output handle");
  *out = nullptr;
  return guarded(
      [&] { *out = new wsp_fiber{warpspec::discrete_circle_fiber(n_f, circumference)}; });
}

wsp_status wsp_fiber_custom(const double* mu, const int* mult, size_t n, int fiber_dim,
                            wsp_fiber** out) {
  if (out == nullptr || (n > 0 && (mu == nullptr || mult == nullptr)))
    return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<warpspec::FiberLevel> levels;
    for (size_t i = 0; i < n; ++i) levels.push_back({mu[i], mult[i], std::nullopt});
    *out = new wsp_fiber{warpspec::custom_fiber(std::move(levels), fiber_dim)};
  });
}

size_t wsp_fiber_size(const wsp_fiber* fiber) {
  return fiber == nullptr ? 0 : fiber->spectrum.size();
}

wsp_status wsp_fiber_level(const wsp_fiber* fiber, size_t index, double* mu, int* mult) {
  if (fiber == nullptr || index >= fiber->spectrum.size()) return invalid("bad fiber index");
  if (mu != nullptr) *mu = fiber->spectrum[index].mu;
  if (mult != nullptr) *mult = fiber->spectrum[index].mult;
  last_error.clear();
  return WSP_OK;
}

void wsp_fiber_destroy(wsp_fiber* fiber) { delete fiber; }

wsp_status wsp_operator_eigenvalues(const wsp_warp* warp, double mu, double* values,
                                    size_t capacity, size_t* count) {
  if (warp == nullptr) return invalid("null warp handle");
  return guarded([&] {
    warpspec::SolveOptions opts;
    opts.want_vectors = false;
    const auto dec = warpspec::eigensolve(warpspec::assemble_operator(warp->field, mu), opts);
    for (size_t i = 0; values != nullptr && i < capacity && i < dec.size(); ++i)
      values[i] = dec.eigenvalues[i];
    if (count != nullptr) *count = dec.size();
  });
}

wsp_status wsp_eigenvalue_derivative(const wsp_warp* warp, double mu, size_t j, double r_a0,
                                     const double* r_cos, size_t n_cos, const double* r_sin,
                                     size_t n_sin, double* slope) {
  if (warp == nullptr || slope == nullptr) return invalid("null argument");
  return guarded([&] {
    warpspec::WarpingSpec spec;
    spec.a0 = r_a0;
    spec.cos_coeffs = copy(r_cos, n_cos);
    spec.sin_coeffs = copy(r_sin, n_sin);
    spec.require_positive = false;
    const auto r = warpspec::make_direction(spec, warp->field.mesh);
    const auto dec = warpspec::eigensolve(warpspec::assemble_operator(warp->field, mu));
    if (j >= dec.size())
      throw warpspec::Error(warpspec::ErrorCode::kInvalidArgument, "eigenvalue index out of range");
    *slope = warpspec::eigenvalue_derivative(warp->field, r, dec, j);
  });
}

}  // extern "C"
