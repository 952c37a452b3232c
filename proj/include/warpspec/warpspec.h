// Copyright The warpspec Authors
// SPDX-License-Identifier: Apache-2.0

/* C interface to the warpspec library. All handles are opaque; every call
 * that can fail returns a wsp_status and leaves a JSON description of the
 * failure in wsp_last_error() (per thread). */

#ifndef WARPSPEC_WARPSPEC_H_
#define WARPSPEC_WARPSPEC_H_

#include <stddef.h>

#if defined(_WIN32)
#define WSP_API __declspec(dllexport)
#else
#define WSP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wsp_status {
  WSP_OK = 0,
  WSP_DOMAIN_ERROR = 1,    /* numerical or mathematical failure */
  WSP_CONFIG_ERROR = 2,    /* malformed run configuration */
  WSP_INVALID_ARGUMENT = 3, /* null handle or bad pointer */
  WSP_INTERNAL_ERROR = 4
} wsp_status;

typedef enum wsp_base_kind { WSP_BASE_CIRCLE = 0, WSP_BASE_INTERVAL = 1 } wsp_base_kind;

typedef enum wsp_bc {
  WSP_BC_PERIODIC = 0,
  WSP_BC_DIRICHLET = 1,
  WSP_BC_NEUMANN = 2
} wsp_bc;

typedef struct wsp_mesh wsp_mesh;
typedef struct wsp_warp wsp_warp;
typedef struct wsp_fiber wsp_fiber;
typedef struct wsp_report wsp_report;

WSP_API const char* wsp_version(void);

/* JSON {"error", "message", "keys"} for the last failure on this thread,
 * or "" after a successful call. */
WSP_API const char* wsp_last_error(void);

/* Runs one subcommand ("spectrum", "assemble", "classify", "derivative",
 * "split", "trace", "validate") on a JSON config and returns the rendered
 * reports. */
WSP_API wsp_status wsp_run(const char* command, const char* config_json, wsp_report** out);
WSP_API size_t wsp_report_file_count(const wsp_report* report);
WSP_API const char* wsp_report_file_name(const wsp_report* report, size_t index);
WSP_API const char* wsp_report_file_contents(const wsp_report* report, size_t index,
                                             size_t* length);
/* 1 pass, 0 fail, -1 when the command has no verdict. */
WSP_API int wsp_report_verdict(const wsp_report* report);
WSP_API void wsp_report_destroy(wsp_report* report);

WSP_API wsp_status wsp_mesh_create(wsp_base_kind kind, double length, int n, wsp_bc bc,
                                   wsp_mesh** out);
WSP_API void wsp_mesh_destroy(wsp_mesh* mesh);
WSP_API size_t wsp_mesh_size(const wsp_mesh* mesh);
WSP_API double wsp_mesh_spacing(const wsp_mesh* mesh);
/* Copies up to `capacity` node coordinates; returns the number of nodes. */
WSP_API size_t wsp_mesh_nodes(const wsp_mesh* mesh, double* nodes, size_t capacity);

/* f = a0 + sum a_k cos(2 pi k x / L) + b_k sin(2 pi k x / L), k = 1.. */
WSP_API wsp_status wsp_warp_create_fourier(const wsp_mesh* mesh, double a0, const double* cos_coeffs,
                                           size_t n_cos, const double* sin_coeffs, size_t n_sin,
                                           int m_fiber, wsp_warp** out);
WSP_API wsp_status wsp_warp_create_samples(const wsp_mesh* mesh, const double* samples, size_t n,
                                           int m_fiber, wsp_warp** out);
WSP_API void wsp_warp_destroy(wsp_warp* warp);

WSP_API wsp_status wsp_fiber_circle(double circumference, double mu_max, wsp_fiber** out);
WSP_API wsp_status wsp_fiber_sphere(int l_max, wsp_fiber** out);
WSP_API wsp_status wsp_fiber_discrete_circle(int n_f, double circumference, wsp_fiber** out);
WSP_API wsp_status wsp_fiber_custom(const double* mu, const int* mult, size_t n, int fiber_dim,
                                    wsp_fiber** out);
WSP_API size_t wsp_fiber_size(const wsp_fiber* fiber);
WSP_API wsp_status wsp_fiber_level(const wsp_fiber* fiber, size_t index, double* mu, int* mult);
WSP_API void wsp_fiber_destroy(wsp_fiber* fiber);

/* Lowest eigenvalues of L^f_mu. Writes min(capacity, N) values and stores
 * N in *count. */
WSP_API wsp_status wsp_operator_eigenvalues(const wsp_warp* warp, double mu, double* values,
                                            size_t capacity, size_t* count);

/* Slope of eigenvalue j of L^f_mu along f + t r at t = 0, with r given by
 * Fourier coefficients. Fails with a domain error if j is degenerate. */
WSP_API wsp_status wsp_eigenvalue_derivative(const wsp_warp* warp, double mu, size_t j, double r_a0,
                                             const double* r_cos, size_t n_cos,
                                             const double* r_sin, size_t n_sin, double* slope);

#ifdef __cplusplus
}
#endif

#endif /* WARPSPEC_WARPSPEC_H_ */
