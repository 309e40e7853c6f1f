/*
 * C interface to the kramers slip solver.
 *
 * All functions return a kramers_status; on failure a message describing the
 * error is available from kramers_last_error() on the calling thread.
 * Handles are opaque and must be released with the matching *_free call.
 * Dimensionless quantities are per unit velocity gradient G_v.
 */
#ifndef KRAMERS_H
#define KRAMERS_H

#include <stddef.h>

#if defined(_WIN32)
#  ifdef KRAMERS_BUILDING
#    define KRAMERS_API __declspec(dllexport)
#  else
#    define KRAMERS_API __declspec(dllimport)
#  endif
#else
#  define KRAMERS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kramers_status {
  KRAMERS_OK = 0,
  KRAMERS_ERR_INVALID_ARGUMENT = 1,
  KRAMERS_ERR_INVALID_ACCOMMODATION = 2,
  KRAMERS_ERR_NON_CONVERGENCE = 3,
  KRAMERS_ERR_TAIL_TOO_LARGE = 4,
  KRAMERS_ERR_REGULARITY = 5,
  KRAMERS_ERR_OSCILLATORY = 6,
  KRAMERS_ERR_MAX_ITERS = 7,
  KRAMERS_ERR_DIVERGENCE = 8,
  KRAMERS_ERR_FIT_UNSTABLE = 9,
  KRAMERS_ERR_IO = 10,
  KRAMERS_ERR_INTERNAL = 99
} kramers_status;

typedef struct kramers_quad_spec {
  double abs_tol;
  double rel_tol;
  int max_subdivisions;
  int semi_infinite_nodes;
} kramers_quad_spec;

typedef struct kramers_series kramers_series;
typedef struct kramers_oracle kramers_oracle;

typedef struct kramers_oracle_config {
  double q;
  int n_mu;
  double x_max;
  int n_x;
  int max_iters;
  double iter_tol;
  int use_aitken; /* 0: Krylov-accelerated sweeps (default), 1: Aitken */
} kramers_oracle_config;

KRAMERS_API const char* kramers_version(void);
KRAMERS_API const char* kramers_status_name(kramers_status status);
KRAMERS_API const char* kramers_last_error(void);

/* Defaults, with abs_tol/rel_tol taken from KRAMERS_QUAD_TOL when set. */
KRAMERS_API void kramers_quad_spec_default(kramers_quad_spec* spec);

/* Kernels. spec may be NULL for defaults; est_error may be NULL. */
KRAMERS_API kramers_status kramers_kernel_T(int n, double k, const kramers_quad_spec* spec, double* value,
                                            double* est_error);
KRAMERS_API kramers_status kramers_kernel_J(int n, double k, double k1, const kramers_quad_spec* spec,
                                            double* value, double* est_error);
KRAMERS_API kramers_status kramers_kernel_L(double k, const kramers_quad_spec* spec, double* value,
                                            double* est_error);
KRAMERS_API kramers_status kramers_kernel_phi0(double k, const kramers_quad_spec* spec, double* value,
                                               double* est_error);
KRAMERS_API kramers_status kramers_kernel_S(double k, double k1, const kramers_quad_spec* spec, double* value,
                                            double* est_error);

/* Fermi statistics. */
KRAMERS_API kramers_status kramers_fermi_moment(int n, double alpha, const kramers_quad_spec* spec, double* out);
KRAMERS_API kramers_status kramers_kv_prefactor(double alpha, const kramers_quad_spec* spec, double* out);

/* Series in the accommodation coefficient, solved to `order` on the default
 * k-grid truncated at k_max (pass 0 for the default 200). */
KRAMERS_API kramers_status kramers_series_solve(int order, double k_max, const kramers_quad_spec* spec,
                                                kramers_series** out);
KRAMERS_API void kramers_series_free(kramers_series* series);
KRAMERS_API int kramers_series_order(const kramers_series* series);
KRAMERS_API kramers_status kramers_series_coefficient(const kramers_series* series, int n, double* V);
KRAMERS_API kramers_status kramers_series_residual(const kramers_series* series, int n, double* residual);
/* JSON {"order":N,"V":[...],"residuals":[...]}. *length receives the size
 * without the terminator; the text is written only if it fits in capacity. */
KRAMERS_API kramers_status kramers_series_json(const kramers_series* series, char* buffer, size_t capacity,
                                               size_t* length);
KRAMERS_API kramers_status kramers_series_density(const kramers_series* series, int n, double k, double* E);
/* order < 0 uses every solved coefficient. */
KRAMERS_API kramers_status kramers_series_slip(const kramers_series* series, double q, int order,
                                               double* U_sl);
KRAMERS_API kramers_status kramers_series_slip_coefficient(const kramers_series* series, double alpha, double q,
                                                           int order, double* K_v);
KRAMERS_API kramers_status kramers_series_phi(const kramers_series* series, int n, double k, double mu,
                                              double* re, double* im);

/* Profiles. The slip term always uses every solved coefficient; `order`
 * truncates the continuous-spectrum sum. */
KRAMERS_API kramers_status kramers_profile_uc(const kramers_series* series, int n, double x, double q,
                                              double* out);
/* uc_out, when not NULL, receives (order+1) rows of nx values. */
KRAMERS_API kramers_status kramers_profile_evaluate(const kramers_series* series, double q, int order,
                                                    const double* x, size_t nx, double* U_out, double* uc_out);
KRAMERS_API kramers_status kramers_profile_wall(const kramers_series* series, double q, int order, double* out);
KRAMERS_API kramers_status kramers_profile_H(const kramers_series* series, double x, double alpha, double q,
                                             int order, double* H, double* kv_star);
KRAMERS_API kramers_status kramers_profile_slice(const kramers_series* series, double q, int order, double x,
                                                 double mu, double* h);
KRAMERS_API kramers_status kramers_profile_write_csv(const kramers_series* series, double q, int order,
                                                     const double* x, size_t nx, int include_components,
                                                     const char* path);

/* Discrete-ordinates oracle. */
KRAMERS_API void kramers_oracle_config_default(kramers_oracle_config* cfg);
KRAMERS_API kramers_status kramers_oracle_solve(const kramers_oracle_config* cfg, kramers_oracle** out);
KRAMERS_API void kramers_oracle_free(kramers_oracle* oracle);
KRAMERS_API kramers_status kramers_oracle_summary(const kramers_oracle* oracle, double* U_sl, double* U0,
                                                  double* bc_residual, int* iters);
KRAMERS_API size_t kramers_oracle_size(const kramers_oracle* oracle);
/* Copies min(capacity, size) nodes of x and U(x). */
KRAMERS_API kramers_status kramers_oracle_profile(const kramers_oracle* oracle, double* x, double* U,
                                                  size_t capacity);
KRAMERS_API kramers_status kramers_oracle_write_csv(const kramers_oracle* oracle, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* KRAMERS_H */
