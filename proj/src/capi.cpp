#include "kramers/kramers.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "kramers/error.hpp"
#include "kramers/fermi.hpp"
#include "kramers/kernels.hpp"
#include "kramers/oracle.hpp"
#include "kramers/profile.hpp"
#include "kramers/series.hpp"

#ifndef KRAMERS_VERSION
#define KRAMERS_VERSION "0.0.0"
#endif

struct kramers_series {
  kramers::series::SeriesSolution solution;
  kramers::QuadratureSpec spec;
};

struct kramers_oracle {
  kramers::oracle::OracleSolution solution;
};

namespace {

thread_local std::string g_last_error;

kramers::QuadratureSpec to_spec(const kramers_quad_spec* s) {
  if (!s) return kramers::QuadratureSpec::from_environment();
  kramers::QuadratureSpec spec;
  spec.abs_tol = s->abs_tol;
  spec.rel_tol = s->rel_tol;
  spec.max_subdivisions = s->max_subdivisions;
  spec.semi_infinite_nodes = s->semi_infinite_nodes;
  spec.validate();
  return spec;
}

template <class F>
kramers_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return KRAMERS_OK;
  } catch (const kramers::Error& e) {
    g_last_error = e.what();
    return static_cast<kramers_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return KRAMERS_ERR_INTERNAL;
}

void require(bool ok, const char* what) {
  if (!ok) throw kramers::Error(kramers::ErrorCode::kInvalidArgument, what);
}

kramers_status kernel_out(const kramers::KernelValue& v, double* value, double* est_error) {
  *value = v.value;
  if (est_error) *est_error = v.est_error;
  return KRAMERS_OK;
}

int resolve_order(const kramers_series* s, int order) {
  const int solved = s->solution.coefficients.order;
  if (order < 0) return solved;
  require(order <= solved, "order exceeds the solved series");
  return order;
}

std::ofstream open_output(const char* path) {
  require(path != nullptr, "path is null");
  std::ofstream out(path);
  if (!out) throw kramers::Error(kramers::ErrorCode::kIo, std::string("cannot open ") + path + " for writing");
  return out;
}

}  // namespace

extern "C" {

const char* kramers_version(void) { return KRAMERS_VERSION; }

const char* kramers_status_name(kramers_status status) {
  if (status == KRAMERS_OK) return "Ok";
  if (status == KRAMERS_ERR_INTERNAL) return "Internal";
  return kramers::to_string(static_cast<kramers::ErrorCode>(status));
}

const char* kramers_last_error(void) { return g_last_error.c_str(); }

void kramers_quad_spec_default(kramers_quad_spec* spec) {
  if (!spec) return;
  const auto s = kramers::QuadratureSpec::from_environment();
  spec->abs_tol = s.abs_tol;
  spec->rel_tol = s.rel_tol;
  spec->max_subdivisions = s.max_subdivisions;
  spec->semi_infinite_nodes = s.semi_infinite_nodes;
}

kramers_status kramers_kernel_T(int n, double k, const kramers_quad_spec* spec, double* value, double* est_error) {
  return guarded([&] {
    require(value, "value is null");
    kernel_out(kramers::kernels::eval_T(n, k, to_spec(spec)), value, est_error);
  });
}

kramers_status kramers_kernel_J(int n, double k, double k1, const kramers_quad_spec* spec, double* value,
                                double* est_error) {
  return guarded([&] {
    require(value, "value is null");
    kernel_out(kramers::kernels::eval_J(n, k, k1, to_spec(spec)), value, est_error);
  });
}

kramers_status kramers_kernel_L(double k, const kramers_quad_spec* spec, double* value, double* est_error) {
  return guarded([&] {
    require(value, "value is null");
    kernel_out(kramers::kernels::eval_L(k, to_spec(spec)), value, est_error);
  });
}

kramers_status kramers_kernel_phi0(double k, const kramers_quad_spec* spec, double* value, double* est_error) {
  return guarded([&] {
    require(value, "value is null");
    kernel_out(kramers::kernels::eval_phi0(k, to_spec(spec)), value, est_error);
  });
}

kramers_status kramers_kernel_S(double k, double k1, const kramers_quad_spec* spec, double* value,
                                double* est_error) {
  return guarded([&] {
    require(value, "value is null");
    kernel_out(kramers::kernels::eval_S(k, k1, to_spec(spec)), value, est_error);
  });
}

kramers_status kramers_fermi_moment(int n, double alpha, const kramers_quad_spec* spec, double* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = kramers::fermi::fermi_log_moment(n, {alpha}, to_spec(spec));
  });
}

kramers_status kramers_kv_prefactor(double alpha, const kramers_quad_spec* spec, double* out) {
  return guarded([&] {
    require(out, "out is null");
    *out = kramers::fermi::kv_prefactor({alpha}, to_spec(spec));
  });
}

kramers_status kramers_series_solve(int order, double k_max, const kramers_quad_spec* spec,
                                    kramers_series** out) {
  return guarded([&] {
    require(out, "out is null");
    *out = nullptr;
    auto handle = std::make_unique<kramers_series>();
    handle->spec = to_spec(spec);
    auto grid = std::make_shared<const kramers::series::KGrid>(
        kramers::series::KGrid::make_default(k_max > 0.0 ? k_max : 200.0));
    handle->solution = kramers::series::solve_series(order, grid, handle->spec);
    *out = handle.release();
  });
}

void kramers_series_free(kramers_series* series) { delete series; }

int kramers_series_order(const kramers_series* series) {
  return series ? series->solution.coefficients.order : -1;
}

kramers_status kramers_series_coefficient(const kramers_series* s, int n, double* V) {
  return guarded([&] {
    require(s && V, "null argument");
    require(n >= 0 && n <= s->solution.coefficients.order, "coefficient index out of range");
    *V = s->solution.coefficients.V[n];
  });
}

kramers_status kramers_series_residual(const kramers_series* s, int n, double* residual) {
  return guarded([&] {
    require(s && residual, "null argument");
    require(n >= 0 && n <= s->solution.coefficients.order, "residual index out of range");
    *residual = s->solution.coefficients.residuals[n];
  });
}

kramers_status kramers_series_json(const kramers_series* s, char* buffer, size_t capacity, size_t* length) {
  return guarded([&] {
    require(s && length, "null argument");
    const std::string text = s->solution.coefficients.to_json();
    *length = text.size();
    if (buffer && capacity > text.size()) std::memcpy(buffer, text.c_str(), text.size() + 1);
  });
}

kramers_status kramers_series_density(const kramers_series* s, int n, double k, double* E) {
  return guarded([&] {
    require(s && E, "null argument");
    require(n >= 0 && n <= s->solution.coefficients.order, "density index out of range");
    *E = s->solution.densities[n](k);
  });
}

kramers_status kramers_series_slip(const kramers_series* s, double q, int order, double* U_sl) {
  return guarded([&] {
    require(s && U_sl, "null argument");
    const auto c = s->solution.coefficients.truncated(resolve_order(s, order));
    *U_sl = kramers::series::slip_velocity(q, c);
  });
}

kramers_status kramers_series_slip_coefficient(const kramers_series* s, double alpha, double q, int order,
                                               double* K_v) {
  return guarded([&] {
    require(s && K_v, "null argument");
    const auto c = s->solution.coefficients.truncated(resolve_order(s, order));
    *K_v = kramers::series::slip_coefficient(alpha, q, c, s->spec);
  });
}

kramers_status kramers_series_phi(const kramers_series* s, int n, double k, double mu, double* re, double* im) {
  return guarded([&] {
    require(s && re && im, "null argument");
    const auto v = kramers::series::spectral_Phi(n, k, mu, s->solution.densities, s->solution.coefficients,
                                                 s->spec);
    *re = v.real();
    *im = v.imag();
  });
}

kramers_status kramers_profile_uc(const kramers_series* s, int n, double x, double q, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    require(n >= 0 && n <= s->solution.coefficients.order, "order out of range");
    *out = kramers::profile::uc_component(s->solution.densities[n], x, q, s->spec);
  });
}

kramers_status kramers_profile_evaluate(const kramers_series* s, double q, int order, const double* x, size_t nx,
                                        double* U_out, double* uc_out) {
  return guarded([&] {
    require(s && (x || nx == 0) && (U_out || nx == 0), "null argument");
    kramers::profile::ProfileRequest req;
    req.q = q;
    req.order = resolve_order(s, order);
    req.x_nodes.assign(x, x + nx);
    req.include_components = uc_out != nullptr;
    const auto p = kramers::profile::velocity_profile(req, s->solution.coefficients, s->solution.densities,
                                                      s->spec);
    std::copy(p.U_over_Gv.begin(), p.U_over_Gv.end(), U_out);
    if (uc_out)
      for (std::size_t n = 0; n < p.Uc_components->size(); ++n)
        std::copy((*p.Uc_components)[n].begin(), (*p.Uc_components)[n].end(), uc_out + n * nx);
  });
}

kramers_status kramers_profile_wall(const kramers_series* s, double q, int order, double* out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = kramers::profile::wall_velocity(q, s->solution.coefficients, s->solution.densities, s->spec,
                                           resolve_order(s, order));
  });
}

kramers_status kramers_profile_H(const kramers_series* s, double x, double alpha, double q, int order, double* H,
                                 double* kv_star) {
  return guarded([&] {
    require(s && H, "null argument");
    const int n = resolve_order(s, order);
    *H = kramers::profile::profile_H(x, alpha, q, s->solution.coefficients, s->solution.densities, s->spec, n);
    if (kv_star) *kv_star = kramers::fermi::kv_prefactor({alpha}, s->spec) * *H;
  });
}

kramers_status kramers_profile_slice(const kramers_series* s, double q, int order, double x, double mu,
                                     double* h) {
  return guarded([&] {
    require(s && h, "null argument");
    const auto E = kramers::profile::assemble_density(q, s->solution.densities, resolve_order(s, order));
    *h = kramers::profile::distribution_slice(x, mu, E, s->spec);
  });
}

kramers_status kramers_profile_write_csv(const kramers_series* s, double q, int order, const double* x,
                                         size_t nx, int include_components, const char* path) {
  return guarded([&] {
    require(s && (x || nx == 0), "null argument");
    kramers::profile::ProfileRequest req;
    req.q = q;
    req.order = resolve_order(s, order);
    req.x_nodes.assign(x, x + nx);
    req.include_components = include_components != 0;
    const auto p = kramers::profile::velocity_profile(req, s->solution.coefficients, s->solution.densities,
                                                      s->spec);
    auto out = open_output(path);
    kramers::profile::write_profile_csv(out, p);
  });
}

void kramers_oracle_config_default(kramers_oracle_config* cfg) {
  if (!cfg) return;
  const kramers::oracle::OracleConfig d;
  cfg->q = d.q;
  cfg->n_mu = d.n_mu;
  cfg->x_max = d.x_max;
  cfg->n_x = d.n_x;
  cfg->max_iters = d.max_iters;
  cfg->iter_tol = d.iter_tol;
  cfg->use_aitken = 0;
}

kramers_status kramers_oracle_solve(const kramers_oracle_config* cfg, kramers_oracle** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = nullptr;
    kramers::oracle::OracleConfig c;
    c.q = cfg->q;
    c.n_mu = cfg->n_mu;
    c.x_max = cfg->x_max;
    c.n_x = cfg->n_x;
    c.max_iters = cfg->max_iters;
    c.iter_tol = cfg->iter_tol;
    c.acceleration = cfg->use_aitken ? kramers::oracle::Acceleration::kAitken
                                     : kramers::oracle::Acceleration::kKrylov;
    auto handle = std::make_unique<kramers_oracle>();
    handle->solution = kramers::oracle::solve_halfspace(c);
    *out = handle.release();
  });
}

void kramers_oracle_free(kramers_oracle* oracle) { delete oracle; }

kramers_status kramers_oracle_summary(const kramers_oracle* o, double* U_sl, double* U0, double* bc_residual,
                                      int* iters) {
  return guarded([&] {
    require(o, "null argument");
    if (U_sl) *U_sl = o->solution.U_sl_extracted;
    if (U0) *U0 = o->solution.U_x.front();
    if (bc_residual) *bc_residual = o->solution.bc_residual;
    if (iters) *iters = o->solution.iters_used;
  });
}

size_t kramers_oracle_size(const kramers_oracle* o) { return o ? o->solution.x_nodes.size() : 0; }

kramers_status kramers_oracle_profile(const kramers_oracle* o, double* x, double* U, size_t capacity) {
  return guarded([&] {
    require(o, "null argument");
    const std::size_t n = std::min(capacity, o->solution.x_nodes.size());
    if (x) std::copy_n(o->solution.x_nodes.begin(), n, x);
    if (U) std::copy_n(o->solution.U_x.begin(), n, U);
  });
}

kramers_status kramers_oracle_write_csv(const kramers_oracle* o, const char* path) {
  return guarded([&] {
    require(o, "null argument");
    auto out = open_output(path);
    kramers::oracle::write_field_csv(out, o->solution);
  });
}

}  // extern "C"
