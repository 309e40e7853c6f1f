#include "kramers/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "format.hpp"
#include "kramers/error.hpp"
#include "kramers/quadrature.hpp"

namespace kramers::oracle {

void OracleConfig::validate() const {
  if (!(q > 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidAccommodation, "q must lie in (0,1]");
  if (n_mu < 8) throw Error(ErrorCode::kInvalidArgument, "n_mu must be >= 8");
  if (!(x_max >= 20.0) || !std::isfinite(x_max)) throw Error(ErrorCode::kInvalidArgument, "x_max must be >= 20");
  if (n_x < 20) throw Error(ErrorCode::kInvalidArgument, "n_x must be >= 20");
  if (max_iters < 1) throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  if (!(iter_tol > 0.0)) throw Error(ErrorCode::kInvalidArgument, "iter_tol must be positive");
}

namespace {

// Cell widths growing geometrically from h0 = 0.6/n_x at the wall.
std::vector<double> wall_refined_nodes(double x_max, int n) {
  const double h0 = 0.6 / n;
  std::vector<double> x(n + 1, 0.0);
  if (h0 * n >= x_max) {
    for (int i = 0; i <= n; ++i) x[i] = x_max * i / n;
    return x;
  }
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double r = 0.5 * (lo + hi);
    (h0 * (std::pow(r, n) - 1.0) / (r - 1.0) > x_max ? hi : lo) = r;
  }
  const double r = 0.5 * (lo + hi);
  double h = h0;
  for (int i = 1; i <= n; ++i, h *= r) x[i] = x[i - 1] + h;
  x[n] = x_max;
  return x;
}

// The affine sweep map U -> K(U) with precomputed characteristic factors.
class Sweeper {
 public:
  explicit Sweeper(const OracleConfig& cfg)
      : q_(cfg.q), x_(wall_refined_nodes(cfg.x_max, cfg.n_x)), mu_(gauss_legendre(cfg.n_mu, 0.0, 1.0)) {
    const std::size_t nc = x_.size() - 1, nm = mu_.nodes.size();
    decay_.resize(nc * nm);
    entry_.resize(nc * nm);
    exit_.resize(nc * nm);
    for (std::size_t i = 0; i < nc; ++i) {
      for (std::size_t j = 0; j < nm; ++j) {
        // Source linear in the path variable: entry value a, exit value b.
        //   h_out = h_in e + a (g - e) + b (1 - g),  g = (1 - e)/tau.
        const double tau = (x_[i + 1] - x_[i]) / mu_.nodes[j];
        const double e = std::exp(-tau);
        const double g = tau > 1e-6 ? -std::expm1(-tau) / tau : 1.0 - tau / 2.0 + tau * tau / 6.0;
        decay_[i * nm + j] = e;
        entry_[i * nm + j] = g - e;
        exit_[i * nm + j] = 1.0 - g;
      }
    }
    moment_.resize(nm);
    for (std::size_t j = 0; j < nm; ++j)
      moment_[j] = 0.375 * mu_.weights[j] * (1.0 - mu_.nodes[j] * mu_.nodes[j]);
    for (std::size_t i = 0; i < x_.size(); ++i)
      if (x_[i] >= 0.6 * cfg.x_max && x_[i] <= 0.9 * cfg.x_max) window_.push_back(i);
    x_max_ = cfg.x_max;
  }

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const Rule& mu() const { return mu_; }

  double fit(const std::vector<double>& U) const {
    double s = 0.0;
    for (std::size_t i : window_) s += U[i] - x_[i];
    return s / static_cast<double>(window_.size());
  }

  // One transport sweep. `affine` = false drops the constant part (the
  // inflow's 2(x_max + mu) and the -x in the fit), giving the linear map.
  std::vector<double> apply(const std::vector<double>& U, bool affine, std::vector<double>* hp_out = nullptr,
                            std::vector<double>* hm_out = nullptr) const {
    const std::size_t nx = x_.size(), nm = mu_.nodes.size();
    double ufit = 0.0;
    for (std::size_t i : window_) ufit += U[i] - (affine ? x_[i] : 0.0);
    ufit /= static_cast<double>(window_.size());

    std::vector<double> hm(nx * nm), hp(nx * nm);
    for (std::size_t j = 0; j < nm; ++j)
      hm[(nx - 1) * nm + j] = 2.0 * ufit + (affine ? 2.0 * (x_max_ + mu_.nodes[j]) : 0.0);
    for (std::size_t i = nx - 1; i-- > 0;) {
      const double a = 2.0 * U[i + 1], b = 2.0 * U[i];
      for (std::size_t j = 0; j < nm; ++j) {
        const std::size_t c = i * nm + j;
        hm[i * nm + j] = hm[(i + 1) * nm + j] * decay_[c] + a * entry_[c] + b * exit_[c];
      }
    }
    for (std::size_t j = 0; j < nm; ++j) hp[j] = (1.0 - q_) * hm[j];
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const double a = 2.0 * U[i], b = 2.0 * U[i + 1];
      for (std::size_t j = 0; j < nm; ++j) {
        const std::size_t c = i * nm + j;
        hp[(i + 1) * nm + j] = hp[i * nm + j] * decay_[c] + a * entry_[c] + b * exit_[c];
      }
    }
    std::vector<double> out(nx);
    for (std::size_t i = 0; i < nx; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < nm; ++j) s += moment_[j] * (hp[i * nm + j] + hm[i * nm + j]);
      out[i] = s;
    }
    if (hp_out) *hp_out = std::move(hp);
    if (hm_out) *hm_out = std::move(hm);
    return out;
  }

 private:
  double q_;
  double x_max_ = 0.0;
  std::vector<double> x_;
  Rule mu_;
  std::vector<double> decay_, entry_, exit_, moment_;
  std::vector<std::size_t> window_;
};

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Restarted GMRES on (I - A) U = K(0), A the linear part of the sweep.
std::vector<double> solve_krylov(const Sweeper& sw, const OracleConfig& cfg, int& iters, double& update) {
  const std::size_t n = sw.size();
  const std::vector<double> zero(n, 0.0);
  const std::vector<double> b = sw.apply(zero, true);
  std::vector<double> U(n);
  for (std::size_t i = 0; i < n; ++i) U[i] = sw.x()[i] + 0.5;
  const int restart = 120;
  iters = 0;
  for (;;) {
    // r = K(U) - U
    std::vector<double> KU = sw.apply(U, true);
    ++iters;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = KU[i] - U[i];
    update = sup_diff(KU, U);
    if (update < cfg.iter_tol) return U;
    if (iters >= cfg.max_iters)
      throw Error(ErrorCode::kMaxItersExceeded, "oracle did not converge within max_iters sweeps");

    const double beta = std::sqrt(dot(r, r));
    std::vector<std::vector<double>> basis{r};
    for (double& v : basis[0]) v /= beta;
    std::vector<std::vector<double>> hess;
    std::vector<double> cs, sn, g{beta};
    int m = 0;
    for (; m < restart && iters < cfg.max_iters; ++m) {
      std::vector<double> w = sw.apply(basis[m], false);
      ++iters;
      for (std::size_t i = 0; i < n; ++i) w[i] = basis[m][i] - w[i];
      std::vector<double> h(m + 2, 0.0);
      for (int k = 0; k <= m; ++k) {  // modified Gram-Schmidt, two passes
        h[k] = dot(w, basis[k]);
        for (std::size_t i = 0; i < n; ++i) w[i] -= h[k] * basis[k][i];
      }
      for (int k = 0; k <= m; ++k) {
        const double c = dot(w, basis[k]);
        h[k] += c;
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * basis[k][i];
      }
      h[m + 1] = std::sqrt(dot(w, w));
      const double wnorm = h[m + 1];
      for (int k = 0; k < m; ++k) {
        const double t = cs[k] * h[k] + sn[k] * h[k + 1];
        h[k + 1] = -sn[k] * h[k] + cs[k] * h[k + 1];
        h[k] = t;
      }
      const double den = std::hypot(h[m], h[m + 1]);
      cs.push_back(h[m] / den);
      sn.push_back(h[m + 1] / den);
      h[m] = den;
      h[m + 1] = 0.0;
      g.push_back(-sn[m] * g[m]);
      g[m] *= cs[m];
      hess.push_back(std::move(h));
      if (std::abs(g[m + 1]) < 0.1 * cfg.iter_tol || wnorm == 0.0) {
        ++m;
        break;
      }
      for (double& v : w) v /= wnorm;
      basis.push_back(std::move(w));
    }
    // Back substitution for the least-squares coefficients.
    std::vector<double> y(m, 0.0);
    for (int k = m - 1; k >= 0; --k) {
      double s = g[k];
      for (int j = k + 1; j < m; ++j) s -= hess[j][k] * y[j];
      y[k] = s / hess[k][k];
    }
    for (int k = 0; k < m; ++k)
      for (std::size_t i = 0; i < n; ++i) U[i] += y[k] * basis[k][i];
  }
}

std::vector<double> solve_aitken(const Sweeper& sw, const OracleConfig& cfg, int& iters, double& update) {
  const std::size_t n = sw.size();
  std::vector<double> U(n), prev1, prev2;
  for (std::size_t i = 0; i < n; ++i) U[i] = sw.x()[i] + 0.5;
  double last_update = INFINITY;
  int growth = 0;
  for (iters = 1; iters <= cfg.max_iters; ++iters) {
    std::vector<double> next = sw.apply(U, true);
    update = sup_diff(next, U);
    if (!std::isfinite(update))
      throw Error(ErrorCode::kDivergenceDetected, "oracle iteration produced non-finite values");
    growth = update > last_update ? growth + 1 : 0;
    if (growth >= 10) throw Error(ErrorCode::kDivergenceDetected, "oracle update grew for 10 consecutive sweeps");
    last_update = update;
    prev2 = std::move(prev1);
    prev1 = std::move(U);
    U = std::move(next);
    if (update < cfg.iter_tol) return U;
    if (iters % 20 == 0 && !prev2.empty()) {
      for (std::size_t i = 0; i < n; ++i) {
        const double d1 = U[i] - prev1[i], d2 = U[i] - 2.0 * prev1[i] + prev2[i];
        if (std::abs(d2) > 1e-14 * std::max(1.0, std::abs(U[i]))) U[i] -= d1 * d1 / d2;
      }
      prev1.clear();
      prev2.clear();
    }
  }
  throw Error(ErrorCode::kMaxItersExceeded, "oracle did not converge within max_iters sweeps");
}

}  // namespace

OracleSolution solve_halfspace(const OracleConfig& cfg) {
  cfg.validate();
  const Sweeper sw(cfg);
  OracleSolution sol;
  sol.q = cfg.q;
  std::vector<double> U = cfg.acceleration == Acceleration::kKrylov
                              ? solve_krylov(sw, cfg, sol.iters_used, sol.final_update)
                              : solve_aitken(sw, cfg, sol.iters_used, sol.final_update);

  std::vector<double> hp, hm;
  sw.apply(U, true, &hp, &hm);
  const std::size_t nm = sw.mu().nodes.size();
  for (std::size_t j = nm; j-- > 0;) {
    sol.mu_nodes.push_back(-sw.mu().nodes[j]);
    sol.mu_weights.push_back(sw.mu().weights[j]);
  }
  for (std::size_t j = 0; j < nm; ++j) {
    sol.mu_nodes.push_back(sw.mu().nodes[j]);
    sol.mu_weights.push_back(sw.mu().weights[j]);
  }
  sol.x_nodes = sw.x();
  sol.h_field.resize(sw.size());
  for (std::size_t i = 0; i < sw.size(); ++i) {
    auto& row = sol.h_field[i];
    row.reserve(2 * nm);
    for (std::size_t j = nm; j-- > 0;) row.push_back(hm[i * nm + j]);
    for (std::size_t j = 0; j < nm; ++j) row.push_back(hp[i * nm + j]);
  }
  sol.U_x = std::move(U);
  sol.bc_residual = bc_residual(sol);
  sol.U_sl_extracted = extract_slip(sol);
  return sol;
}

double extract_slip(const OracleSolution& sol) { return extract_slip(sol, 0.6, 0.9); }

double extract_slip(const OracleSolution& sol, double lo, double hi) {
  if (sol.x_nodes.empty() || sol.U_x.size() != sol.x_nodes.size())
    throw Error(ErrorCode::kInvalidArgument, "oracle solution has no field");
  const double x_max = sol.x_nodes.back();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < sol.x_nodes.size(); ++i) {
    const double x = sol.x_nodes[i];
    if (x < lo * x_max || x > hi * x_max) continue;
    const double y = sol.U_x[i] - x;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw Error(ErrorCode::kFitUnstable, "fit window holds fewer than two nodes");
  const double den = n * sxx - sx * sx;
  const double slope = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
  if (std::abs(slope) > 1e-4)
    throw Error(ErrorCode::kFitUnstable, "U(x) - x is not flat in the fit window (slope " +
                                             std::to_string(slope) + ")");
  return sy / n;
}

double bc_residual(const OracleSolution& sol) {
  if (sol.h_field.empty()) throw Error(ErrorCode::kInvalidArgument, "oracle solution has no field");
  const auto& wall = sol.h_field.front();
  const std::size_t nm = wall.size() / 2;
  double r = 0.0;
  // Column nm + j holds +mu_j, column nm - 1 - j holds -mu_j.
  for (std::size_t j = 0; j < nm; ++j)
    r = std::max(r, std::abs(wall[nm + j] - (1.0 - sol.q) * wall[nm - 1 - j]));
  return r;
}

void write_field_csv(std::ostream& out, const OracleSolution& sol) {
  out << "x,U";
  for (double mu : sol.mu_nodes) out << ",h_mu=" << detail::format_number(mu);
  out << '\n';
  for (std::size_t i = 0; i < sol.x_nodes.size(); ++i) {
    out << detail::format_number(sol.x_nodes[i]) << ',' << detail::format_number(sol.U_x[i]);
    for (double h : sol.h_field[i]) out << ',' << detail::format_number(h);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing oracle field CSV");
}

}  // namespace kramers::oracle
