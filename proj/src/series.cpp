#include "kramers/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "kramers/error.hpp"
#include "kramers/fermi.hpp"
#include "kramers/kernels.hpp"
#include "parallel.hpp"

namespace kramers::series {

namespace kn = kramers::kernels;
using std::numbers::pi;

// ---------------------------------------------------------------- KGrid

KGrid KGrid::make_default(double k_max) {
  if (!(k_max > 10.0) || !std::isfinite(k_max))
    throw Error(ErrorCode::kInvalidArgument, "k_max must be finite and > 10");
  std::vector<double> edges{0.0, 0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 10.0};
  const int tail_panels = static_cast<int>(std::ceil(std::log(k_max / 10.0) / std::log(1.35)));
  const double ratio = std::pow(k_max / 10.0, 1.0 / tail_panels);
  for (int i = 1; i < tail_panels; ++i) edges.push_back(10.0 * std::pow(ratio, i));
  edges.push_back(k_max);
  return from_edges(std::move(edges));
}

KGrid KGrid::from_edges(std::vector<double> edges, int points) {
  if (edges.size() < 2 || edges.front() != 0.0)
    throw Error(ErrorCode::kInvalidArgument, "grid edges must start at 0 and contain a panel");
  if (points < 3) throw Error(ErrorCode::kInvalidArgument, "need at least 3 nodes per panel");
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1]) || !std::isfinite(edges[i]))
      throw Error(ErrorCode::kInvalidArgument, "grid edges must be finite and strictly increasing");

  KGrid g;
  g.edges_ = edges;
  g.nodes_.push_back(0.0);
  g.weights_.push_back(0.0);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const Rule r = gauss_lobatto(points, edges[p], edges[p + 1]);
    g.weights_.back() += r.weights.front();
    for (int i = 1; i < points; ++i) {
      g.nodes_.push_back(i == points - 1 ? edges[p + 1] : r.nodes[i]);
      g.weights_.push_back(r.weights[i]);
    }
  }
  if (g.nodes_.size() < 64)
    throw Error(ErrorCode::kInvalidArgument, "k-grid needs at least 64 nodes");
  return g;
}

long KGrid::find_node(double k) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), k);
  if (it != nodes_.end() && *it == k) return static_cast<long>(it - nodes_.begin());
  return -1;
}

// ---------------------------------------------------------------- TailModel

double TailModel::operator()(double k) const {
  const double l = std::log(k);
  return (a * l + b + (c * l + d) / k) / (k * k);
}

double TailModel::derivative(double k) const {
  const double l = std::log(k);
  const double g = a * l + b + (c * l + d) / k;
  const double dg = a / k + (c - c * l - d) / (k * k);
  return dg / (k * k) - 2.0 * g / (k * k * k);
}

double TailModel::integral_from(double K) const {
  const double l = std::log(K);
  return (a * (l + 1.0) + b) / K + (c * (2.0 * l + 1.0) / 4.0 + d / 2.0) / (K * K);
}

namespace {

// Fits k^2 E(k) = A u + B + (C u + D) w with u = ln(k/kb), w = kb/k, which
// keeps the 4x4 system well scaled, then maps back to (a, b, c, d).
TailModel fit_tail(std::span<const double> ks, std::span<const double> es) {
  TailModel m;
  const std::size_t n = ks.size();
  const double kb = ks.back();
  if (n < 4) {
    const double ga = es[n - 2] * ks[n - 2] * ks[n - 2], gb = es[n - 1] * kb * kb;
    m.a = (gb - ga) / (std::log(kb) - std::log(ks[n - 2]));
    m.b = gb - m.a * std::log(kb);
    return m;
  }
  double A[4][5];
  for (std::size_t i = 0; i < 4; ++i) {
    const double k = ks[n - 4 + i], u = std::log(k / kb), w = kb / k;
    A[i][0] = u;
    A[i][1] = 1.0;
    A[i][2] = u * w;
    A[i][3] = w;
    A[i][4] = es[n - 4 + i] * k * k;
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int j = col; j < 5; ++j) A[r][j] -= f * A[col][j];
    }
  }
  double x[4];
  for (int r = 3; r >= 0; --r) {
    double v = A[r][4];
    for (int j = r + 1; j < 4; ++j) v -= A[r][j] * x[j];
    x[r] = v / A[r][r];
  }
  const double lb = std::log(kb);
  m.a = x[0];
  m.b = x[1] - x[0] * lb;
  m.c = x[2] * kb;
  m.d = (x[3] - x[2] * lb) * kb;
  return m;
}

}  // namespace

// ---------------------------------------------------------------- SpectralDensity

SpectralDensity::SpectralDensity(int order, std::shared_ptr<const KGrid> grid, std::vector<double> values)
    : order_(order), grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw Error(ErrorCode::kInvalidArgument, "spectral density needs a grid");
  const auto k = grid_->nodes();
  const std::size_t n = k.size();
  if (values_.size() != n)
    throw Error(ErrorCode::kInvalidArgument, "spectral density size does not match its grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error(ErrorCode::kRegularityCheckFailed, "spectral density is not finite");

  const auto edges = grid_->edges();
  const std::size_t n_fit = std::min<std::size_t>(4, edges.size() - 1);
  std::vector<double> fit_k(edges.end() - n_fit, edges.end()), fit_e;
  for (double ke : fit_k) fit_e.push_back(values_[grid_->find_node(ke)]);
  tail_ = fit_tail(fit_k, fit_e);

  // Clamped spline: E'(0) = 0 by evenness, E'(k_max) from the tail model.
  const double slope_end = tail_.derivative(k.back());
  std::vector<double> diag(n), upper(n), rhs(n);
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = k[i + 1] - k[i];
  diag[0] = h[0] / 3.0;
  upper[0] = h[0] / 6.0;
  rhs[0] = (values_[1] - values_[0]) / h[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    diag[i] = (h[i - 1] + h[i]) / 3.0;
    upper[i] = h[i] / 6.0;
    rhs[i] = (values_[i + 1] - values_[i]) / h[i] - (values_[i] - values_[i - 1]) / h[i - 1];
  }
  diag[n - 1] = h[n - 2] / 3.0;
  rhs[n - 1] = slope_end - (values_[n - 1] - values_[n - 2]) / h[n - 2];
  // Thomas algorithm; lower diagonal equals upper shifted by one.
  for (std::size_t i = 1; i < n; ++i) {
    const double m = upper[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  second_derivs_.assign(n, 0.0);
  second_derivs_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    second_derivs_[i] = (rhs[i] - upper[i] * second_derivs_[i + 1]) / diag[i];
}

double SpectralDensity::operator()(double k) const {
  k = std::abs(k);
  const auto nodes = grid_->nodes();
  if (k >= nodes.back()) return k == nodes.back() ? values_.back() : tail_(k);
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), k);
  const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double h = nodes[i + 1] - nodes[i];
  const double a = (nodes[i + 1] - k) / h, b = (k - nodes[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_derivs_[i] + (b * b * b - b) * second_derivs_[i + 1]) * h * h / 6.0;
}

double SpectralDensity::phi(double k, const QuadratureSpec& spec) const {
  return (*this)(k) * kn::eval_T(2, std::abs(k), spec).value;
}

// ---------------------------------------------------------------- coefficients

SeriesCoefficients SeriesCoefficients::truncated(int n) const {
  if (n < 0 || n > order)
    throw Error(ErrorCode::kInvalidArgument, "truncation order out of range");
  SeriesCoefficients c;
  c.order = n;
  c.V.assign(V.begin(), V.begin() + n + 1);
  c.residuals.assign(residuals.begin(), residuals.begin() + std::min<std::size_t>(residuals.size(), n + 1));
  return c;
}

double SeriesCoefficients::bracket(double q) const {
  double sum = 0.0, qn = 1.0;
  for (double v : V) {
    sum += v * qn;
    qn *= q;
  }
  return sum;
}

std::string SeriesCoefficients::to_json() const {
  nlohmann::json j;
  j["order"] = order;
  j["V"] = V;
  j["residuals"] = residuals;
  return j.dump();
}

SeriesCoefficients SeriesCoefficients::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SeriesCoefficients c;
    c.order = j.at("order").get<int>();
    c.V = j.at("V").get<std::vector<double>>();
    c.residuals = j.at("residuals").get<std::vector<double>>();
    if (c.V.size() != static_cast<std::size_t>(c.order) + 1)
      throw Error(ErrorCode::kInvalidArgument, "coefficient count does not match order");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad coefficient JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------- recurrence

namespace {

// Tail nodes of the same mapped rule integrate_tail uses, for caching.
Rule tail_rule(double K, const QuadratureSpec& spec) {
  return semi_infinite_rule(K, K, spec.semi_infinite_nodes);
}

// Discretized transfer E_{n-1} -> E_n: S at grid x grid and grid x tail nodes.
class TransferOperator {
 public:
  TransferOperator(std::shared_ptr<const KGrid> grid, const QuadratureSpec& spec)
      : grid_(std::move(grid)), tail_(tail_rule(grid_->k_max(), spec)) {
    const auto k = grid_->nodes();
    const std::size_t n = k.size(), m = tail_.nodes.size();
    grid_S_.assign(n * n, 0.0);
    tail_S_.assign(n * m, 0.0);
    inv_pi_T2_.assign(n, 0.0);
    detail::parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < n; ++j) grid_S_[i * n + j] = kn::eval_S(k[i], k[j], spec).value;
      for (std::size_t j = 0; j < m; ++j) tail_S_[i * m + j] = kn::eval_S(k[i], tail_.nodes[j], spec).value;
      inv_pi_T2_[i] = 1.0 / (pi * kn::eval_T(2, k[i], spec).value);
    });
  }

  SpectralDensity apply(const SpectralDensity& prev) const {
    const auto w = grid_->weights();
    const auto e = prev.values();
    const std::size_t n = w.size(), m = tail_.nodes.size();
    std::vector<double> tail_vals(m);
    for (std::size_t j = 0; j < m; ++j) tail_vals[j] = tail_.weights[j] * prev.tail()(tail_.nodes[j]);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += grid_S_[i * n + j] * w[j] * e[j];
      for (std::size_t j = 0; j < m; ++j) sum += tail_S_[i * m + j] * tail_vals[j];
      out[i] = sum * inv_pi_T2_[i];
    }
    if (!std::isfinite(out[0]))
      throw Error(ErrorCode::kRegularityCheckFailed, "E_n(0) is not finite");
    return SpectralDensity(prev.order() + 1, grid_, std::move(out));
  }

 private:
  std::shared_ptr<const KGrid> grid_;
  Rule tail_;
  std::vector<double> grid_S_, tail_S_, inv_pi_T2_;
};

constexpr double kResidualProbe = 1e-3;

}  // namespace

SpectralDensity build_E0(std::shared_ptr<const KGrid> grid, const QuadratureSpec& spec) {
  if (!grid) throw Error(ErrorCode::kInvalidArgument, "grid is null");
  spec.validate();
  const auto k = grid->nodes();
  std::vector<double> values(k.size());
  detail::parallel_for(k.size(), [&](std::size_t i) {
    values[i] = kn::eval_phi0(k[i], spec).value / kn::eval_T(2, k[i], spec).value;
  });
  return SpectralDensity(0, std::move(grid), std::move(values));
}

double next_V(const SpectralDensity& E_prev, const QuadratureSpec& spec) {
  const auto k = E_prev.grid().nodes();
  const auto w = E_prev.grid().weights();
  const auto e = E_prev.values();
  double bulk = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) bulk += w[i] * kn::eval_T(1, k[i], spec).value * e[i];
  const double K = E_prev.grid().k_max();
  const TailModel& m = E_prev.tail();
  const double tail = integrate_tail([&](double x) { return kn::eval_T(1, x, spec).value * m(x); }, K, K, spec);
  if (std::abs(tail) > std::max(10.0 * spec.abs_tol, 1e-2 * std::abs(bulk)))
    throw Error(ErrorCode::kTailTooLarge,
                "tail beyond k_max is not a small correction (" + std::to_string(tail) + ")");
  return -(bulk + tail) / (pi * kn::T_at_zero(1));
}

SpectralDensity next_E(const SpectralDensity& E_prev, std::shared_ptr<const KGrid> grid,
                       const QuadratureSpec& spec) {
  if (grid.get() != &E_prev.grid() && grid->size() != E_prev.grid().size())
    throw Error(ErrorCode::kInvalidArgument, "next_E grid does not match the previous order");
  spec.validate();
  return TransferOperator(std::move(grid), spec).apply(E_prev);
}

double recurrence_residual(const SpectralDensity& E_n, double V_n, const SpectralDensity* E_prev,
                           double k, const QuadratureSpec& spec) {
  const double lhs = E_n(k) * kn::eval_L(k, spec).value + V_n * kn::eval_T(1, k, spec).value;
  if (E_n.order() == 0) return lhs - kn::eval_T(2, k, spec).value;
  if (!E_prev) throw Error(ErrorCode::kInvalidArgument, "order n >= 1 needs E_{n-1}");
  const double coupling =
      E_prev->integrate_against([&](double k1) { return kn::eval_J(1, k, k1, spec).value; }, spec);
  return lhs + coupling / pi;
}

SeriesSolution solve_series(int order, std::shared_ptr<const KGrid> grid, const QuadratureSpec& spec) {
  if (order < 0 || order > kMaxSeriesOrder)
    throw Error(ErrorCode::kInvalidArgument,
                "series order must lie in [0, " + std::to_string(kMaxSeriesOrder) + "]");
  if (!grid) throw Error(ErrorCode::kInvalidArgument, "grid is null");
  spec.validate();

  SeriesSolution sol;
  sol.coefficients.order = order;
  sol.coefficients.V.push_back(kV0);
  sol.densities.push_back(build_E0(grid, spec));
  sol.coefficients.residuals.push_back(
      std::abs(recurrence_residual(sol.densities[0], kV0, nullptr, kResidualProbe, spec)));
  if (order == 0) return sol;

  const TransferOperator transfer(grid, spec);
  for (int n = 1; n <= order; ++n) {
    const SpectralDensity& prev = sol.densities.back();
    const double V = next_V(prev, spec);
    SpectralDensity E = transfer.apply(prev);
    sol.coefficients.residuals.push_back(
        std::abs(recurrence_residual(E, V, &prev, kResidualProbe, spec)));
    sol.coefficients.V.push_back(V);
    sol.densities.push_back(std::move(E));
  }
  return sol;
}

// ---------------------------------------------------------------- slip

void check_accommodation(double q) {
  if (!(q > 0.0 && q <= 1.0))
    throw Error(ErrorCode::kInvalidAccommodation, "q must lie in (0,1]");
}

double slip_velocity(double q, const SeriesCoefficients& coeffs) {
  check_accommodation(q);
  return (2.0 - q) / q * coeffs.bracket(q);
}

double slip_coefficient(double alpha, double q, const SeriesCoefficients& coeffs, const QuadratureSpec& spec) {
  check_accommodation(q);
  return fermi::kv_prefactor({alpha}, spec) * (2.0 - q) / 2.0 * coeffs.bracket(q);
}

SlipSolution make_slip_solution(double q, double alpha, const SeriesCoefficients& coeffs,
                                const QuadratureSpec& spec) {
  SlipSolution s;
  s.q = q;
  s.alpha = alpha;
  s.U_sl_dimensionless = slip_velocity(q, coeffs);
  s.K_v = slip_coefficient(alpha, q, coeffs, spec);
  double qn = 1.0;
  for (double v : coeffs.V) {
    s.per_order_terms.push_back(v * qn);
    qn *= q;
  }
  s.coefficients = coeffs;
  return s;
}

std::complex<double> spectral_Phi(int n, double k, double mu, std::span<const SpectralDensity> densities,
                                  const SeriesCoefficients& coeffs, const QuadratureSpec& spec) {
  if (n < 0 || static_cast<std::size_t>(n) >= densities.size() || n > coeffs.order)
    throw Error(ErrorCode::kInvalidArgument, "spectral_Phi order exceeds the solved series");
  if (!(std::abs(mu) <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "|mu| must be <= 1");
  const double amu = std::abs(mu);
  double rhs = densities[n](k);
  if (n == 0) {
    rhs += (amu - coeffs.V[0]) * amu;
  } else {
    const double mu2 = mu * mu;
    const double lorentz =
        densities[n - 1].integrate_against([mu2](double k1) { return 1.0 / (1.0 + k1 * k1 * mu2); }, spec);
    rhs -= coeffs.V[n] * amu + amu / pi * lorentz;
  }
  return rhs / std::complex<double>(1.0, k * mu);
}

}  // namespace kramers::series
