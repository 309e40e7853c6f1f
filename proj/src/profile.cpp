#include "kramers/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "format.hpp"
#include "kramers/error.hpp"
#include "kramers/fermi.hpp"
#include "kramers/kernels.hpp"

namespace kramers::profile {

using std::numbers::pi;
using series::SpectralDensity;

void ProfileRequest::validate() const {
  series::check_accommodation(q);
  if (!std::isfinite(alpha)) throw Error(ErrorCode::kInvalidArgument, "alpha must be finite");
  if (order < 0 || order > series::kMaxSeriesOrder)
    throw Error(ErrorCode::kInvalidArgument, "profile order must lie in [0, 8]");
  for (std::size_t i = 0; i < x_nodes.size(); ++i) {
    if (!(x_nodes[i] >= 0.0) || !std::isfinite(x_nodes[i]))
      throw Error(ErrorCode::kInvalidArgument, "x nodes must be finite and non-negative");
    if (i > 0 && x_nodes[i] < x_nodes[i - 1])
      throw Error(ErrorCode::kInvalidArgument, "x nodes must be sorted");
  }
}

std::vector<double> uniform_nodes(double x_max, int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one x node");
  if (!(x_max >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "x_max must be >= 0");
  if (n == 1) return {0.0};
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = x_max * i / (n - 1);
  return x;
}

namespace {

const Rule& gl8() {
  static const Rule r = gauss_legendre(8);
  return r;
}

double gl_on(const std::function<double(double)>& f, double a, double b) {
  const Rule& r = gl8();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

// Wynn epsilon extrapolation of a sequence of partial sums; returns the
// last two diagonal estimates.
std::pair<double, double> wynn_epsilon(const std::vector<double>& s) {
  const std::size_t n = s.size();
  std::vector<double> prev(n + 1, 0.0), curr(s.begin(), s.end());
  double best = s.back(), before = s.size() > 1 ? s[s.size() - 2] : s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(curr.size() - 1);
    for (std::size_t i = 0; i + 1 < curr.size(); ++i) {
      const double d = curr[i + 1] - curr[i];
      if (d == 0.0) return {curr[i + 1], curr[i + 1]};
      next[i] = prev[i + 1] + 1.0 / d;
    }
    prev = curr;
    curr = std::move(next);
    if (k % 2 == 0 && curr.size() >= 2) {
      before = curr[curr.size() - 2];
      best = curr.back();
    }
  }
  return {best, before};
}

// ∫_K^inf cos(kx - phase) f(k) dk for slowly decaying, non-oscillatory f.
double oscillatory_tail(const std::function<double(double)>& f, double K, double x, double phase,
                        const QuadratureSpec& spec) {
  auto integrand = [&](double k) { return std::cos(k * x - phase) * f(k); };
  const double half_period = pi / x;
  // First zero of cos(kx - phase) strictly above K.
  double z = ((std::floor((K * x - phase) / pi - 0.5) + 1.5) * pi + phase) / x;
  if (z <= K) z += half_period;
  // The first piece may be long when x is small; give it log-spaced breaks.
  std::vector<double> breaks;
  for (double b = 2.0 * K; b < z; b *= 2.0) breaks.push_back(b);
  const double first = integrate(integrand, K, z, spec, breaks).value;

  constexpr int kMaxTerms = 60;
  std::vector<double> partial{first};
  double acc = first, last_estimate = first;
  for (int j = 0; j < kMaxTerms; ++j) {
    const double a = z + j * half_period, b = a + half_period;
    acc += integrate(integrand, a, b, spec).value;
    partial.push_back(acc);
    if (partial.size() >= 8 && partial.size() % 2 == 0) {
      const auto [est, prev] = wynn_epsilon(partial);
      const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(est));
      if (std::abs(est - prev) <= tol && std::abs(est - last_estimate) <= tol) return est;
      last_estimate = est;
    }
  }
  const auto [est, prev] = wynn_epsilon(partial);
  if (std::abs(est - prev) <= 1e3 * std::max(spec.abs_tol, spec.rel_tol * std::abs(est))) return est;
  throw Error(ErrorCode::kOscillatoryNonConvergence,
              "oscillatory tail did not converge at x = " + std::to_string(x));
}

// ∫_0^inf cos(kx - phase) g(k) dk with g on grid segments and `tail` beyond.
double fourier_integral(const std::function<double(double)>& g, const std::function<double(double)>& tail,
                        std::span<const double> nodes, double x, double phase, const QuadratureSpec& spec) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "x must be finite and >= 0");
  auto integrand = [&](double k) { return std::cos(k * x - phase) * g(k); };
  double bulk = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double a = nodes[i], b = nodes[i + 1];
    const int pieces = 1 + static_cast<int>(std::floor((b - a) * x / (0.5 * pi)));
    const double h = (b - a) / pieces;
    for (int p = 0; p < pieces; ++p) bulk += gl_on(integrand, a + p * h, p + 1 == pieces ? b : a + (p + 1) * h);
  }
  const double K = nodes.back();
  if (x == 0.0) {
    const double c = std::cos(phase);
    return bulk + (c == 0.0 ? 0.0 : c * integrate_tail(tail, K, K, spec));
  }
  return bulk + oscillatory_tail(tail, K, x, phase, spec);
}

}  // namespace

double cosine_transform(const std::function<double(double)>& g, const std::function<double(double)>& tail,
                        std::span<const double> grid_nodes, double x, const QuadratureSpec& spec) {
  return fourier_integral(g, tail, grid_nodes, x, 0.0, spec);
}

double uc_component(const SpectralDensity& E_n, double x, double q, const QuadratureSpec& spec) {
  series::check_accommodation(q);
  const auto& tail = E_n.tail();
  auto g = [&](double k) { return E_n(k); };
  double value;
  if (x == 0.0) {
    // Closed-form tail of the (a ln k + b)/k^2 model.
    value = cosine_transform(g, [](double) { return 0.0; }, E_n.grid().nodes(), 0.0, spec) +
            tail.integral_from(E_n.grid().k_max());
  } else {
    value = cosine_transform(g, [&](double k) { return tail(k); }, E_n.grid().nodes(), x, spec);
  }
  return (2.0 - q) / pi * value;
}

VelocityProfile velocity_profile(const ProfileRequest& req, const series::SeriesCoefficients& coeffs,
                                 std::span<const SpectralDensity> densities, const QuadratureSpec& spec) {
  req.validate();
  if (static_cast<std::size_t>(req.order) >= densities.size())
    throw Error(ErrorCode::kInvalidArgument, "profile order exceeds the available densities");
  const double slip = series::slip_velocity(req.q, coeffs);

  VelocityProfile out;
  out.x = req.x_nodes;
  out.U_over_Gv.assign(req.x_nodes.size(), 0.0);
  std::vector<std::vector<double>> comps(req.order + 1, std::vector<double>(req.x_nodes.size()));
  for (std::size_t i = 0; i < req.x_nodes.size(); ++i) {
    double uc = 0.0, qn = 1.0;
    for (int n = 0; n <= req.order; ++n) {
      comps[n][i] = uc_component(densities[n], req.x_nodes[i], req.q, spec);
      uc += qn * comps[n][i];
      qn *= req.q;
    }
    out.U_over_Gv[i] = slip + req.x_nodes[i] + uc;
  }
  if (req.include_components) out.Uc_components = std::move(comps);
  return out;
}

double wall_velocity(double q, const series::SeriesCoefficients& coeffs,
                     std::span<const SpectralDensity> densities, const QuadratureSpec& spec, int order) {
  return profile_H(0.0, -5.0, q, coeffs, densities, spec, order);
}

double profile_H(double x, double alpha, double q, const series::SeriesCoefficients& coeffs,
                 std::span<const SpectralDensity> densities, const QuadratureSpec& spec, int order) {
  ProfileRequest req;
  req.q = q;
  req.alpha = alpha;
  req.order = order;
  req.x_nodes = {x};
  return velocity_profile(req, coeffs, densities, spec).U_over_Gv.front();
}

double profile_Kv_star(double x, double alpha, double q, const series::SeriesCoefficients& coeffs,
                       std::span<const SpectralDensity> densities, const QuadratureSpec& spec, int order) {
  return fermi::kv_prefactor({alpha}, spec) * profile_H(x, alpha, q, coeffs, densities, spec, order);
}

SpectralDensity assemble_density(double q, std::span<const SpectralDensity> densities, int order) {
  series::check_accommodation(q);
  if (order < 0 || static_cast<std::size_t>(order) >= densities.size())
    throw Error(ErrorCode::kInvalidArgument, "assembly order exceeds the available densities");
  const auto grid = densities[0].grid_ptr();
  std::vector<double> values(grid->size(), 0.0);
  double qn = 2.0 * (2.0 - q);
  for (int n = 0; n <= order; ++n) {
    const auto v = densities[n].values();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += qn * v[i];
    qn *= q;
  }
  return SpectralDensity(-1, grid, std::move(values));
}

double distribution_slice(double x, double mu, const SpectralDensity& E, const QuadratureSpec& spec) {
  if (!(std::abs(mu) <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "|mu| must be <= 1");
  if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "x must be finite");
  // For x < 0: cos(-kx) = cos(kx), sin(-kx) = -sin(kx), i.e. flip mu.
  const double ax = std::abs(x), m = x < 0.0 ? -mu : mu;
  const double m2 = m * m;
  auto lorentz = [m2](double k) { return 1.0 / (1.0 + k * k * m2); };
  const auto nodes = E.grid().nodes();
  double value = fourier_integral([&](double k) { return E(k) * lorentz(k); },
                                  [&](double k) { return E.tail()(k) * lorentz(k); }, nodes, ax, 0.0, spec);
  if (m != 0.0 && ax > 0.0) {
    value += fourier_integral([&](double k) { return k * m * E(k) * lorentz(k); },
                              [&](double k) { return k * m * E.tail()(k) * lorentz(k); }, nodes, ax, 0.5 * pi,
                              spec);
  }
  return value / pi;
}

void write_profile_csv(std::ostream& out, const VelocityProfile& p) {
  out << "x,U_over_Gv";
  const std::size_t ncomp = p.Uc_components ? p.Uc_components->size() : 0;
  for (std::size_t n = 0; n < ncomp; ++n) out << ",Uc" << n;
  out << '\n';
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    out << detail::format_number(p.x[i]) << ',' << detail::format_number(p.U_over_Gv[i]);
    for (std::size_t n = 0; n < ncomp; ++n) out << ',' << detail::format_number((*p.Uc_components)[n][i]);
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "failed writing profile CSV");
}

}  // namespace kramers::profile
