#include "kramers/fermi.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "kramers/error.hpp"

namespace kramers::fermi {

namespace {

// ln(1 + e^y) without overflow; for y > 700 it is y to double precision.
double softplus(double y) {
  if (y > 700.0) return y;
  if (y > 0.0) return y + std::log1p(std::exp(-y));
  return std::log1p(std::exp(y));
}

}  // namespace

double fermi_log_moment(int n, ReducedChemicalPotential alpha, const QuadratureSpec& spec) {
  if (n != 0 && n != 1)
    throw Error(ErrorCode::kInvalidArgument, "fermi_log_moment supports n in {0, 1}");
  const double a = alpha.alpha;
  if (!std::isfinite(a)) throw Error(ErrorCode::kInvalidArgument, "alpha must be finite");

  // Beyond the Fermi edge the integrand decays like exp(alpha - t^2); the
  // cut at edge + 40 drops less than exp(-1600).
  const double edge = std::sqrt(std::max(a, 0.0));
  const double t_max = edge + 40.0;
  std::vector<double> breaks;
  if (edge > 0.0) breaks.push_back(edge);
  for (double t = edge + 1.0; t < edge + 9.0; t += 2.0) breaks.push_back(t);

  auto f = [n, a](double t) { return (n == 1 ? t : 1.0) * softplus(a - t * t); };
  // Scale the absolute tolerance with the moment itself so the deep
  // Boltzmann regime (values ~ e^alpha) keeps relative accuracy.
  QuadratureSpec local = spec;
  local.abs_tol = std::max(std::min(spec.abs_tol, spec.rel_tol * 0.5 * softplus(a)), 1e-300);
  const double v = integrate(f, 0.0, t_max, local, breaks).value;
  if (!(v > 0.0)) throw Error(ErrorCode::kNonConvergence, "fermi moment is not positive");
  return v;
}

double kv_prefactor(ReducedChemicalPotential alpha, const QuadratureSpec& spec) {
  const double l0 = fermi_log_moment(0, alpha, spec);
  const double l1 = fermi_log_moment(1, alpha, spec);
  return 15.0 * l0 / (8.0 * std::sqrt(std::numbers::pi) * l1);
}

}  // namespace kramers::fermi
