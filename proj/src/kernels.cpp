#include "kramers/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "kramers/error.hpp"

namespace kramers::kernels {

namespace {

constexpr double kTaylorCutoff = 1e-3;
constexpr double kT2ClosedFormCutoff = 0.5;

void check_args(int n, double k) {
  if (n < 0 || n > kMaxOrder)
    throw Error(ErrorCode::kInvalidArgument,
                "kernel order must lie in [0, " + std::to_string(kMaxOrder) + "], got " + std::to_string(n));
  if (!std::isfinite(k) || k < 0.0)
    throw Error(ErrorCode::kInvalidArgument, "kernel argument k must be finite and >= 0");
}

// 6-term expansion: T_n(k) = 3 sum_j (-k^2)^j / ((n+2j+1)(n+2j+3)).
double T_taylor(int n, double k) {
  const double k2 = k * k;
  double sum = 0.0, term = 1.0;
  for (int j = 0; j < 6; ++j) {
    sum += term / ((n + 2.0 * j + 1.0) * (n + 2.0 * j + 3.0));
    term *= -k2;
  }
  return 3.0 * sum;
}

// Breakpoints that isolate the region t ~ 1/k where the Lorentzian turns over.
std::vector<double> lorentz_breaks(double k) {
  std::vector<double> b;
  if (k > 1.0) {
    for (double t = 1.0 / k; t < 1.0; t *= 4.0) b.push_back(t);
  }
  return b;
}

KernelValue quad_J(int n, double k, double k1, const QuadratureSpec& spec) {
  const double a = k * k, b = k1 * k1;
  auto f = [n, a, b](double t) {
    const double t2 = t * t;
    return 1.5 * std::pow(t, n) * (1.0 - t2) / ((1.0 + a * t2) * (1.0 + b * t2));
  };
  const auto breaks = lorentz_breaks(std::max(k, k1));
  return integrate(f, 0.0, 1.0, spec, breaks);
}

}  // namespace

double T_at_zero(int n) { return 3.0 / ((n + 1.0) * (n + 3.0)); }

KernelValue eval_T(int n, double k, const QuadratureSpec& spec) {
  check_args(n, k);
  if (k == 0.0) return {T_at_zero(n), 0.0};
  if (n <= 2 && k < kTaylorCutoff) return {T_taylor(n, k), 0.0};
  const double k2 = k * k;
  switch (n) {
    case 0:
      return {1.5 * ((1.0 + 1.0 / k2) * std::atan(k) / k - 1.0 / k2), 0.0};
    case 1:
      return {0.75 / k2 * ((1.0 + 1.0 / k2) * std::log1p(k2) - 1.0), 0.0};
    case 2:
      if (k >= kT2ClosedFormCutoff) {
        const double c = 1.0 / k2 + 1.0 / (k2 * k2);
        return {1.5 * (-1.0 / (3.0 * k2) + c * (1.0 - std::atan(k) / k)), 0.0};
      }
      break;
    default:
      break;
  }
  return quad_J(n, k, 0.0, spec);
}

KernelValue eval_J(int n, double k, double k1, const QuadratureSpec& spec) {
  check_args(n, k);
  check_args(n, k1);
  if (k1 == 0.0) return eval_T(n, k, spec);
  if (k == 0.0) return eval_T(n, k1, spec);
  return quad_J(n, k, k1, spec);
}

KernelValue eval_L(double k, const QuadratureSpec& spec) {
  const KernelValue t2 = eval_T(2, k, spec);
  return {k * k * t2.value, k * k * t2.est_error};
}

KernelValue eval_phi0(double k, const QuadratureSpec& spec) {
  check_args(0, k);
  // One quadrature of the combined integrand keeps the cancellation between
  // the two moments inside the integrand.
  if (k == 0.0) return {8.0 / 15.0 * T_at_zero(3) - T_at_zero(4), 0.0};
  const double a = k * k;
  auto f = [a](double t) {
    const double t2 = t * t;
    return 1.5 * (1.0 - t2) * t2 * t * (8.0 / 15.0 - t) / (1.0 + a * t2);
  };
  const auto breaks = lorentz_breaks(k);
  return integrate(f, 0.0, 1.0, spec, breaks);
}

KernelValue eval_S(double k, double k1, const QuadratureSpec& spec) {
  check_args(0, k);
  check_args(0, k1);
  if (k1 == 0.0) return {0.0, 0.0};
  const double t10 = T_at_zero(1);
  const KernelValue t3k = eval_T(3, k, spec);
  if (k1 <= 1.0) {
    const KernelValue t3k1 = eval_T(3, k1, spec);
    const KernelValue j5 = eval_J(5, k, k1, spec);
    const double k12 = k1 * k1;
    return {k12 * (t3k.value * t3k1.value / t10 - j5.value),
            k12 * (t3k.est_error * t3k1.value / t10 + t3k.value * t3k1.est_error / t10 + j5.est_error)};
  }
  // Same quantity via J_5 = (T_3(k) - J_3(k,k1)) / k1^2 and
  // T_3(k1) = (T_1(0) - T_1(k1)) / k1^2; avoids amplifying error by k1^2.
  const KernelValue j3 = eval_J(3, k, k1, spec);
  const KernelValue t1k1 = eval_T(1, k1, spec);
  return {j3.value - t3k.value * t1k1.value / t10,
          j3.est_error + (t3k.est_error * t1k1.value + t3k.value * t1k1.est_error) / t10};
}

}  // namespace kramers::kernels
