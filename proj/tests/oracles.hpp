#pragma once

// Reference numerics for the tests, written independently of the library:
// Legendre nodes by Newton iteration, composite rules on geometric panels,
// and the kernels straight from their defining t-integrals.

#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle_ref {

inline std::pair<std::vector<double>, std::vector<double>> legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

// ∫_0^1 f(t) dt on panels [0,2^-40], ..., [1/4,1/2], [1/2,1], 24-point GL each.
// Resolves integrands concentrated near t = 0 at any scale down to 1e-12.
inline double t_integral(const std::function<double(double)>& f) {
  static const auto rule = legendre(24);
  double sum = 0.0, hi = 1.0;
  for (int p = 0; p < 41; ++p) {
    const double lo = p == 40 ? 0.0 : hi / 2.0;
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.first.size(); ++i) sum += h * rule.second[i] * f(c + h * rule.first[i]);
    hi = lo;
  }
  return sum;
}

inline double T(int n, double k) {
  return 1.5 * t_integral([=](double t) { return std::pow(t, n) * (1 - t * t) / (1 + k * k * t * t); });
}

inline double J(int n, double k, double k1) {
  return 1.5 * t_integral([=](double t) {
    return std::pow(t, n) * (1 - t * t) / ((1 + k * k * t * t) * (1 + k1 * k1 * t * t));
  });
}

// S(k,k1) = J3(k,k1) - T3(k) T1(k1) / T1(0), the cancellation-free form.
inline double S(double k, double k1) { return J(3, k, k1) - T(3, k) * T(1, k1) / 0.375; }

inline double T0_closed(double k) { return 1.5 * ((1 + 1 / (k * k)) * std::atan(k) / k - 1 / (k * k)); }

inline double T1_closed(double k) { return 0.75 / (k * k) * ((1 + 1 / (k * k)) * std::log1p(k * k) - 1); }

inline double E0(double k) { return ((8.0 / 15.0) * T(3, k) - T(4, k)) / T(2, k); }

// E1(k) = (1/(pi T2(k))) ∫_0^inf S(k,k1) E0(k1) dk1 by the trapezoid rule
// on k1 = u/(1-u) with `nodes` points in u.
inline double E1_brute(double k, int nodes = 4096) {
  double sum = 0.0;
  const double h = 1.0 / nodes;
  for (int i = 1; i < nodes; ++i) {
    const double u = i * h, k1 = u / (1 - u);
    sum += S(k, k1) * E0(k1) / ((1 - u) * (1 - u));
  }
  return h * sum / (std::numbers::pi * T(2, k));
}

// Midpoint rule on [a,b] with n cells.
inline double midpoint(const std::function<double(double)>& f, double a, double b, long n) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (long i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

}  // namespace oracle_ref
