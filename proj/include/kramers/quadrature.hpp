#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kramers {

/// Tolerances and node budgets for every numerical integral in the library.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
  /// Node count of the mapped Gauss-Legendre rule used for [a, inf) tails.
  int semi_infinite_nodes = 200;

  /// Throws Error(kInvalidArgument) when an invariant is violated.
  void validate() const;

  /// Default spec with abs_tol/rel_tol overridden by KRAMERS_QUAD_TOL when
  /// that variable holds a positive number.
  static QuadratureSpec from_environment();
};

/// A quadrature result with its absolute error estimate.
struct KernelValue {
  double value = 0.0;
  double est_error = 0.0;
};

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n-point Gauss-Lobatto rule on [a, b] (endpoints included, n >= 2).
Rule gauss_lobatto(int n, double a = -1.0, double b = 1.0);

/// Globally adaptive 15-point Gauss-Kronrod integration over [a, b] split at
/// the given interior breakpoints. The interval with the largest error is
/// bisected until the total estimate meets max(abs_tol, rel_tol*|I|).
/// Throws Error(kNonConvergence) after spec.max_subdivisions bisections.
KernelValue integrate(const std::function<double(double)>& f, double a,
                      double b, const QuadratureSpec& spec,
                      std::span<const double> breakpoints = {});

/// Nodes and weights for [a, inf) under k = a + scale (e^s - 1),
/// s = u/(1-u), with an n-point Gauss-Legendre rule in u. Algebraic tails
/// become exponentially decaying in s; nodes with s > 60 are dropped.
Rule semi_infinite_rule(double a, double scale, int n);

/// Integral over [a, inf) with semi_infinite_rule(a, scale,
/// spec.semi_infinite_nodes). For tails that decay at least like 1/k^2;
/// no error estimate is produced.
double integrate_tail(const std::function<double(double)>& f, double a,
                      double scale, const QuadratureSpec& spec);

}  // namespace kramers
