#pragma once

// Independent check of the series: discrete ordinates in mu, exact
// exponential marching along characteristics in x, for
//   mu dh/dx + h = 2 U(x),   U(x) = (3/8) ∫_{-1}^{1} (1 - mu^2) h dmu,
// on the slab [0, x_max] with the specular-diffuse wall at x = 0 and the
// Chapman-Enskog inflow h = 2 U_sl + 2 (x - mu) at x_max (G_v = 1).

#include <iosfwd>
#include <vector>

namespace kramers::oracle {

enum class Acceleration {
  kKrylov,  // restarted GMRES on the affine sweep map
  kAitken,  // plain source iteration, componentwise Aitken every 20 sweeps
};

struct OracleConfig {
  double q = 1.0;
  int n_mu = 32;  // Gauss-Legendre ordinates per half-range
  double x_max = 30.0;
  int n_x = 600;  // cells, geometrically refined near the wall
  int max_iters = 2000;
  double iter_tol = 1e-10;
  Acceleration acceleration = Acceleration::kKrylov;

  void validate() const;
};

struct OracleSolution {
  std::vector<double> mu_nodes;    // -mu_n..-mu_1, mu_1..mu_n
  std::vector<double> mu_weights;  // full-range weights, sum 2
  std::vector<double> x_nodes;
  std::vector<std::vector<double>> h_field;  // [x][mu]
  std::vector<double> U_x;
  double q = 1.0;
  double U_sl_extracted = 0.0;
  double bc_residual = 0.0;
  int iters_used = 0;
  double final_update = 0.0;  // sup-norm of the last sweep's change in U
};

OracleSolution solve_halfspace(const OracleConfig& cfg);

/// Mean of U(x) - x over x in [0.6, 0.9] x_max. Throws FitUnstable when the
/// least-squares slope of U - x over that window exceeds 1e-4.
double extract_slip(const OracleSolution& sol);

/// Same, over an explicit window [lo, hi] of x_max fractions.
double extract_slip(const OracleSolution& sol, double lo, double hi);

/// max over mu > 0 of |h(0, mu) - (1 - q) h(0, -mu)|.
double bc_residual(const OracleSolution& sol);

/// CSV: header x,U,h_mu=<mu>,... over all 2 n_mu ordinates, one row per node.
void write_field_csv(std::ostream& out, const OracleSolution& sol);

}  // namespace kramers::oracle
