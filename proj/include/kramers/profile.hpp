#pragma once

// Mass-velocity profile in the half-space, rebuilt from the spectral
// densities by one-sided cosine transforms:
//   U(x)/G_v = U_sl/G_v + x + sum_n q^n U_c^(n)(x),
//   U_c^(n)(x) = (2-q)/pi ∫_0^inf cos(kx) E_n(k) dk.

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "kramers/quadrature.hpp"
#include "kramers/series.hpp"

namespace kramers::profile {

struct ProfileRequest {
  double q = 1.0;
  double alpha = -5.0;
  int order = 2;
  std::vector<double> x_nodes;
  bool include_components = false;

  void validate() const;
};

struct VelocityProfile {
  std::vector<double> x;
  std::vector<double> U_over_Gv;
  /// [order][x] values of U_c^(n)(x)/G_v, when requested.
  std::optional<std::vector<std::vector<double>>> Uc_components;
};

/// x-nodes 0, xmax/(n-1), ..., xmax; a single node is x = 0.
std::vector<double> uniform_nodes(double x_max, int n);

/// ∫_0^inf cos(kx) g(k) dk where g is given as smooth on the grid segments
/// of `grid` and by `tail` beyond k_max. Bulk: Gauss-Legendre on each grid
/// segment, split so no piece spans more than a quarter period. Tail:
/// half-period segments accelerated with the Wynn epsilon algorithm.
double cosine_transform(const std::function<double(double)>& g, const std::function<double(double)>& tail,
                        std::span<const double> grid_nodes, double x, const QuadratureSpec& spec);

double uc_component(const series::SpectralDensity& E_n, double x, double q, const QuadratureSpec& spec);

VelocityProfile velocity_profile(const ProfileRequest& req, const series::SeriesCoefficients& coeffs,
                                 std::span<const series::SpectralDensity> densities,
                                 const QuadratureSpec& spec);

/// U(0)/G_v: slip from all of `coeffs`, continuous-spectrum sum truncated
/// at `order`.
double wall_velocity(double q, const series::SeriesCoefficients& coeffs,
                     std::span<const series::SpectralDensity> densities, const QuadratureSpec& spec, int order);

/// H(x, alpha) = U(x)/G_v.
double profile_H(double x, double alpha, double q, const series::SeriesCoefficients& coeffs,
                 std::span<const series::SpectralDensity> densities, const QuadratureSpec& spec, int order);

/// K_v*(x, alpha) = 15 H l_0 / (8 sqrt(pi) l_1).
double profile_Kv_star(double x, double alpha, double q, const series::SeriesCoefficients& coeffs,
                       std::span<const series::SpectralDensity> densities, const QuadratureSpec& spec,
                       int order);

/// 2(2-q) sum_n q^n E_n on the common grid: the density of 2U_c per G_v.
series::SpectralDensity assemble_density(double q, std::span<const series::SpectralDensity> densities, int order);

/// h_c(x, mu) = (1/pi) ∫_0^inf [cos(kx) + k mu sin(kx)] E(k) / (1 + k^2 mu^2) dk.
double distribution_slice(double x, double mu, const series::SpectralDensity& E_assembled,
                          const QuadratureSpec& spec);

/// CSV with header x,U_over_Gv[,Uc0,...], 12 significant digits.
void write_profile_csv(std::ostream& out, const VelocityProfile& profile);

}  // namespace kramers::profile
