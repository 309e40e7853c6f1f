#pragma once

// Order-by-order solution of the slip integral equation in powers of the
// accommodation coefficient q:
//   E(k)   = 2(2-q) G_v [E_0(k) + q E_1(k) + ...]
//   U_sl   = G_v (2-q)/q [V_0 + V_1 q + ...]
// Each E_n carries a double pole at k = 0 unless V_n is chosen to cancel it;
// the densities here are always built from the regularized recurrence
//   E_n(k) = 1/(pi T_2(k)) ∫ S(k,k1) E_{n-1}(k1) dk1.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kramers/quadrature.hpp"

namespace kramers::series {

inline constexpr double kV0 = 8.0 / 15.0;
inline constexpr int kMaxSeriesOrder = 8;

/// Composite Gauss-Lobatto discretization of [0, k_max]. Node 0 is k = 0.
class KGrid {
 public:
  /// Dense panels on [0, 10] plus geometric panels out to k_max.
  static KGrid make_default(double k_max = 200.0);
  /// Panels between consecutive edges (edges[0] must be 0), `points` Lobatto
  /// nodes per panel.
  static KGrid from_edges(std::vector<double> edges, int points = 8);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }
  double k_max() const { return nodes_.back(); }

  /// Index of node k if it is a grid node (exact match), else -1.
  long find_node(double k) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> edges_;
};

/// Large-k model E(k) ~ (a ln k + b) / k^2 + (c ln k + d) / k^3, matched at
/// the last four panel edges (two-term fit on grids with fewer panels).
struct TailModel {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double operator()(double k) const;
  double derivative(double k) const;
  /// ∫_K^inf model(k) dk in closed form.
  double integral_from(double K) const;
};

/// Samples of one order E_n on a KGrid, with a clamped cubic spline between
/// nodes (E is even, so E'(0) = 0) and the tail model beyond k_max.
class SpectralDensity {
 public:
  SpectralDensity(int order, std::shared_ptr<const KGrid> grid, std::vector<double> values);

  int order() const { return order_; }
  const KGrid& grid() const { return *grid_; }
  std::shared_ptr<const KGrid> grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  const TailModel& tail() const { return tail_; }

  double operator()(double k) const;
  /// phi_n(k) = E_n(k) T_2(k).
  double phi(double k, const QuadratureSpec& spec) const;

  /// Grid sum of w_i g(k_i) E(k_i) plus ∫_{k_max}^inf g(k) tail(k) dk.
  template <class G>
  double integrate_against(G&& g, const QuadratureSpec& spec) const;

 private:
  int order_;
  std::shared_ptr<const KGrid> grid_;
  std::vector<double> values_;
  std::vector<double> second_derivs_;
  TailModel tail_;
};

struct SeriesCoefficients {
  std::vector<double> V;
  int order = 0;
  std::vector<double> residuals;

  /// Copy restricted to V_0..V_n.
  SeriesCoefficients truncated(int n) const;
  /// sum_n V_n q^n.
  double bracket(double q) const;

  std::string to_json() const;
  static SeriesCoefficients from_json(const std::string& text);
};

struct SeriesSolution {
  SeriesCoefficients coefficients;
  std::vector<SpectralDensity> densities;  // E_0..E_N
};

struct SlipSolution {
  double q = 1.0;
  double alpha = -5.0;
  double U_sl_dimensionless = 0.0;  // U_sl / G_v
  double K_v = 0.0;
  std::vector<double> per_order_terms;  // V_n q^n
  SeriesCoefficients coefficients;
};

SpectralDensity build_E0(std::shared_ptr<const KGrid> grid, const QuadratureSpec& spec);

/// V_n = -1/(pi T_1(0)) ∫ T_1(k) E_{n-1}(k) dk.
double next_V(const SpectralDensity& E_prev, const QuadratureSpec& spec);

SpectralDensity next_E(const SpectralDensity& E_prev, std::shared_ptr<const KGrid> grid,
                       const QuadratureSpec& spec);

/// Residual of the unregularized recurrence
///   E_n L + V_n T_1 + (1/pi) ∫ J_1(k,k1) E_{n-1}(k1) dk1      (n >= 1)
///   E_0 L + V_0 T_1 - T_2                                   (n = 0)
/// at a single k; E_prev is ignored for n = 0.
double recurrence_residual(const SpectralDensity& E_n, double V_n, const SpectralDensity* E_prev,
                           double k, const QuadratureSpec& spec);

SeriesSolution solve_series(int order, std::shared_ptr<const KGrid> grid, const QuadratureSpec& spec);

/// (2-q)/q sum V_n q^n, in units of G_v.
double slip_velocity(double q, const SeriesCoefficients& coeffs);

/// K_v(alpha, q) = prefactor(alpha) (2-q)/2 sum V_n q^n.
double slip_coefficient(double alpha, double q, const SeriesCoefficients& coeffs,
                        const QuadratureSpec& spec);

SlipSolution make_slip_solution(double q, double alpha, const SeriesCoefficients& coeffs,
                                const QuadratureSpec& spec);

/// Phi_n(k, mu): angular spectral density of order n.
std::complex<double> spectral_Phi(int n, double k, double mu, std::span<const SpectralDensity> densities,
                                  const SeriesCoefficients& coeffs, const QuadratureSpec& spec);

/// Throws InvalidAccommodation unless 0 < q <= 1.
void check_accommodation(double q);

// ---------------------------------------------------------------------------

template <class G>
double SpectralDensity::integrate_against(G&& g, const QuadratureSpec& spec) const {
  const auto k = grid_->nodes();
  const auto w = grid_->weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) sum += w[i] * g(k[i]) * values_[i];
  const double K = grid_->k_max();
  sum += integrate_tail([&](double x) { return g(x) * tail_(x); }, K, K, spec);
  return sum;
}

}  // namespace kramers::series
