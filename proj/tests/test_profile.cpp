#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "kramers/error.hpp"
#include "kramers/fermi.hpp"
#include "kramers/kernels.hpp"
#include "kramers/profile.hpp"
#include "kramers/series.hpp"
#include "oracles.hpp"

using namespace kramers;
using namespace kramers::profile;
using kramers::series::SpectralDensity;

namespace {

const QuadratureSpec spec;
constexpr double pi = std::numbers::pi;

const series::SeriesSolution& solved() {
  static const auto s =
      series::solve_series(5, std::make_shared<const series::KGrid>(series::KGrid::make_default()), spec);
  return s;
}

double U(double q, double x, int order = 2) {
  ProfileRequest r;
  r.q = q;
  r.order = order;
  r.x_nodes = {x};
  const auto c = solved().coefficients.truncated(order);
  return velocity_profile(r, c, solved().densities, spec).U_over_Gv[0];
}

// (1/pi) ∫_0^inf E0 dk from the reference kernels: 20-point Gauss-Legendre
// on doubling panels out to 1e6, then the (a ln k + b)/k^2 asymptote.
double uc0_at_wall_reference() {
  const auto rule = oracle_ref::legendre(20);
  auto panel = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < rule.first.size(); ++i) {
      const double k = 0.5 * (a + b) + 0.5 * (b - a) * rule.first[i];
      s += 0.5 * (b - a) * rule.second[i] * oracle_ref::E0(k);
    }
    return s;
  };
  double sum = panel(0.0, 0.01), a = 0.01;
  while (a < 1e6) {
    sum += panel(a, 2 * a);
    a *= 2;
  }
  const double g1 = a * a * oracle_ref::E0(a), g0 = a * a / 4 * oracle_ref::E0(a / 2);
  const double slope = (g1 - g0) / std::log(2.0), icpt = g1 - slope * std::log(a);
  sum += (slope * (std::log(a) + 1) + icpt) / a;
  return sum / pi;
}

}  // namespace

TEST_CASE("cosine transform of a known pair") {
  const auto grid = series::KGrid::make_default();
  auto g = [](double k) { return 1.0 / (1.0 + k * k); };
  for (double x : {0.0, 0.3, 1.0, 4.0, 20.0}) {
    INFO("x=" << x);
    CHECK(std::abs(cosine_transform(g, g, grid.nodes(), x, spec) - 0.5 * pi * std::exp(-x)) < 1e-8);
  }
}

TEST_CASE("U_c^(0) at the wall against an independent transform") {
  const double ref = uc0_at_wall_reference();
  CHECK(ref == doctest::Approx(-0.1459803).epsilon(1e-6));
  CHECK(std::abs(uc_component(solved().densities[0], 0.0, 1.0, spec) - ref) < 2e-6);
}

TEST_CASE("U_c components decay") {
  for (int n = 0; n <= 2; ++n) CHECK(std::abs(uc_component(solved().densities[n], 20.0, 1.0, spec)) < 1e-3);
  double prev = 1e300;
  for (double x = 2.0; x <= 12.0; x += 1.0) {
    double m = 0.0;
    for (int n = 0; n <= 2; ++n) m = std::max(m, std::abs(uc_component(solved().densities[n], x, 1.0, spec)));
    CHECK(m < prev);
    prev = m;
  }
  auto grid = solved().densities[0].grid_ptr();
  const SpectralDensity zero(0, grid, std::vector<double>(grid->size(), 0.0));
  for (double x : {0.0, 0.7, 9.0}) CHECK(uc_component(zero, x, 0.5, spec) == 0.0);
}

TEST_CASE("wall velocity ladder") {
  const auto& s = solved();
  const auto c = s.coefficients.truncated(2);
  const double exact = 1.0 / std::sqrt(5.0);
  CHECK(std::abs(wall_velocity(1.0, c, s.densities, spec, 1) - 0.4482) < 2e-3);
  // The full series reaches 1/sqrt(5).
  CHECK(std::abs(wall_velocity(1.0, s.coefficients, s.densities, spec, 5) - exact) < 2e-5);
  CHECK(std::abs(U(1.0, 0.0, 1) - wall_velocity(1.0, s.coefficients.truncated(1), s.densities, spec, 1)) < 1e-12);
}

TEST_CASE("far field") {
  for (double q : {0.25, 0.5, 1.0}) {
    const double usl = series::slip_velocity(q, solved().coefficients.truncated(2));
    CHECK(std::abs(U(q, 20.0) - (usl + 20.0)) < 1e-3);
    const double h = 1e-3;
    CHECK(std::abs((U(q, 20.0 + h) - U(q, 20.0 - h)) / (2 * h) - 1.0) < 1e-3);
  }
}

TEST_CASE("profile request and CSV") {
  ProfileRequest r;
  r.q = 0.5;
  r.x_nodes = uniform_nodes(10.0, 5);
  r.include_components = true;
  const auto p = velocity_profile(r, solved().coefficients.truncated(2), solved().densities, spec);
  REQUIRE(p.Uc_components);
  CHECK(p.Uc_components->size() == 3);
  std::ostringstream out;
  write_profile_csv(out, p);
  const auto text = out.str();
  CHECK(text.rfind("x,U_over_Gv,Uc0,Uc1,Uc2\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
  CHECK(uniform_nodes(10.0, 1) == std::vector<double>{0.0});

  r.q = 0.0;
  CHECK_THROWS_AS(r.validate(), Error);
  r.q = 1.0;
  r.order = 9;
  CHECK_THROWS_AS(r.validate(), Error);
}

TEST_CASE("H and K_v*") {
  const auto& s = solved();
  const auto c = s.coefficients.truncated(2);
  for (double alpha : {-20.0, -5.0, 2.0}) {
    const double H = profile_H(0.7, alpha, 1.0, c, s.densities, spec, 1);
    const double K = profile_Kv_star(0.7, alpha, 1.0, c, s.densities, spec, 1);
    CHECK(K / H == doctest::Approx(fermi::kv_prefactor({alpha}, spec)).epsilon(1e-14));
  }
  CHECK(std::abs(profile_Kv_star(0.0, -20.0, 1.0, c, s.densities, spec, 1) - 1.875 * 0.4482) < 2e-3);
  const double dH = profile_H(27.0, -5.0, 0.5, c, s.densities, spec, 1) - profile_H(21.0, -5.0, 0.5, c, s.densities, spec, 1);
  CHECK(std::abs(dH - 6.0) < 1e-3);
}

TEST_CASE("distribution slice") {
  const auto& s = solved();
  for (double q : {1.0, 0.5}) {
    const auto E = assemble_density(q, s.densities, 5);
    // Boundary identity for either sign of mu.
    for (double mu : {-0.5, 0.5}) {
      const double direct = E.integrate_against([&](double k) { return 1.0 / (1.0 + k * k * mu * mu); }, spec) / pi;
      // Spline integral vs. grid quadrature: agree to the interpolation error.
      CHECK(std::abs(distribution_slice(0.0, mu, E, spec) - direct) < 1e-8);
    }
    for (double x : {0.4, 3.0})
      for (double mu : {-0.8, 0.25})
        CHECK(distribution_slice(x, mu, E, spec) == doctest::Approx(distribution_slice(-x, -mu, E, spec)).epsilon(1e-12));

    // Velocity moment at the wall: incoming directions carry the homogeneous
    // solution, outgoing ones the wall law h = h0+(mu) + (1-q) h(-mu).
    const double usl = series::slip_velocity(q, s.coefficients);
    const auto rule = oracle_ref::legendre(48);
    double m = 0.0;
    for (std::size_t i = 0; i < rule.first.size(); ++i) {
      const double mu = 0.5 * (1.0 + rule.first[i]), w = 0.5 * rule.second[i];
      const double in = distribution_slice(0.0, -mu, E, spec);
      const double out = -2 * q * usl + 2 * (2 - q) * mu + (1 - q) * in;
      m += w * (1 - mu * mu) * (in + out);
    }
    double uc0 = 0.0;
    for (int n = 0; n <= 5; ++n) uc0 += std::pow(q, n) * uc_component(s.densities[n], 0.0, q, spec);
    INFO("q=" << q);
    CHECK(std::abs(0.375 * m - uc0) < 1e-5);
  }
}
