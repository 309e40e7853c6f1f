#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kramers/error.hpp"
#include "kramers/kernels.hpp"
#include "oracles.hpp"

using namespace kramers;
namespace kn = kramers::kernels;

namespace {
const QuadratureSpec spec;
double T(int n, double k) { return kn::eval_T(n, k, spec).value; }
}  // namespace

TEST_CASE("T_n examples") {
  CHECK(T(1, 0) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(T(2, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(T(3, 0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(T(0, 1) == doctest::Approx(0.856194).epsilon(1e-6));
  CHECK(T(0, 1) == doctest::Approx(oracle_ref::T0_closed(1.0)).epsilon(1e-13));
  for (int n = 0; n <= 3; ++n) CHECK(kn::T_at_zero(n) == doctest::Approx(3.0 / ((n + 1) * (n + 3))));
}

TEST_CASE("T_n against the reference quadrature across regimes") {
  for (int n = 0; n <= 6; ++n)
    for (double k : {1e-5, 5e-4, 2e-3, 0.1, 0.4, 0.6, 1.0, 3.0, 20.0, 200.0, 5e3}) {
      INFO("n=" << n << " k=" << k);
      CHECK(T(n, k) == doctest::Approx(oracle_ref::T(n, k)).epsilon(1e-11));
    }
  for (double k : {1e-3, 0.3, 2.0, 50.0}) {
    CHECK(T(0, k) == doctest::Approx(oracle_ref::T0_closed(k)).epsilon(1e-12));
    CHECK(T(1, k) == doctest::Approx(oracle_ref::T1_closed(k)).epsilon(1e-12));
  }
}

TEST_CASE("T_n decreases in k and in n") {
  for (int n = 0; n <= 5; ++n) {
    double prev = T(n, 0.0);
    for (double k = 0.05; k < 60.0; k *= 1.5) {
      const double v = T(n, k);
      CHECK(v < prev);
      CHECK(T(n + 1, k) < v);
      prev = v;
    }
  }
}

TEST_CASE("recurrence T_n(k) = T_n(0) - k^2 T_{n+2}(k)") {
  for (int n = 0; n <= 3; ++n)
    for (double k : {0.1, 1.0, 5.0}) CHECK(std::abs(T(n, k) - (kn::T_at_zero(n) - k * k * T(n + 2, k))) < 1e-9);
}

TEST_CASE("J_n") {
  CHECK(kn::eval_J(1, 0, 0, spec).value == doctest::Approx(0.375));
  for (int n = 0; n <= 5; ++n)
    for (double k : {0.5, 1.0, 2.0}) CHECK(std::abs(kn::eval_J(n, k, 0.0, spec).value - T(n, k)) < 1e-12);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int i = 0; i < 20; ++i) {
    const double k = u(rng), k1 = u(rng);
    const int n = i % 6;
    const double a = kn::eval_J(n, k, k1, spec).value, b = kn::eval_J(n, k1, k, spec).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK(a == doctest::Approx(oracle_ref::J(n, k, k1)).epsilon(1e-10));
    CHECK(a >= 0.0);
    CHECK(a <= T(n, std::min(k, k1)) + 1e-15);
  }
}

TEST_CASE("L(k)") {
  CHECK(kn::eval_L(0, spec).value == 0.0);
  CHECK(kn::eval_L(1, spec).value == doctest::Approx(0.143806).epsilon(1e-6));
  for (double k : {0.25, 1.0, 4.0}) CHECK(std::abs(kn::eval_L(k, spec).value - (1 - T(0, k))) < 1e-9);
  for (double k = 0.01; k < 100; k *= 2) CHECK(kn::eval_L(k, spec).value > 0.0);
  // 1 - L(k) = T_0(k) ~ 3 pi / (4k): within 1e-3 of 1 only from k ~ 2400 on.
  CHECK(1.0 - kn::eval_L(100, spec).value == doctest::Approx(3 * std::numbers::pi / 400).epsilon(2e-2));
  CHECK(std::abs(kn::eval_L(3000, spec).value - 1.0) < 1e-3);
  // Double zero at the origin.
  CHECK(kn::eval_L(1e-4, spec).value == doctest::Approx(0.2e-8).epsilon(1e-6));
}

TEST_CASE("phi0") {
  CHECK(kn::eval_phi0(0, spec).value == doctest::Approx(-2.0 / 105.0).epsilon(1e-13));
  for (double k : {0.5, 1.0, 3.0})
    CHECK(std::abs(kn::eval_phi0(k, spec).value - ((8.0 / 15.0) * T(3, k) - T(4, k))) < 1e-10);
  double prev = std::abs(kn::eval_phi0(10, spec).value);
  for (double k : {100.0, 1e3, 1e4}) {
    const double v = std::abs(kn::eval_phi0(k, spec).value);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("S(k,k1)") {
  for (double k : {0.0, 0.3, 2.0, 40.0}) CHECK(kn::eval_S(k, 0.0, spec).value == 0.0);
  for (double k1 : {0.2, 1.0, 3.0}) {
    const double expect = k1 * k1 * (T(3, k1) / 3.0 - T(5, k1));
    CHECK(kn::eval_S(0.0, k1, spec).value == doctest::Approx(expect).epsilon(1e-10));
  }
  // Both defining integrals by a 10^6-point midpoint rule.
  const long N = 1000000;
  const double J5 = 1.5 * oracle_ref::midpoint([](double t) { return std::pow(t, 5) * (1 - t * t) / ((1 + t * t) * (1 + t * t)); }, 0, 1, N);
  const double T3 = 1.5 * oracle_ref::midpoint([](double t) { return t * t * t * (1 - t * t) / (1 + t * t); }, 0, 1, N);
  const double S11 = T3 * T3 / 0.375 - J5;
  CHECK(std::abs(kn::eval_S(1.0, 1.0, spec).value - S11) < 1e-7);
  // Large k1 goes through the alternate algebraic form.
  for (double k1 : {5.0, 50.0, 200.0})
    CHECK(kn::eval_S(1.5, k1, spec).value == doctest::Approx(oracle_ref::S(1.5, k1)).epsilon(1e-9));
}

TEST_CASE("invalid kernel arguments") {
  CHECK_THROWS_AS(kn::eval_T(-1, 1.0, spec), Error);
  CHECK_THROWS_AS(kn::eval_T(1, -1.0, spec), Error);
  CHECK_THROWS_AS(kn::eval_J(1, 1.0, std::nan(""), spec), Error);
}
