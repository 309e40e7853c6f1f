#include <cmath>
#include <sstream>

#include "doctest.h"
#include "kramers/error.hpp"
#include "kramers/oracle.hpp"

using namespace kramers;
using namespace kramers::oracle;

namespace {

const OracleSolution& run(double q) {
  static OracleSolution s1, s05;
  OracleSolution& s = q == 1.0 ? s1 : s05;
  if (s.x_nodes.empty()) {
    OracleConfig cfg;
    cfg.q = q;
    s = solve_halfspace(cfg);
  }
  return s;
}

}  // namespace

TEST_CASE("slip and wall velocity at q = 1") {
  const auto& s = run(1.0);
  CHECK(std::abs(s.U_sl_extracted - 0.5819) < 5e-3);
  CHECK(std::abs(s.U_x.front() - 1.0 / std::sqrt(5.0)) < 5e-3);
  CHECK(s.iters_used < OracleConfig{}.max_iters);
  CHECK(s.final_update < OracleConfig{}.iter_tol);
  // Finer checks; the exact values are 0.581939 and 1/sqrt(5).
  CHECK(std::abs(s.U_sl_extracted - 0.58194) < 2e-4);
  CHECK(std::abs(s.U_x.front() - 0.447214) < 2e-4);
}

TEST_CASE("slip at q = 0.5") {
  CHECK(std::abs(run(0.5).U_sl_extracted - 1.67537) / 1.67537 < 1e-2);
}

TEST_CASE("boundary condition") {
  const auto& s1 = run(1.0);
  CHECK(bc_residual(s1) < 1e-8);
  const std::size_t nm = s1.mu_nodes.size() / 2;
  for (std::size_t j = nm; j < 2 * nm; ++j) CHECK(std::abs(s1.h_field.front()[j]) < 1e-8);
  CHECK(bc_residual(run(0.5)) < 1e-8);

  OracleSolution p = run(0.5);
  p.h_field.front()[nm + 3] += 1e-3;
  CHECK(bc_residual(p) == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("ordinates") {
  const auto& s = run(1.0);
  double w = 0.0;
  for (double x : s.mu_weights) w += x;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-13));
  for (double mu : s.mu_nodes) CHECK(mu != 0.0);
  CHECK(s.mu_nodes.size() == 64);
}

TEST_CASE("extract_slip") {
  OracleSolution syn;
  for (int i = 0; i <= 300; ++i) {
    syn.x_nodes.push_back(0.1 * i);
    syn.U_x.push_back(0.58 + 0.1 * i);
  }
  CHECK(extract_slip(syn) == doctest::Approx(0.58).epsilon(1e-14));
  for (double& u : syn.U_x) u *= 1.01;
  CHECK_THROWS_AS(extract_slip(syn), Error);
  CHECK_THROWS_AS(extract_slip(syn, 0.5, 0.5001), Error);

  const auto& s = run(1.0);
  const double base = extract_slip(s);
  CHECK(std::abs(extract_slip(s, 0.5, 0.8) - base) < 1e-3);
  CHECK(std::abs(extract_slip(s, 0.7, 1.0) - base) < 1e-3);
}

TEST_CASE("monotone approach to the asymptote") {
  const auto& s = run(1.0);
  double prev = 1e300;
  int sign = 0;
  for (std::size_t i = 0; i < s.x_nodes.size(); ++i) {
    if (s.x_nodes[i] < 5.0 || s.x_nodes[i] > 0.6 * s.x_nodes.back()) continue;
    const double d = s.U_x[i] - (s.U_sl_extracted + s.x_nodes[i]);
    if (std::abs(d) < 1e-9) break;
    const int sg = d > 0 ? 1 : -1;
    if (sign == 0) sign = sg;
    CHECK(sg == sign);
    CHECK(std::abs(d) <= prev);
    prev = std::abs(d);
  }
}

TEST_CASE("grid convergence") {
  OracleConfig fine;
  fine.n_mu = 64;
  fine.n_x = 1200;
  CHECK(std::abs(solve_halfspace(fine).U_sl_extracted - run(1.0).U_sl_extracted) < 2e-3);
}

TEST_CASE("deterministic") {
  OracleConfig cfg;
  cfg.q = 0.5;
  const auto a = solve_halfspace(cfg);
  CHECK(a.U_x == run(0.5).U_x);
}

TEST_CASE("configuration errors") {
  OracleConfig cfg;
  cfg.n_mu = 4;
  CHECK_THROWS_AS(solve_halfspace(cfg), Error);
  cfg = {};
  cfg.x_max = 10.0;
  CHECK_THROWS_AS(solve_halfspace(cfg), Error);
  cfg = {};
  cfg.q = 0.0;
  try {
    solve_halfspace(cfg);
    FAIL("expected InvalidAccommodation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidAccommodation);
  }
}

TEST_CASE("source iteration with Aitken runs out of sweeps at q = 1") {
  OracleConfig cfg;
  cfg.acceleration = Acceleration::kAitken;
  cfg.max_iters = 60;
  try {
    solve_halfspace(cfg);
    FAIL("expected MaxItersExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMaxItersExceeded);
  }
}

TEST_CASE("field dump") {
  std::ostringstream out;
  write_field_csv(out, run(1.0));
  const auto text = out.str();
  CHECK(text.rfind("x,U,h_mu=", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(run(1.0).x_nodes.size()) + 1);
}
