#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kramers/kramers.h"

namespace {

struct Series {
  kramers_series* p = nullptr;
  explicit Series(int order) { REQUIRE(kramers_series_solve(order, 0.0, nullptr, &p) == KRAMERS_OK); }
  ~Series() { kramers_series_free(p); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(kramers_version()).size() > 0);
  CHECK(std::string(kramers_status_name(KRAMERS_OK)) == "Ok");
  CHECK(std::string(kramers_status_name(KRAMERS_ERR_TAIL_TOO_LARGE)) == "TailTooLarge");
}

TEST_CASE("kernels through the C interface") {
  double v = 0, e = -1;
  CHECK(kramers_kernel_T(1, 0.0, nullptr, &v, &e) == KRAMERS_OK);
  CHECK(v == doctest::Approx(0.375));
  CHECK(e >= 0.0);
  CHECK(kramers_kernel_L(1.0, nullptr, &v, nullptr) == KRAMERS_OK);
  CHECK(v == doctest::Approx(0.143806).epsilon(1e-6));
  CHECK(kramers_kernel_S(2.0, 0.0, nullptr, &v, nullptr) == KRAMERS_OK);
  CHECK(v == 0.0);
  CHECK(kramers_kernel_T(-2, 1.0, nullptr, &v, nullptr) == KRAMERS_ERR_INVALID_ARGUMENT);
  CHECK(std::string(kramers_last_error()).size() > 0);
  CHECK(kramers_kernel_T(1, 1.0, nullptr, nullptr, nullptr) == KRAMERS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("quadrature spec") {
  kramers_quad_spec s;
  kramers_quad_spec_default(&s);
  CHECK(s.abs_tol > 0.0);
  CHECK(s.max_subdivisions > 0);
  double v = 0;
  s.rel_tol = -1.0;
  CHECK(kramers_kernel_T(3, 1.0, &s, &v, nullptr) == KRAMERS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("fermi") {
  double v = 0;
  CHECK(kramers_fermi_moment(1, 0.0, nullptr, &v) == KRAMERS_OK);
  CHECK(v == doctest::Approx(M_PI * M_PI / 24));
  CHECK(kramers_kv_prefactor(-20.0, nullptr, &v) == KRAMERS_OK);
  CHECK(v == doctest::Approx(1.875).epsilon(1e-4));
}

TEST_CASE("series handle") {
  Series s(2);
  CHECK(kramers_series_order(s.p) == 2);
  CHECK(kramers_series_order(nullptr) == -1);
  double v = 0;
  CHECK(kramers_series_coefficient(s.p, 0, &v) == KRAMERS_OK);
  CHECK(v == 8.0 / 15.0);
  CHECK(kramers_series_coefficient(s.p, 3, &v) == KRAMERS_ERR_INVALID_ARGUMENT);
  CHECK(kramers_series_residual(s.p, 1, &v) == KRAMERS_OK);
  CHECK(std::abs(v) < 1e-8);
  CHECK(kramers_series_density(s.p, 0, 0.0, &v) == KRAMERS_OK);
  CHECK(v == doctest::Approx(-2.0 / 21.0));

  CHECK(kramers_series_slip(s.p, 1.0, 0, &v) == KRAMERS_OK);
  CHECK(v == doctest::Approx(8.0 / 15.0));
  CHECK(kramers_series_slip(s.p, 1.0, -1, &v) == KRAMERS_OK);
  CHECK(std::abs(v - 0.5819) < 5e-4);
  CHECK(kramers_series_slip(s.p, 1.0, 4, &v) == KRAMERS_ERR_INVALID_ARGUMENT);
  CHECK(kramers_series_slip(s.p, 0.0, -1, &v) == KRAMERS_ERR_INVALID_ACCOMMODATION);
  CHECK(std::string(kramers_last_error()) == "q must lie in (0,1]");
  CHECK(kramers_series_slip_coefficient(s.p, -20.0, 1.0, -1, &v) == KRAMERS_OK);
  CHECK(std::abs(v - 0.5456) < 1e-3);

  double re = 0, im = 0;
  CHECK(kramers_series_phi(s.p, 0, 0.0, 1.0, &re, &im) == KRAMERS_OK);
  CHECK(re == doctest::Approx(0.371429).epsilon(1e-6));

  size_t len = 0;
  CHECK(kramers_series_json(s.p, nullptr, 0, &len) == KRAMERS_OK);
  std::vector<char> buf(len + 1);
  CHECK(kramers_series_json(s.p, buf.data(), buf.size(), &len) == KRAMERS_OK);
  const std::string json(buf.data());
  CHECK(json.size() == len);
  CHECK(json.find("\"V\"") != std::string::npos);
  CHECK(json.find("\"residuals\"") != std::string::npos);
}

TEST_CASE("profiles through the C interface") {
  Series s(2);
  double w = 0, u0 = 0;
  CHECK(kramers_profile_wall(s.p, 1.0, 1, &w) == KRAMERS_OK);
  CHECK(std::abs(w - 0.4482) < 2e-3);
  const double x[] = {0.0, 1.0, 20.0};
  double U[3], uc[9];
  CHECK(kramers_profile_evaluate(s.p, 1.0, 2, x, 3, U, uc) == KRAMERS_OK);
  CHECK(kramers_profile_wall(s.p, 1.0, 2, &u0) == KRAMERS_OK);
  CHECK(U[0] == doctest::Approx(u0).epsilon(1e-12));
  double usl = 0;
  kramers_series_slip(s.p, 1.0, -1, &usl);
  CHECK(std::abs(U[2] - (usl + 20.0)) < 1e-3);
  CHECK(U[1] == doctest::Approx(usl + 1.0 + uc[1] + uc[4] + uc[7]).epsilon(1e-12));
  double c0 = 0;
  CHECK(kramers_profile_uc(s.p, 0, 1.0, 1.0, &c0) == KRAMERS_OK);
  CHECK(c0 == doctest::Approx(uc[1]).epsilon(1e-12));

  double H = 0, K = 0, pre = 0;
  CHECK(kramers_profile_H(s.p, 0.0, -5.0, 1.0, -1, &H, &K) == KRAMERS_OK);
  kramers_kv_prefactor(-5.0, nullptr, &pre);
  CHECK(K / H == doctest::Approx(pre));
  double h1 = 0, h2 = 0;
  CHECK(kramers_profile_slice(s.p, 1.0, -1, 0.5, 0.3, &h1) == KRAMERS_OK);
  CHECK(kramers_profile_slice(s.p, 1.0, -1, -0.5, -0.3, &h2) == KRAMERS_OK);
  CHECK(h1 == doctest::Approx(h2));

  const char* path = "capi_profile_test.csv";
  CHECK(kramers_profile_write_csv(s.p, 1.0, 2, x, 3, 1, path) == KRAMERS_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,U_over_Gv,Uc0,Uc1,Uc2");
  std::remove(path);
  CHECK(kramers_profile_write_csv(s.p, 1.0, 2, x, 3, 0, "/nonexistent-dir/p.csv") == KRAMERS_ERR_IO);
}

TEST_CASE("oracle handle") {
  kramers_oracle_config cfg;
  kramers_oracle_config_default(&cfg);
  CHECK(cfg.n_mu == 32);
  CHECK(cfg.n_x == 600);
  kramers_oracle* o = nullptr;
  REQUIRE(kramers_oracle_solve(&cfg, &o) == KRAMERS_OK);
  double usl = 0, u0 = 0, bc = 1;
  int it = 0;
  CHECK(kramers_oracle_summary(o, &usl, &u0, &bc, &it) == KRAMERS_OK);
  CHECK(std::abs(usl - 0.5819) < 5e-3);
  CHECK(std::abs(u0 - 0.4472) < 5e-3);
  CHECK(bc < 1e-8);
  CHECK(it > 0);
  const size_t n = kramers_oracle_size(o);
  CHECK(n > 100);
  std::vector<double> x(n), U(n);
  CHECK(kramers_oracle_profile(o, x.data(), U.data(), n) == KRAMERS_OK);
  CHECK(x.front() == 0.0);
  CHECK(U.front() == u0);
  kramers_oracle_free(o);

  cfg.n_mu = 2;
  o = nullptr;
  CHECK(kramers_oracle_solve(&cfg, &o) == KRAMERS_ERR_INVALID_ARGUMENT);
  CHECK(o == nullptr);
  CHECK(kramers_oracle_size(nullptr) == 0);
}
