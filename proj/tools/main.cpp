// kramers-cli: slip coefficients, velocity profiles, kernel tables and
// discrete-ordinates runs for the half-space slip problem.

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kramers/kramers.h"
#include "svg.hpp"

using nlohmann::ordered_json;

namespace {

constexpr double kExactSlip = 0.5819;

enum Exit { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

struct Failure {
  int exit_code;
  std::string message;
};

int exit_for(kramers_status s) {
  switch (s) {
    case KRAMERS_ERR_INVALID_ARGUMENT:
    case KRAMERS_ERR_INVALID_ACCOMMODATION: return kUsage;
    case KRAMERS_ERR_IO: return kIo;
    default: return kNumeric;
  }
}

void check(kramers_status s) {
  if (s != KRAMERS_OK) throw Failure{exit_for(s), kramers_last_error()};
}

void check_q(double q) {
  if (!(q > 0.0 && q <= 1.0)) throw Failure{kUsage, "q must lie in (0,1]"};
}

std::string fmt(double v) {
  char buf[40];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

struct SeriesHandle {
  kramers_series* p = nullptr;
  explicit SeriesHandle(int order) { check(kramers_series_solve(order, 0.0, nullptr, &p)); }
  ~SeriesHandle() { kramers_series_free(p); }
  SeriesHandle(const SeriesHandle&) = delete;
  SeriesHandle& operator=(const SeriesHandle&) = delete;
};

struct OracleHandle {
  kramers_oracle* p = nullptr;
  explicit OracleHandle(const kramers_oracle_config& cfg) { check(kramers_oracle_solve(&cfg, &p)); }
  ~OracleHandle() { kramers_oracle_free(p); }
  OracleHandle(const OracleHandle&) = delete;
  OracleHandle& operator=(const OracleHandle&) = delete;
};

double slip(const SeriesHandle& s, double q, int order) {
  double u = 0.0;
  check(kramers_series_slip(s.p, q, order, &u));
  return u;
}

std::string timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw Failure{kIo, "cannot write " + path};
}

struct Manifest {
  std::string command;
  ordered_json parameters = ordered_json::object();
  std::vector<std::string> outputs;

  void write(const std::string& path) const {
    ordered_json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["outputs"] = outputs;
    j["tool_version"] = kramers_version();
    j["timestamp"] = timestamp();
    write_text(path, j.dump(2) + "\n");
  }
};

std::string manifest_path(const std::string& override_path, const std::string& out, const std::string& command) {
  if (!override_path.empty()) return override_path;
  if (!out.empty()) return out + ".manifest.json";
  return "kramers-" + command + ".manifest.json";
}

// Emit to a file (recorded in the manifest) or to stdout.
void emit(const std::string& text, const std::string& out, Manifest& m) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  write_text(out, text);
  m.outputs.push_back(out);
}

// ---------------------------------------------------------------------------

struct KernelsArgs {
  std::vector<int> n_list{0, 1, 2};
  std::vector<double> k_list{0.0, 0.5, 1.0, 2.0};
  std::string out;
};

void run_kernels(const KernelsArgs& a, Manifest& m) {
  if (a.n_list.empty() || a.k_list.empty()) throw Failure{kUsage, "--n-list and --k-list must be non-empty"};
  std::ostringstream csv;
  csv << "n,k,T_n,L,phi0\n";
  for (int n : a.n_list)
    for (double k : a.k_list) {
      double t = 0, l = 0, p = 0;
      check(kramers_kernel_T(n, k, nullptr, &t, nullptr));
      check(kramers_kernel_L(k, nullptr, &l, nullptr));
      check(kramers_kernel_phi0(k, nullptr, &p, nullptr));
      csv << n << ',' << fmt(k) << ',' << fmt(t) << ',' << fmt(l) << ',' << fmt(p) << '\n';
    }
  m.parameters["n_list"] = a.n_list;
  m.parameters["k_list"] = a.k_list;
  emit(csv.str(), a.out, m);
}

struct SlipArgs {
  double q = 1.0;
  double alpha = -5.0;
  int order = 2;
  std::string format = "json";
  std::string out;
};

void run_slip(const SlipArgs& a, Manifest& m) {
  check_q(a.q);
  SeriesHandle s(a.order);
  std::vector<double> V(a.order + 1);
  for (int n = 0; n <= a.order; ++n) check(kramers_series_coefficient(s.p, n, &V[n]));
  double kv = 0.0;
  check(kramers_series_slip_coefficient(s.p, a.alpha, a.q, -1, &kv));
  const double u = slip(s, a.q, -1);
  const bool ladder = a.q == 1.0;

  std::ostringstream text;
  if (a.format == "csv") {
    text << "N,V_N,U_sl_over_Gv" << (ladder ? ",rel_error" : "") << '\n';
    for (int n = 0; n <= a.order; ++n) {
      const double un = slip(s, a.q, n);
      text << n << ',' << fmt(V[n]) << ',' << fmt(un);
      if (ladder) text << ',' << fmt((un - kExactSlip) / kExactSlip);
      text << '\n';
    }
  } else {
    ordered_json j;
    j["q"] = a.q;
    j["alpha"] = a.alpha;
    j["order"] = a.order;
    j["V"] = V;
    j["U_sl_over_Gv"] = u;
    j["K_v"] = kv;
    ordered_json terms = ordered_json::array();
    for (int n = 0; n <= a.order; ++n) terms.push_back(V[n] * std::pow(a.q, n));
    j["per_order_terms"] = terms;
    if (ladder) {
      ordered_json rows = ordered_json::array();
      for (int n = 0; n <= a.order; ++n) {
        const double un = slip(s, a.q, n);
        rows.push_back({{"N", n}, {"U_sl_over_Gv", un}, {"rel_error", (un - kExactSlip) / kExactSlip}});
      }
      j["error_ladder"] = rows;
    }
    text << j.dump(2) << '\n';
  }
  m.parameters["q"] = a.q;
  m.parameters["alpha"] = a.alpha;
  m.parameters["order"] = a.order;
  m.parameters["format"] = a.format;
  emit(text.str(), a.out, m);
}

struct ProfileArgs {
  double q = 1.0;
  double alpha = -5.0;
  int order = 2;
  double xmax = 10.0;
  int nx = 201;
  std::string out = "kramers-profile.csv";
  bool svg = false;
  int figure = 0;
  bool components = false;
};

void run_profile(ProfileArgs a, Manifest& m) {
  if (a.figure) {
    static const double kFigureQ[] = {1.0, 0.5, 0.25};
    a.q = kFigureQ[a.figure - 1];
    a.alpha = -5.0;
  }
  check_q(a.q);
  if (a.nx < 1) throw Failure{kUsage, "--nx must be positive"};
  if (!(a.xmax > 0.0)) throw Failure{kUsage, "--xmax must be positive"};
  std::vector<double> x(a.nx);
  for (int i = 0; i < a.nx; ++i) x[i] = a.nx == 1 ? 0.0 : a.xmax * i / (a.nx - 1);

  SeriesHandle s(a.order);
  check(kramers_profile_write_csv(s.p, a.q, a.order, x.data(), x.size(), a.components ? 1 : 0, a.out.c_str()));
  m.outputs.push_back(a.out);

  if (a.svg) {
    std::vector<double> U(x.size());
    check(kramers_profile_evaluate(s.p, a.q, a.order, x.data(), x.size(), U.data(), nullptr));
    const bool has_ext = a.out.size() > 4 && a.out.ends_with(".csv");
    const std::string path = a.out.substr(0, a.out.size() - (has_ext ? 4 : 0)) + ".svg";
    kramers_cli::PlotLabels labels{"Mass velocity, q = " + fmt(a.q) + ", alpha = " + fmt(a.alpha), "x",
                                   "U(x) / G_v"};
    write_text(path, kramers_cli::render_svg({{"", x, U}}, labels));
    m.outputs.push_back(path);
  }
  m.parameters["q"] = a.q;
  m.parameters["alpha"] = a.alpha;
  m.parameters["order"] = a.order;
  m.parameters["xmax"] = a.xmax;
  m.parameters["nx"] = a.nx;
  m.parameters["figure"] = a.figure;
  m.parameters["components"] = a.components;
}

struct OracleArgs {
  double q = 1.0;
  int nmu = 32;
  double xmax = 30.0;
  int nx = 600;
  std::string out;
  std::string dump;
};

void run_oracle(OracleArgs a, Manifest& m) {
  check_q(a.q);
  if (a.nmu < 8) {
    std::cerr << "warning: " << a.nmu << " ordinates per half-range is too coarse; using 8\n";
    a.nmu = 8;
  }
  kramers_oracle_config cfg;
  kramers_oracle_config_default(&cfg);
  cfg.q = a.q;
  cfg.n_mu = a.nmu;
  cfg.x_max = a.xmax;
  cfg.n_x = a.nx;
  OracleHandle o(cfg);
  double u_sl = 0, u0 = 0, bc = 0;
  int iters = 0;
  check(kramers_oracle_summary(o.p, &u_sl, &u0, &bc, &iters));
  if (!a.dump.empty()) {
    check(kramers_oracle_write_csv(o.p, a.dump.c_str()));
    m.outputs.push_back(a.dump);
  }
  ordered_json j{{"U_sl", u_sl}, {"U0", u0}, {"bc_residual", bc}, {"iters", iters}};
  m.parameters["q"] = a.q;
  m.parameters["nmu"] = a.nmu;
  m.parameters["xmax"] = a.xmax;
  m.parameters["nx"] = a.nx;
  emit(j.dump(2) + "\n", a.out, m);
}

struct ConvergenceArgs {
  double q = 1.0;
  int max_order = 5;
  std::string out;
};

void run_convergence(const ConvergenceArgs& a, Manifest& m) {
  check_q(a.q);
  if (a.max_order < 0 || a.max_order > 8) throw Failure{kUsage, "--max-order must lie in [0,8]"};
  SeriesHandle s(a.max_order);
  kramers_oracle_config cfg;
  kramers_oracle_config_default(&cfg);
  cfg.q = a.q;
  OracleHandle o(cfg);
  double u_oracle = 0.0;
  check(kramers_oracle_summary(o.p, &u_oracle, nullptr, nullptr, nullptr));
  const bool exact = a.q == 1.0;

  std::ostringstream csv;
  csv << "N,U_sl,rel_error_oracle" << (exact ? ",rel_error_exact" : "") << '\n';
  for (int n = 0; n <= a.max_order; ++n) {
    const double u = slip(s, a.q, n);
    csv << n << ',' << fmt(u) << ',' << fmt((u - u_oracle) / u_oracle);
    if (exact) csv << ',' << fmt((u - kExactSlip) / kExactSlip);
    csv << '\n';
  }
  m.parameters["q"] = a.q;
  m.parameters["max_order"] = a.max_order;
  m.parameters["oracle_U_sl"] = u_oracle;
  emit(csv.str(), a.out, m);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slip velocity and Knudsen-layer profiles for a degenerate Fermi gas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kramers_version()));
  std::string manifest_override;

  KernelsArgs ka;
  auto* kernels = app.add_subcommand("kernels", "Tabulate T_n(k), L(k) and phi0(k) as CSV");
  kernels->add_option("--n-list", ka.n_list, "Kernel orders")->delimiter(',');
  kernels->add_option("--k-list", ka.k_list, "Wavenumbers")->delimiter(',');
  kernels->add_option("--out", ka.out, "Output CSV (default stdout)");

  SlipArgs sa;
  auto* slip_cmd = app.add_subcommand("slip", "Series coefficients, slip velocity and K_v");
  slip_cmd->add_option("--q", sa.q, "Accommodation coefficient in (0,1]")->required();
  slip_cmd->add_option("--alpha", sa.alpha, "Reduced chemical potential")->capture_default_str();
  slip_cmd->add_option("--order", sa.order, "Series order")->check(CLI::Range(0, 8))->capture_default_str();
  slip_cmd->add_option("--format", sa.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  slip_cmd->add_option("--out", sa.out, "Output file (default stdout)");

  ProfileArgs pa;
  auto* profile = app.add_subcommand("profile", "Mass-velocity profile U(x)/G_v");
  profile->add_option("--q", pa.q, "Accommodation coefficient in (0,1]")->capture_default_str();
  profile->add_option("--alpha", pa.alpha, "Reduced chemical potential")->capture_default_str();
  profile->add_option("--order", pa.order, "Series order")->check(CLI::Range(0, 8))->capture_default_str();
  profile->add_option("--xmax", pa.xmax, "Largest x")->capture_default_str();
  profile->add_option("--nx", pa.nx, "Number of uniform x nodes")->capture_default_str();
  profile->add_option("--out", pa.out, "Output CSV")->capture_default_str();
  profile->add_flag("--svg", pa.svg, "Also write an SVG plot next to the CSV");
  profile->add_option("--figure", pa.figure, "Preset: 1 (q=1), 2 (q=0.5), 3 (q=0.25), alpha=-5")
      ->check(CLI::Range(1, 3));
  profile->add_flag("--components", pa.components, "Add Uc0, Uc1, ... columns");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Discrete-ordinates half-space solution");
  oracle->add_option("--q", oa.q, "Accommodation coefficient in (0,1]")->capture_default_str();
  oracle->add_option("--nmu", oa.nmu, "Ordinates per half-range")->capture_default_str();
  oracle->add_option("--xmax", oa.xmax, "Slab depth")->capture_default_str();
  oracle->add_option("--nx", oa.nx, "Spatial cells")->capture_default_str();
  oracle->add_option("--out", oa.out, "Summary JSON (default stdout)");
  oracle->add_option("--dump", oa.dump, "CSV dump of U(x) and h(x, mu)");

  ConvergenceArgs ca;
  auto* conv = app.add_subcommand("convergence", "Slip error against series order");
  conv->add_option("--q", ca.q, "Accommodation coefficient in (0,1]")->capture_default_str();
  conv->add_option("--max-order", ca.max_order, "Highest series order")->capture_default_str();
  conv->add_option("--out", ca.out, "Output CSV (default stdout)");

  for (auto* sub : {kernels, slip_cmd, profile, oracle, conv})
    sub->add_option("--manifest", manifest_override, "Manifest path (default <out>.manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Manifest m;
  std::string out;
  try {
    if (*kernels) {
      m.command = "kernels";
      out = ka.out;
      run_kernels(ka, m);
    } else if (*slip_cmd) {
      m.command = "slip";
      out = sa.out;
      run_slip(sa, m);
    } else if (*profile) {
      m.command = "profile";
      out = pa.out;
      run_profile(pa, m);
    } else if (*oracle) {
      m.command = "oracle";
      out = oa.out;
      run_oracle(oa, m);
    } else {
      m.command = "convergence";
      out = ca.out;
      run_convergence(ca, m);
    }
    m.write(manifest_path(manifest_override, out, m.command));
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
