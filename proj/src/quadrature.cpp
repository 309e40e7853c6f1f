#include "kramers/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "kramers/error.hpp"

namespace kramers {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "quadrature tolerances must be positive");
  if (max_subdivisions < 1)
    throw Error(ErrorCode::kInvalidArgument, "max_subdivisions must be >= 1");
  if (semi_infinite_nodes < 16)
    throw Error(ErrorCode::kInvalidArgument, "semi_infinite_nodes must be >= 16");
}

QuadratureSpec QuadratureSpec::from_environment() {
  QuadratureSpec spec;
  if (const char* env = std::getenv("KRAMERS_QUAD_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end != env && std::isfinite(tol) && tol > 0.0) {
      spec.abs_tol = tol;
      spec.rel_tol = tol;
    }
  }
  return spec;
}

namespace {

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

Rule map_rule(Rule r, double a, double b) {
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

// One G7-K15 panel with the QUADPACK error heuristic.
Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b), half = 0.5 * (b - a);
  std::array<double, 15> fv{};
  const double fc = f(center);
  fv[7] = fc;
  double kron = fc * kWgk[7], gauss = fc * kWg[3];
  double resabs = std::abs(kron);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(center - dx), f2 = f(center + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    kron += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * kron;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));

  const double value = kron * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((kron - gauss) * half);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(err, 50.0 * eps * resabs);
  return {a, b, value, err};
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "Gauss-Legendre needs n >= 1");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre_pair(n, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, pm1] = legendre_pair(n, x);
    dp = n * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return map_rule(std::move(r), a, b);
}

Rule gauss_lobatto(int n, double a, double b) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "Gauss-Lobatto needs n >= 2");
  const int m = n - 1;  // interior nodes are the roots of P'_m
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i <= m / 2; ++i) {
    double x = (i == 0) ? 1.0 : std::cos(std::numbers::pi * i / m);
    if (i > 0) {
      for (int it = 0; it < 100; ++it) {
        const auto [p, pm1] = legendre_pair(m, x);
        const double dp = m * (x * p - pm1) / (x * x - 1.0);
        const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
        const double dx = dp / d2p;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
    }
    const double p = legendre_pair(m, x).first;
    const double w = 2.0 / (m * (m + 1.0) * p * p);
    r.nodes[i] = -x;
    r.nodes[m - i] = x;
    r.weights[i] = w;
    r.weights[m - i] = w;
  }
  return map_rule(std::move(r), a, b);
}

KernelValue integrate(const std::function<double(double)>& f, double a,
                      double b, const QuadratureSpec& spec,
                      std::span<const double> breakpoints) {
  if (a == b) return {};
  std::vector<double> edges{a};
  for (double p : breakpoints)
    if (p > std::min(a, b) && p < std::max(a, b)) edges.push_back(p);
  edges.push_back(b);
  if (a < b) std::sort(edges.begin() + 1, edges.end() - 1);
  else std::sort(edges.begin() + 1, edges.end() - 1, std::greater<>());

  std::vector<Segment> segs;
  segs.reserve(edges.size() + spec.max_subdivisions);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    segs.push_back(gk15(f, edges[i], edges[i + 1]));

  auto totals = [&segs] {
    double v = 0.0, e = 0.0;
    for (const auto& s : segs) {
      v += s.value;
      e += s.error;
    }
    return KernelValue{v, e};
  };

  for (int subdivisions = 0;; ++subdivisions) {
    const KernelValue t = totals();
    if (!std::isfinite(t.value))
      throw Error(ErrorCode::kNonConvergence, "integrand produced a non-finite value");
    if (t.est_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(t.value))) return t;
    if (subdivisions >= spec.max_subdivisions)
      throw Error(ErrorCode::kNonConvergence,
                  "adaptive quadrature did not converge (error estimate " +
                      std::to_string(t.est_error) + ")");
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const Segment& l, const Segment& r) { return l.error < r.error; });
    const double lo = worst->a, hi = worst->b, mid = 0.5 * (lo + hi);
    *worst = gk15(f, lo, mid);
    segs.push_back(gk15(f, mid, hi));
  }
}

Rule semi_infinite_rule(double a, double scale, int n) {
  const Rule base = gauss_legendre(n, 0.0, 1.0);
  Rule r;
  for (std::size_t i = 0; i < base.nodes.size(); ++i) {
    const double u = base.nodes[i], om = 1.0 - u;
    const double s = u / om;
    if (s > 60.0) continue;
    const double es = std::exp(s);
    r.nodes.push_back(a + scale * (es - 1.0));
    r.weights.push_back(base.weights[i] * scale * es / (om * om));
  }
  return r;
}

double integrate_tail(const std::function<double(double)>& f, double a,
                      double scale, const QuadratureSpec& spec) {
  static thread_local int cached_n = 0;
  static thread_local Rule cached;
  if (cached_n != spec.semi_infinite_nodes) {
    cached = semi_infinite_rule(0.0, 1.0, spec.semi_infinite_nodes);
    cached_n = spec.semi_infinite_nodes;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < cached.nodes.size(); ++i)
    sum += cached.weights[i] * f(a + scale * cached.nodes[i]);
  return sum * scale;
}

}  // namespace kramers
