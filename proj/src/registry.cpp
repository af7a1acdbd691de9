#include "ibd/registry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "ibd/expr.hpp"
#include "ibd/kernels.hpp"
#include "ibd/oracle.hpp"
#include "ibd/psido.hpp"
#include "ibd/qcalc.hpp"
#include "ibd/rational.hpp"
#include "ibd/rules.hpp"

namespace ibd {

namespace {

using ParamMap = std::map<std::string, double>;

struct Outcome {
  cplx method{0.0, 0.0};
  cplx oracle{0.0, 0.0};
  std::string note;
  bool flagged = false;
  bool force_fail = false;
  double runtime_tol = -1.0;  // >= 0: replaces the case default when no --tol
};

struct CaseDef {
  CaseInfo info;
  ParamMap defaults;
  std::function<Outcome(const ParamMap&, const RunOptions&)> run;
};

int int_param(const ParamMap& p, const std::string& key, int lo, int hi) {
  double v = p.at(key);
  if (!(v == std::floor(v)) || v < lo || v > hi)
    throw RegistryError("parameter " + key + " must be an integer in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return (int)v;
}

long long count_param(const ParamMap& p, const std::string& key, long long lo,
                      long long hi) {
  double v = p.at(key);
  if (!(v == std::floor(v)) || v < (double)lo || v > (double)hi)
    throw RegistryError("parameter " + key + " must be a count in [" +
                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return (long long)v;
}

// MC agreement bound: 3 standard errors, and at most 1% of the target.
double mc_tol(double standard_error, double target) {
  double band = std::min(3.0 * standard_error, 0.01 * std::abs(target));
  return std::max(band, 1e-12);
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> rate_vector(const ParamMap& p, int n) {
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = p.at("a" + std::to_string(i + 1));
  return a;
}

// the same 1-2 term exponential-polynomial population the property suites use
ExpPoly random_exp_poly(Rng& rng) {
  ExpPoly p;
  int terms = 1 + (int)(rng.next_u64() % 2);
  for (int t = 0; t < terms; ++t) {
    double c = 4.0 * rng.next_unit() - 2.0;
    double b = 0.5 + 2.5 * rng.next_unit();
    int n = (int)(rng.next_u64() % 3);
    p.terms.push_back({cplx(c, 0.0), b, n});
  }
  return normalize(p);
}

double ramanujan_window_oracle(int n, double p) {
  QuadResult osc = quad_oscillatory([n, p](double x) {
    return std::pow(std::sin(x), 2 * n + 1) * std::cos(2.0 * p * x) / x;
  });
  if (!osc.converged)
    throw RegistryError("oscillatory oracle did not converge for the window");
  return osc.value;
}

// ---------------------------------------------------------------------------
// quadrature honesty battery: 20 integrals with closed-form values
// ---------------------------------------------------------------------------

struct BatteryItem {
  const char* name;
  std::function<QuadResult()> run;
  double truth;
};

std::vector<BatteryItem> quad_battery() {
  const double inf = std::numeric_limits<double>::infinity();
  const double e_E1 = std::exp(1.0) * 0.21938393439552027368;
  std::vector<BatteryItem> items;
  auto q1 = [](std::function<double(double)> f, double a, double b) {
    return [=] { return quad_1d(f, a, b); };
  };
  items.push_back({"x^2 on [0,1]", q1([](double x) { return x * x; }, 0, 1), 1.0 / 3.0});
  items.push_back({"1/(1+x^2) on [0,1]",
                   q1([](double x) { return 1.0 / (1.0 + x * x); }, 0, 1), M_PI / 4.0});
  items.push_back({"sin on [0,pi]", q1([](double x) { return std::sin(x); }, 0, M_PI), 2.0});
  items.push_back({"-log x on [0,1]", q1([](double x) { return -std::log(x); }, 0, 1), 1.0});
  items.push_back({"x^{-1/2} on [0,1]",
                   q1([](double x) { return 1.0 / std::sqrt(x); }, 0, 1), 2.0});
  items.push_back({"e^x on [0,2]", q1([](double x) { return std::exp(x); }, 0, 2),
                   std::exp(2.0) - 1.0});
  items.push_back({"e^{-x} tail", q1([](double x) { return std::exp(-x); }, 0, inf), 1.0});
  items.push_back({"gaussian tail", q1([](double x) { return std::exp(-x * x); }, 0, inf),
                   std::sqrt(M_PI) / 2.0});
  items.push_back({"1/(1+x^2) tail",
                   q1([](double x) { return 1.0 / (1.0 + x * x); }, 0, inf), M_PI / 2.0});
  items.push_back({"x^2 e^{-2x}",
                   q1([](double x) { return x * x * std::exp(-2.0 * x); }, 0, inf), 0.25});
  items.push_back({"e^{-x}/(1+x)",
                   q1([](double x) { return std::exp(-x) / (1.0 + x); }, 0, inf), e_E1});
  items.push_back({"sqrt(x) e^{-x}",
                   q1([](double x) { return std::sqrt(x) * std::exp(-x); }, 0, inf),
                   std::sqrt(M_PI) / 2.0});
  items.push_back({"sin x / x",
                   [] { return quad_oscillatory([](double x) { return std::sin(x) / x; }); },
                   M_PI / 2.0});
  items.push_back({"e^{-x/2} sin x / x",
                   [] {
                     return quad_oscillatory(
                         [](double x) { return std::exp(-0.5 * x) * std::sin(x) / x; });
                   },
                   std::atan(2.0)});
  items.push_back({"cos x/(1+x^2)",
                   [] {
                     return quad_oscillatory(
                         [](double x) { return std::cos(x) / (1.0 + x * x); }, 1e-9,
                         M_PI / 2.0);
                   },
                   M_PI / (2.0 * std::exp(1.0))});
  items.push_back({"sin x/(x(1+x^2))",
                   [] {
                     return quad_oscillatory(
                         [](double x) { return std::sin(x) / (x * (1.0 + x * x)); });
                   },
                   M_PI * (1.0 - std::exp(-1.0)) / 2.0});
  items.push_back({"e^{-x-y}",
                   [] {
                     return quad_2d_orthant(
                         [](double x, double y) { return std::exp(-x - y); });
                   },
                   1.0});
  items.push_back({"xy e^{-x-2y}",
                   [] {
                     return quad_2d_orthant([](double x, double y) {
                       return x * y * std::exp(-x - 2.0 * y);
                     });
                   },
                   0.25});
  items.push_back({"(x+y) e^{-x-y}",
                   [] {
                     return quad_2d_orthant([](double x, double y) {
                       return (x + y) * std::exp(-x - y);
                     });
                   },
                   2.0});
  items.push_back({"sin x e^{-x-y}",
                   [] {
                     return quad_2d_orthant([](double x, double y) {
                       return std::sin(x) * std::exp(-x - y);
                     });
                   },
                   0.5});
  return items;
}

// ---------------------------------------------------------------------------
// the case table
// ---------------------------------------------------------------------------

std::vector<CaseDef> build_catalog() {
  std::vector<CaseDef> defs;

  defs.push_back(
      {{"sinc", "int_0^inf sin(y)/y dy = pi/2 by the operator route on -log x",
        "Dirichlet integral", 1e-8},
       {},
       [](const ParamMap&, const RunOptions&) {
         Outcome out;
         SincResult r = sinc_route();
         out.method = cplx(r.routed, 0.0);
         QuadResult osc = quad_oscillatory([](double y) { return std::sin(y) / y; });
         out.oracle = cplx(osc.value, 0.0);
         out.note = "exact value pi/2; oracle err est " + short_num(osc.error_estimate);
         return out;
       }});

  defs.push_back(
      {{"sinc-alt", "same integral through the -Im log(y - i) shortcut",
        "Dirichlet integral", 1e-8},
       {},
       [](const ParamMap&, const RunOptions&) {
         Outcome out;
         SincResult r = sinc_alternative_route();
         out.method = cplx(r.routed, 0.0);
         QuadResult osc = quad_oscillatory([](double y) { return std::sin(y) / y; });
         out.oracle = cplx(osc.value, 0.0);
         out.note = "exact value pi/2 via the distributional kernel";
         return out;
       }});

  defs.push_back(
      {{"ramanujan-exact",
        "window values I_{m,p}: Heaviside and Gamma closed forms agree exactly",
        "Ramanujan, Notebook II, Entry 16(ii), p. 264", 0.0},
       {{"n", 12}},
       [](const ParamMap& p, const RunOptions&) {
         int n = int_param(p, "n", 0, 15);
         long long matches = 0, total = 0;
         for (int m = 0; m <= n; ++m)
           for (int q = -(n + 2); q <= n + 2; ++q) {
             ++total;
             if (ramanujan_heaviside(m, (double)q) == ramanujan_gamma(m, q)) ++matches;
           }
         Outcome out;
         out.method = cplx((double)matches, 0.0);
         out.oracle = cplx((double)total, 0.0);
         out.note = "exact rational sweep, " + std::to_string(total) + " (m,p) pairs";
         return out;
       }});

  struct WindowProbe {
    int n, p;
  };
  for (WindowProbe w : {WindowProbe{0, 0}, WindowProbe{1, 0}, WindowProbe{1, 1},
                        WindowProbe{2, 1}}) {
    std::string id = "ramanujan-window-n" + std::to_string(w.n) + "-p" +
                     std::to_string(w.p);
    defs.push_back(
        {{id, "I_{n,p} = int_0^inf sin^{2n+1}(x) cos(2px)/x dx vs the oscillatory oracle",
          "Ramanujan, Notebook II, Entry 16(ii), p. 264", 1e-4},
         {{"n", (double)w.n}, {"p", (double)w.p}},
         [](const ParamMap& p, const RunOptions&) {
           int n = int_param(p, "n", 0, 8);
           int pp = int_param(p, "p", -10, 10);
           Outcome out;
           out.method = cplx(ramanujan_gamma(n, pp).to_double(), 0.0);
           out.oracle = cplx(ramanujan_window_oracle(n, (double)pp), 0.0);
           out.note = "exact value (-1)^p C(2n,n-p) pi / 2^{2n+1}";
           return out;
         }});
  }

  defs.push_back(
      {{"ramanujan-midpoint",
        "half-odd p sits on the Heaviside jump: H(0) = 1/2 matches the integral",
        "Ramanujan, Notebook II, Entry 16(ii), p. 264", 2e-3},
       {{"n", 1}, {"p", 0.5}, {"midpoint", 1}},
       [](const ParamMap& p, const RunOptions&) {
         int n = int_param(p, "n", 0, 8);
         double pp = p.at("p");
         bool mid = p.at("midpoint") != 0.0;
         Outcome out;
         out.method =
             cplx(ramanujan_heaviside(n, pp, mid ? H0::Half : H0::One).to_double(), 0.0);
         out.oracle = cplx(ramanujan_window_oracle(n, pp), 0.0);
         out.note = std::string("H(0) = ") + (mid ? "1/2" : "1") +
                    "; even-frequency tail holds the oscillatory oracle near 1e-3";
         return out;
       }});

  defs.push_back(
      {{"bivariate-log", "int int e^{-ux-vy}/(x+y) dx dy = (log u - log v)/(u - v)",
        "Frullani integral", 1e-9},
       {{"u", 2.0}, {"v", 1.0}},
       [](const ParamMap& p, const RunOptions&) {
         double u = p.at("u"), v = p.at("v");
         if (u <= 0.0 || v <= 0.0 || std::abs(u - v) < 1e-6)
           throw RegistryError("bivariate-log needs u, v > 0 and u != v");
         Outcome out;
         out.method = cplx(bivariate_xplusy(0.0, u, v), 0.0);
         QuadResult q = quad_1d(
             [=](double s) {
               return (std::exp(-v * s) - std::exp(-u * s)) / ((u - v) * s);
             },
             0.0, std::numeric_limits<double>::infinity(), 1e-12);
         out.oracle = cplx(q.value, 0.0);
         out.note = "1-D Frullani reduction of the nu = 0 entry";
         return out;
       }});

  defs.push_back(
      {{"bivariate-grid",
        "closed form vs iterated 2-D quadrature over 10 (u,v) pairs, nu in {0.5,1,2.5}",
        "Laplace transform of (x+y)^{nu-1} on the quadrant", 1e-5},
       {},
       [](const ParamMap&, const RunOptions&) {
         const double nus[] = {0.5, 1.0, 2.5};
         const double us[] = {0.5, 1.0, 3.0};
         const double vs[] = {0.8, 2.0, 4.0};
         std::vector<std::pair<double, double>> pairs;
         for (double u : us)
           for (double v : vs) pairs.push_back({u, v});
         pairs.push_back({2.2, 0.7});
         double worst = 0.0;
         for (double nu : nus)
           for (auto [u, v] : pairs) {
             QuadResult q = quad_2d_orthant([=](double x, double y) {
               return std::pow(x + y, nu - 1.0) * std::exp(-u * x - v * y);
             });
             double m = bivariate_xplusy(nu, u, v);
             worst = std::max(worst,
                              std::abs(m - q.value) / std::max(1.0, std::abs(m)));
           }
         Outcome out;
         out.method = cplx(worst, 0.0);
         out.oracle = cplx(0.0, 0.0);
         out.note = "worst relative deviation over 30 parameter combinations";
         return out;
       }});

  defs.push_back(
      {{"bivariate-confluent", "u = v = 1, nu = 1: the confluent value Gamma(2) = 1",
        "Laplace transform of (x+y)^{nu-1} on the quadrant", 1e-8},
       {{"nu", 1.0}, {"u", 1.0}},
       [](const ParamMap& p, const RunOptions&) {
         double nu = p.at("nu"), u = p.at("u");
         if (nu < 0.0 || u <= 0.0)
           throw RegistryError("bivariate-confluent needs nu >= 0 and u > 0");
         Outcome out;
         out.method = cplx(bivariate_xplusy(nu, u, u), 0.0);
         out.oracle = cplx(std::tgamma(nu + 1.0) / std::pow(u, nu + 1.0), 0.0);
         out.note = "confluent closed form Gamma(nu+1)/u^{nu+1}";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3354-n1",
        "n = 1 orthant reduction: rhs quadrature equals e E_1(1)",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.3.5.4", 1e-8},
       {},
       [](const ParamMap&, const RunOptions&) {
         Outcome out;
         InversePowerResult r = inverse_power_apply(
             1.0, 1.0, [](const std::vector<double>& p) { return 1.0 / p[0]; }, {1.0},
             {1.0});
         out.method = cplx(r.value, 0.0);
         out.oracle = cplx(std::exp(1.0) * 0.21938393439552027368, 0.0);
         out.note = "int_0^inf e^{-t}/(1+t) dt; reference value e E_1(1)";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3354-n1-mc",
        "n = 1: Monte Carlo left side vs the Euler-representation right side",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.3.5.4", 1e-2},
       {{"samples", 1000000}},
       [](const ParamMap& p, const RunOptions& opts) {
         long long samples = count_param(p, "samples", 1000, 20000000);
         EulerReduceResult r =
             euler_like_reduce(1.0, {1.0}, {1.0}, {1.0}, 1.0, samples, opts.seed);
         Outcome out;
         out.method = cplx(r.lhs.estimate, 0.0);
         out.oracle = cplx(r.rhs, 0.0);
         out.runtime_tol = mc_tol(r.lhs.standard_error, r.rhs);
         out.note = "mc se " + short_num(r.lhs.standard_error) +
                    "; bound min(3 se, 1%)";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3354-n2-mc",
        "n = 2, mu = 2, a0 = 0.5, a = (1,2): Monte Carlo vs reduced quadrature",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.3.5.4", 1e-2},
       {{"samples", 1000000}},
       [](const ParamMap& p, const RunOptions& opts) {
         long long samples = count_param(p, "samples", 1000, 20000000);
         EulerReduceResult r = euler_like_reduce(0.5, {1.0, 2.0}, {1.0, 1.0},
                                                 {1.0, 1.0}, 2.0, samples, opts.seed);
         Outcome out;
         out.method = cplx(r.lhs.estimate, 0.0);
         out.oracle = cplx(r.rhs, 0.0);
         out.runtime_tol = mc_tol(r.lhs.standard_error, r.rhs);
         out.note = "mc se " + short_num(r.lhs.standard_error) +
                    "; bound min(3 se, 1%)";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3354-sub",
        "mu = 1/2 goes through the t = tau^q substitution; 1-D oracle on the left",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.3.5.4", 1e-7},
       {},
       [](const ParamMap&, const RunOptions&) {
         InversePowerResult r = inverse_power_apply(
             0.5, 1.0,
             [](const std::vector<double>& p) { return std::pow(p[0], -1.5); }, {2.0},
             {1.0});
         QuadResult q = quad_1d(
             [](double x) {
               return std::exp(-2.0 * x) * std::sqrt(x) / std::sqrt(1.0 + x);
             },
             0.0, std::numeric_limits<double>::infinity(), 1e-12);
         Outcome out;
         // Gamma(nu) prefactor from reducing the x-integral to the operator form.
         out.method = cplx(std::tgamma(1.5) * r.value, 0.0);
         out.oracle = cplx(q.value, 0.0);
         out.note = "integrable endpoint handled by substitution";
         return out;
       }});

  for (int n = 1; n <= 6; ++n) {
    defs.push_back(
        {{"rotational-sinc-n" + std::to_string(n),
          "int_{R^n} sin|x|/|x|^n dx = pi^{n/2+1}/Gamma(n/2), exact kernel route",
          "rotationally invariant sinc integral, closed form", 1e-12},
         {},
         [n](const ParamMap&, const RunOptions&) {
           RotationalSinc r = rotational_eval_sinc(n);
           Outcome out;
           out.method = cplx(r.routed, 0.0);
           out.oracle =
               cplx(std::pow(M_PI, 0.5 * n + 1.0) / std::tgamma(0.5 * n), 0.0);
           out.force_fail = !r.verified;
           out.note = r.verified
                          ? "kernel expansion verified term by term; value exact in "
                            "rational pi arithmetic"
                          : "kernel structure check FAILED";
           return out;
         }});
  }

  for (int n : {2, 3}) {
    defs.push_back(
        {{"radial-quad-n" + std::to_string(n),
          "the same I_n against the accelerated radial quadrature",
          "rotationally invariant sinc integral, closed form", 1e-6},
         {},
         [n](const ParamMap&, const RunOptions&) {
           Outcome out;
           out.method = cplx(rotational_eval_sinc(n).routed, 0.0);
           double surface = 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
           QuadResult osc =
               quad_oscillatory([](double r) { return std::sin(r) / r; });
           out.oracle = cplx(surface * osc.value, 0.0);
           out.note = "radial reduction S_{n-1} int_0^inf sin(r)/r dr";
           return out;
         }});
  }

  defs.push_back(
      {{"radial-moment", "int_{R^3} |x| e^{-2|x|} e^{-u|x|} dx at u = 1/2",
        "radial moment, surface measure 4 pi", 1e-8},
       {{"u", 0.5}},
       [](const ParamMap& p, const RunOptions&) {
         double u = p.at("u");
         if (u < 0.0) throw RegistryError("radial-moment needs u >= 0");
         Outcome out;
         out.method = cplx(rotational_eval(parse("r*exp(-2*r)"), 3, u), 0.0);
         QuadResult q = quad_1d(
             [=](double r) {
               return 4.0 * M_PI * r * r * r * std::exp(-(2.0 + u) * r);
             },
             0.0, std::numeric_limits<double>::infinity(), 1e-12);
         out.oracle = cplx(q.value, 0.0);
         out.note = "radial quadrature oracle";
         return out;
       }});

  defs.push_back(
      {{"simplex-closed-frozen",
        "n = 2, a = (1,2): closed form against an independently assembled value",
        "Laplace transform over the standard simplex", 1e-13},
       {},
       [](const ParamMap&, const RunOptions&) {
         Outcome out;
         out.method = cplx(simplex_laplace_closed({cplx(1.0, 0.0), cplx(2.0, 0.0)}).real(), 0.0);
         out.oracle = cplx((1.0 - std::exp(-1.0)) + (std::exp(-2.0) - 1.0) / 2.0, 0.0);
         out.note = "term-by-term assembly 0.19978820044686402";
         return out;
       }});

  struct SimplexMc {
    const char* id;
    std::vector<double> a;
  };
  for (const SimplexMc& sm :
       {SimplexMc{"simplex-mc-n2", {1.0, 3.0}},
        SimplexMc{"simplex-mc-n3", {1.0, 2.0, 0.5}},
        SimplexMc{"simplex-mc-n5", {0.5, 1.0, 1.5, 2.5, 4.0}}}) {
    ParamMap defaults{{"samples", 1000000}};
    for (size_t i = 0; i < sm.a.size(); ++i)
      defaults["a" + std::to_string(i + 1)] = sm.a[i];
    int n = (int)sm.a.size();
    defs.push_back(
        {{sm.id, "closed form vs uniform simplex Monte Carlo, n = " + std::to_string(n),
          "Laplace transform over the standard simplex", 1e-2},
         defaults,
         [n](const ParamMap& p, const RunOptions& opts) {
           long long samples = count_param(p, "samples", 1000, 20000000);
           std::vector<double> a = rate_vector(p, n);
           std::vector<cplx> ac(a.begin(), a.end());
           double v = simplex_laplace(ac);
           McResult mc = mc_simplex(
               [&](const std::vector<double>& x) {
                 double dot = 0.0;
                 for (int i = 0; i < n; ++i) dot += a[i] * x[i];
                 return std::exp(-dot);
               },
               n, (uint64_t)samples, opts.seed);
           Outcome out;
           out.method = cplx(v, 0.0);
           out.oracle = cplx(mc.estimate, 0.0);
           out.runtime_tol = mc_tol(mc.standard_error, v);
           out.note = "mc se " + short_num(mc.standard_error) +
                      "; bound min(3 se, 1%)";
           return out;
         }});
  }

  for (int n : {2, 3}) {
    std::vector<double> a;
    for (int i = 1; i <= n; ++i) a.push_back((double)i);
    ParamMap defaults;
    for (int i = 0; i < n; ++i) defaults["a" + std::to_string(i + 1)] = a[i];
    defs.push_back(
        {{"simplex-heaviside-n" + std::to_string(n),
          "indicator route: H as the Fourier limit of the damped kernel",
          "Laplace transform over the standard simplex", 1e-5},
         defaults,
         [n](const ParamMap& p, const RunOptions&) {
           std::vector<double> a = rate_vector(p, n);
           HeavisideRouteResult h = simplex_laplace_via_heaviside(a);
           std::vector<cplx> ac(a.begin(), a.end());
           Outcome out;
           out.method = cplx(h.value, 0.0);
           out.oracle = cplx(simplex_laplace(ac), 0.0);
           out.note = "route err est " + short_num(h.error_estimate);
           return out;
         }});
  }

  for (int n : {3, 5}) {
    defs.push_back(
        {{"simplex-volume-n" + std::to_string(n),
          "a -> 0 limit of the transform recovers the volume 1/n!",
          "simplex volume 1/n!", 1e-6},
         {},
         [n](const ParamMap&, const RunOptions&) {
           Outcome out;
           out.method =
               cplx(simplex_laplace(std::vector<cplx>((size_t)n, cplx(0.0, 0.0))), 0.0);
           out.oracle = cplx(1.0 / (double)factorial(n), 0.0);
           out.note = "perturbed rates, even-order Richardson limit";
           return out;
         }});
  }

  defs.push_back(
      {{"simplex-degenerate",
        "a = (0,1): one vanishing rate among distinct ones; value 1/e",
        "Laplace transform over the standard simplex", 1e-8},
       {},
       [](const ParamMap&, const RunOptions&) {
         Outcome out;
         out.method = cplx(simplex_laplace({cplx(0.0, 0.0), cplx(1.0, 0.0)}), 0.0);
         out.oracle = cplx(std::exp(-1.0), 0.0);
         out.note = "i eps k perturbation with Richardson extrapolation";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3223-unit",
        "weighted simplex reduction, f = 1, alpha = (1,1,1): the volume 1/6",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.2.2.3", 1e-10},
       {},
       [](const ParamMap&, const RunOptions& opts) {
         WeightedReduceResult r = simplex_weighted_reduce(
             {1.0, 1.0, 1.0}, [](double) { return 1.0; }, 0.0, 10000, opts.seed);
         Outcome out;
         out.method = cplx(r.reduced, 0.0);
         out.oracle = cplx(1.0 / 6.0, 0.0);
         out.note = "direct Dirichlet-sampling estimate has zero variance here";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3223-exp",
        "alpha = (1,2,1.5), f = e^{-t}, u = 1/2: reduced 1-D form vs direct MC",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.2.2.3", 1e-2},
       {{"samples", 200000}},
       [](const ParamMap& p, const RunOptions& opts) {
         long long samples = count_param(p, "samples", 1000, 20000000);
         WeightedReduceResult r = simplex_weighted_reduce(
             {1.0, 2.0, 1.5}, [](double t) { return std::exp(-t); }, 0.5, samples,
             opts.seed);
         Outcome out;
         out.method = cplx(r.reduced, 0.0);
         out.oracle = cplx(r.direct.estimate, 0.0);
         out.runtime_tol = mc_tol(r.direct.standard_error, r.reduced);
         out.note = "mc se " + short_num(r.direct.standard_error) +
                    "; bound min(3 se, 1%)";
         return out;
       }});

  defs.push_back(
      {{"prudnikov-3223-sin",
        "alpha = (1,1,1), f = sin t, u = 1: reduced 1-D form vs direct MC",
        "Prudnikov-Brychkov-Marichev vol. 1, Entry 3.2.2.3", 1e-2},
       {{"samples", 200000}},
       [](const ParamMap& p, const RunOptions& opts) {
         long long samples = count_param(p, "samples", 1000, 20000000);
         WeightedReduceResult r = simplex_weighted_reduce(
             {1.0, 1.0, 1.0}, [](double t) { return std::sin(t); }, 1.0, samples,
             opts.seed);
         Outcome out;
         out.method = cplx(r.reduced, 0.0);
         out.oracle = cplx(r.direct.estimate, 0.0);
         out.runtime_tol = std::max(3.0 * r.direct.standard_error, 1e-12);
         out.note = "mc se " + short_num(r.direct.standard_error) + "; bound 3 se";
         return out;
       }});

  defs.push_back(
      {{"ibp-random",
        "integration by parts through the limit rule on random exp-polynomials",
        "integration by parts identity", 1e-8},
       {{"pairs", 100}},
       [](const ParamMap& p, const RunOptions& opts) {
         long long pairs = count_param(p, "pairs", 1, 10000);
         Rng rng(opts.seed);
         double worst = 0.0;
         for (long long t = 0; t < pairs; ++t) {
           ExpPoly f = random_exp_poly(rng);
           ExpPoly g = random_exp_poly(rng);
           if (f.terms.empty() || g.terms.empty()) continue;
           double lhs = laplace_limit_eval(mul(f, g.derivative())).real();
           double rhs = laplace_limit_eval(mul(f.derivative(), g)).real();
           double boundary = (f.eval(0.0) * g.eval(0.0)).real();
           worst = std::max(worst, std::abs(lhs + rhs + boundary));
         }
         Outcome out;
         out.method = cplx(worst, 0.0);
         out.oracle = cplx(0.0, 0.0);
         out.note = "worst |int fg' + int f'g + f(0)g(0)| over " +
                    std::to_string(pairs) + " pairs";
         return out;
       }});

  defs.push_back(
      {{"cov-random",
        "linear change of variables leaves the limit value fixed",
        "change of variables identity", 1e-10},
       {{"pairs", 100}},
       [](const ParamMap& p, const RunOptions& opts) {
         long long pairs = count_param(p, "pairs", 1, 10000);
         Rng rng(opts.seed);
         const double scales[] = {0.5, 2.0, 3.7};
         double worst = 0.0;
         for (long long t = 0; t < pairs; ++t) {
           ExpPoly f = random_exp_poly(rng);
           if (f.terms.empty()) continue;
           double c = scales[t % 3];
           ExpPoly g;
           for (const auto& term : f.terms)
             g.terms.push_back({term.c * std::pow(c, term.n + 1), term.b * c, term.n});
           g = normalize(g);
           double v0 = laplace_limit_eval(f).real();
           double v1 = laplace_limit_eval(g).real();
           worst = std::max(worst, std::abs(v1 - v0) / std::max(1.0, std::abs(v0)));
         }
         Outcome out;
         out.method = cplx(worst, 0.0);
         out.oracle = cplx(0.0, 0.0);
         out.note = "worst relative drift under y -> cy over " +
                    std::to_string(pairs) + " draws";
         return out;
       }});

  defs.push_back(
      {{"tensor-2d", "separable operator on 1/(u v) vs 2-D quadrature",
        "double Laplace transform of xy e^{-x-y}", 1e-7},
       {{"u", 0.5}, {"v", 1.5}},
       [](const ParamMap& p, const RunOptions&) {
         double u = p.at("u"), v = p.at("v");
         if (u < 0.0 || v < 0.0) throw RegistryError("tensor-2d needs u, v >= 0");
         Outcome out;
         out.method =
             cplx(tensor_eval(parse("x*y*exp(-x-y)"), {"x", "y"}, {u, v}), 0.0);
         QuadResult q = quad_2d_orthant([=](double x, double y) {
           return x * y * std::exp(-(1.0 + u) * x - (1.0 + v) * y);
         });
         out.oracle = cplx(q.value, 0.0);
         out.note = "operator route at interior rates";
         return out;
       }});

  defs.push_back(
      {{"laplace-interval", "finite-interval kernel: int_0^2 x e^{-x} dx",
        "finite-interval Laplace kernel", 1e-10},
       {},
       [](const ParamMap&, const RunOptions&) {
         Outcome out;
         out.method =
             cplx(laplace_limit_eval(parse("x*exp(-x)"), Interval{0.0, 2.0}).real(),
                  0.0);
         QuadResult q = quad_1d([](double x) { return x * std::exp(-x); }, 0.0, 2.0,
                                1e-12);
         out.oracle = cplx(q.value, 0.0);
         out.note = "closed value 1 - 3 e^{-2}";
         return out;
       }});

  defs.push_back(
      {{"qcalc-monomials",
        "Jackson integral of x^m on [0,1] equals 1/[m+1]_q, m <= 5",
        "Jackson integral of monomials", 1e-14},
       {},
       [](const ParamMap&, const RunOptions&) {
         double worst = 0.0;
         for (double q : {0.3, 0.5, 0.9}) {
           QContext ctx;
           ctx.q = q;
           ctx.tol = 1e-15;
           for (int m = 0; m <= 5; ++m) {
             JacksonResult j = jackson_integral(
                 [m](double x) { return std::pow(x, (double)m); }, 0.0, 1.0, ctx);
             worst = std::max(worst,
                              std::abs(j.value - 1.0 / q_int((double)(m + 1), ctx)));
           }
         }
         Outcome out;
         out.method = cplx(worst, 0.0);
         out.oracle = cplx(0.0, 0.0);
         out.note = "worst error over m <= 5, q in {0.3, 0.5, 0.9}";
         return out;
       }});

  defs.push_back(
      {{"qcalc-ibd-exp",
        "operator evaluation of int_0^1 e^x d_q x vs the Jackson sum",
        "q-deformed integration by differentiation", 1e-10},
       {{"q", 0.5}},
       [](const ParamMap& p, const RunOptions&) {
         QContext ctx;
         ctx.q = p.at("q");
         Outcome out;
         out.method = cplx(q_ibd_eval(parse("exp(x)"), 0.0, 1.0, ctx), 0.0);
         out.oracle = cplx(
             jackson_integral([](double x) { return std::exp(x); }, 0.0, 1.0, ctx).value,
             0.0);
         out.note = "Taylor-coefficient route vs direct q-sum";
         return out;
       }});

  defs.push_back(
      {{"qcalc-ibd-sin",
        "operator evaluation of int_0^2 sin x d_q x vs the Jackson sum",
        "q-deformed integration by differentiation", 1e-10},
       {{"q", 0.3}},
       [](const ParamMap& p, const RunOptions&) {
         QContext ctx;
         ctx.q = p.at("q");
         Outcome out;
         out.method = cplx(q_ibd_eval(parse("sin(x)"), 0.0, 2.0, ctx), 0.0);
         out.oracle = cplx(
             jackson_integral([](double x) { return std::sin(x); }, 0.0, 2.0, ctx).value,
             0.0);
         out.note = "Taylor-coefficient route vs direct q-sum";
         return out;
       }});

  defs.push_back(
      {{"qcalc-eq-functional", "D_q e_q(a x) = a e_q(a x) on a stable (a, x) grid",
        "q-exponential functional equation", 1e-9},
       {{"q", 0.5}},
       [](const ParamMap& p, const RunOptions&) {
         QContext ctx;
         ctx.q = p.at("q");
         double worst = 0.0;
         for (double a : {-0.8, -0.3, 0.4, 0.9}) {
           for (double x : {0.2, 0.5, 1.0, 1.6}) {
             if (std::abs(a * x) * (1.0 - ctx.q) >= 0.95) continue;
             double lhs = dq([&](double t) { return eq_series(a * t, ctx); }, x, ctx);
             double rhs = a * eq_series(a * x, ctx);
             worst = std::max(worst, std::abs(lhs - rhs));
           }
         }
         Outcome out;
         out.method = cplx(worst, 0.0);
         out.oracle = cplx(0.0, 0.0);
         out.note = "worst residual; pairs with |ax(1-q)| >= 0.95 excluded";
         return out;
       }});

  struct KurokawaCase {
    const char* id;
    double s, q;
  };
  for (const KurokawaCase& kc : {KurokawaCase{"kurokawa-s05-q03", 0.5, 0.3},
                                 KurokawaCase{"kurokawa-s05-q05", 0.5, 0.5},
                                 KurokawaCase{"kurokawa-s2-q05", 2.0, 0.5}}) {
    defs.push_back(
        {{kc.id, "q-zeta identity: Jackson side vs the zeta binomial series",
          "Kurokawa-Wakayama q-zeta identity (Thm. 2)", 1e-6},
         {{"s", kc.s}, {"q", kc.q}},
         [](const ParamMap& p, const RunOptions&) {
           QContext ctx;
           ctx.q = p.at("q");
           KurokawaReport rep = kurokawa_check(p.at("s"), ctx);
           Outcome out;
           out.method = cplx(rep.lhs, 0.0);
           out.oracle = cplx(rep.rhs, 0.0);
           out.flagged = rep.terms_divergent;
           std::string abel = "; Abel cross-check differs by " +
                              short_num(std::abs(rep.lhs - rep.abel));
           out.note = rep.terms_divergent
                          ? "raw partial sums diverge (detected); series summed by "
                            "the Euler transform" +
                                abel
                          : "series mode " + rep.mode + abel;
           return out;
         }});
  }

  defs.push_back(
      {{"oracle-battery",
        "quadrature error estimates are honest on 20 closed-form integrals",
        "20 closed-form reference integrals", 0.0},
       {},
       [](const ParamMap&, const RunOptions&) {
         auto items = quad_battery();
         int passing = 0;
         double worst_ratio = 0.0;
         for (const auto& item : items) {
           QuadResult r = item.run();
           double err = std::abs(r.value - item.truth);
           double bound = 10.0 * r.error_estimate;
           if (err <= bound) ++passing;
           if (r.error_estimate > 0.0)
             worst_ratio = std::max(worst_ratio, err / r.error_estimate);
         }
         Outcome out;
         out.method = cplx((double)passing, 0.0);
         out.oracle = cplx((double)items.size(), 0.0);
         out.note = "|value - truth| <= 10 err_est each; worst ratio " +
                    short_num(worst_ratio);
         return out;
       }});

  defs.push_back(
      {{"mc-determinism", "fixed seeds reproduce Monte Carlo estimates bit for bit",
        "pinned xorshift64* stream", 0.0},
       {},
       [](const ParamMap&, const RunOptions& opts) {
         auto f = [](const std::vector<double>& x) {
           return std::exp(-x[0] - 2.0 * x[1]);
         };
         McResult s1 = mc_simplex(f, 2, 20000, opts.seed);
         McResult s2 = mc_simplex(f, 2, 20000, opts.seed);
         McResult o1 = mc_orthant_exp(f, {1.0, 1.0}, 20000, opts.seed + 1);
         McResult o2 = mc_orthant_exp(f, {1.0, 1.0}, 20000, opts.seed + 1);
         double drift = std::max(std::abs(s1.estimate - s2.estimate),
                                 std::abs(o1.estimate - o2.estimate));
         Outcome out;
         out.method = cplx(drift, 0.0);
         out.oracle = cplx(0.0, 0.0);
         out.note = "simplex and orthant samplers, two runs each";
         return out;
       }});

  return defs;
}

const std::vector<CaseDef>& catalog_defs() {
  static const std::vector<CaseDef> defs = build_catalog();
  return defs;
}

const CaseDef& find_case(const std::string& id) {
  for (const CaseDef& def : catalog_defs())
    if (def.info.id == id) return def;
  throw RegistryError("unknown case: " + id);
}

std::string format_param_value(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

const std::vector<CaseInfo>& case_catalog() {
  static const std::vector<CaseInfo> infos = [] {
    std::vector<CaseInfo> v;
    for (const CaseDef& def : catalog_defs()) v.push_back(def.info);
    std::sort(v.begin(), v.end(),
              [](const CaseInfo& a, const CaseInfo& b) { return a.id < b.id; });
    return v;
  }();
  return infos;
}

CaseRecord run_case(const std::string& id, const RunOptions& opts) {
  const CaseDef& def = find_case(id);

  ParamMap merged = def.defaults;
  if (opts.heaviside_midpoint && merged.count("midpoint")) merged["midpoint"] = 1.0;
  for (const auto& [k, v] : opts.params) {
    if (!merged.count(k))
      throw RegistryError("unknown parameter '" + k + "' for case " + id);
    merged[k] = v;
  }

  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    out = def.run(merged, opts);
  } catch (const RegistryError&) {
    throw;
  } catch (const std::exception& e) {
    throw RegistryError("case " + id + ": " + e.what());
  }
  auto t1 = std::chrono::steady_clock::now();

  CaseRecord rec;
  rec.case_id = id;
  {
    std::string ps;
    for (const auto& [k, v] : merged) {
      if (!ps.empty()) ps += ';';
      ps += k + "=" + format_param_value(v);
    }
    rec.params = ps;
  }
  rec.method_value = out.method;
  rec.oracle_value = out.oracle;
  rec.abs_err = std::abs(out.method - out.oracle);
  double scale = std::abs(out.oracle);
  rec.rel_err = scale > 0.0
                    ? rec.abs_err / scale
                    : (rec.abs_err == 0.0 ? 0.0
                                          : std::numeric_limits<double>::infinity());
  rec.tol = opts.tol >= 0.0
                ? opts.tol
                : (out.runtime_tol >= 0.0 ? out.runtime_tol : def.info.default_tol);
  bool ok = !out.force_fail && (rec.abs_err <= rec.tol || rec.rel_err <= rec.tol);
  rec.status = ok ? (out.flagged ? "flagged" : "pass") : "fail";
  rec.note = out.note;
  rec.seconds = std::chrono::duration<double>(t1 - t0).count();
  return rec;
}

std::vector<CaseRecord> verify_all(const std::string& filter,
                                   const RunOptions& opts) {
  std::vector<CaseRecord> records;
  for (const CaseInfo& info : case_catalog())
    if (glob_match(filter, info.id)) records.push_back(run_case(info.id, opts));
  std::sort(records.begin(), records.end(),
            [](const CaseRecord& a, const CaseRecord& b) {
              return a.case_id < b.case_id;
            });
  return records;
}

bool any_failed(const std::vector<CaseRecord>& records) {
  for (const CaseRecord& r : records)
    if (r.status == "fail") return true;
  return false;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  size_t p = 0, t = 0;
  size_t star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::string format_sig(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string format_cplx(const cplx& z) {
  if (z.imag() == 0.0) return format_sig(z.real());
  std::string s = format_sig(z.real());
  s += z.imag() < 0.0 ? "-" : "+";
  s += format_sig(std::abs(z.imag()));
  s += "i";
  return s;
}

static std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", s);
  return buf;
}

std::string to_csv(const std::vector<CaseRecord>& records) {
  std::string out =
      "case_id,params,method_value,oracle_value,abs_err,rel_err,tol,status,note,"
      "seconds\n";
  for (const CaseRecord& r : records) {
    out += csv_escape(r.case_id) + ',' + csv_escape(r.params) + ',' +
           format_cplx(r.method_value) + ',' + format_cplx(r.oracle_value) + ',' +
           format_sig(r.abs_err) + ',' + format_sig(r.rel_err) + ',' +
           format_sig(r.tol) + ',' + r.status + ',' + csv_escape(r.note) + ',' +
           format_seconds(r.seconds) + '\n';
  }
  return out;
}

std::string to_json(const std::vector<CaseRecord>& records) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CaseRecord& r : records) {
    nlohmann::ordered_json row;
    row["case_id"] = r.case_id;
    row["params"] = r.params;
    row["method_value"] = format_cplx(r.method_value);
    row["oracle_value"] = format_cplx(r.oracle_value);
    row["abs_err"] = format_sig(r.abs_err);
    row["rel_err"] = format_sig(r.rel_err);
    row["tol"] = format_sig(r.tol);
    row["status"] = r.status;
    row["note"] = r.note;
    row["seconds"] = format_seconds(r.seconds);
    arr.push_back(row);
  }
  return arr.dump(2) + "\n";
}

std::string to_markdown(const std::vector<CaseRecord>& records) {
  std::string out =
      "| case_id | params | method_value | oracle_value | abs_err | rel_err | tol "
      "| status | note | seconds |\n"
      "|---|---|---|---|---|---|---|---|---|---|\n";
  auto cell = [](std::string s) {
    std::string t;
    for (char c : s) {
      if (c == '|') t += "\\|";
      else t += c;
    }
    return t;
  };
  for (const CaseRecord& r : records) {
    out += "| " + cell(r.case_id) + " | " + cell(r.params) + " | " +
           format_cplx(r.method_value) + " | " + format_cplx(r.oracle_value) +
           " | " + format_sig(r.abs_err) + " | " + format_sig(r.rel_err) + " | " +
           format_sig(r.tol) + " | " + r.status + " | " + cell(r.note) + " | " +
           format_seconds(r.seconds) + " |\n";
  }
  return out;
}

std::map<std::string, std::string> parse_config(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw RegistryError("config line " + std::to_string(lineno) +
                          ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
    out[key] = val;
  }
  return out;
}

}  // namespace ibd
