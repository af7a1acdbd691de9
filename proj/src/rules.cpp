#include "ibd/rules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ibd {

Kernel apply_exp_poly_op(const ExpPoly& f, const Kernel& base) {
  Kernel out;
  for (const auto& t : f.terms) {
    Kernel piece = derivative_n(shift(base, cplx(t.b, 0.0)), t.n);
    const double sgn = (t.n % 2 == 0) ? 1.0 : -1.0;
    piece = scale(piece, t.c * sgn);
    out.terms.insert(out.terms.end(), piece.terms.begin(), piece.terms.end());
  }
  return canonicalize(out);
}

static Kernel domain_kernel(const Domain& dom) {
  auto factors = elementary_laplace_kernel(dom);
  if (factors.size() != 1)
    throw RuleError("domain kernel is not univariate; use tensor_eval");
  return factors[0];
}

cplx laplace_limit_eval(const ExpPoly& f, const Domain& dom) {
  const Kernel k = apply_exp_poly_op(f, domain_kernel(dom));
  auto lim = limit_at_zero(k);
  if (!lim) throw RuleError("laplace_limit_eval: the kernel limit diverges");
  return *lim;
}

cplx laplace_limit_eval(const ExprPtr& f, const Domain& dom) {
  auto vars = free_vars(f);
  if (vars.size() > 1)
    throw RuleError("laplace_limit_eval: expected at most one free variable");
  const std::string v = vars.empty() ? "x" : vars[0];
  try {
    return laplace_limit_eval(classify_exp_poly(f, v), dom);
  } catch (const NotExpPolyError&) {
    // sin(x)/x escapes the exp-polynomial class but has its own route
    if (f->type == NodeType::Div && f->kids[0]->type == NodeType::Call &&
        f->kids[0]->fn == Fn::Sin && equals(f->kids[0]->kids[0], f->kids[1])) {
      if (!std::holds_alternative<SemiInfinite>(dom))
        throw RuleError("sinc route is defined on the half line");
      return cplx(sinc_route().routed, 0.0);
    }
    throw;
  }
}

cplx laplace_transform_eval(const ExpPoly& f, double u, const Domain& dom) {
  if (u <= 0.0) throw RuleError("laplace_transform_eval: need u > 0");
  const Kernel k = apply_exp_poly_op(f, domain_kernel(dom));
  return eval(k, u);
}

SincResult sinc_route() {
  // sin(-d) (-d)^{-1} (1/x): one negated antiderivative of 1/x is -log x,
  // the shift pair then lands on (log(x+i) - log(x-i)) * (-i/2) * (-1)
  Kernel f = scale(antiderivative(one_over_x()), cplx(-1.0, 0.0));
  Kernel k = apply_shift_sum(sin_op(cplx(-1.0, 0.0)), f);
  auto lim = limit_at_zero(k);
  if (!lim) throw RuleError("sinc_route: limit diverged");
  return {ExactPi(Rational(1, 2), 2), lim->real()};
}

SincResult sinc_alternative_route() {
  // the 1/x operator route collapses to -Im lim_{y->0+} log(y - i)
  Kernel k;
  k.terms.push_back({cplx(1.0, 0.0), cplx(0.0, -1.0), 0, 1, cplx(0.0, 0.0), {}});
  auto lim = limit_at_zero(k);
  if (!lim) throw RuleError("sinc_alternative_route: limit diverged");
  return {ExactPi(Rational(1, 2), 2), -lim->imag()};
}

ExactPi ramanujan_heaviside(int n, double p, H0 h0) {
  if (n < 0) throw RuleError("ramanujan_heaviside: need n >= 0");
  const int m = 2 * n + 1;
  Rational sum(0);
  for (int k = 0; k <= m; ++k) {
    const double arg = p + n + 0.5 - k;
    Rational hv(0);
    if (arg > 0.0)
      hv = Rational(1);
    else if (arg == 0.0)
      hv = (h0 == H0::Half) ? Rational(1, 2) : Rational(1);
    if (hv.is_zero()) continue;
    Rational term = binomial(m, k) * hv;
    if (k % 2 == 1) term = -term;
    sum = sum + term;
  }
  Rational coef = sum / Rational(int64_t(1) << m, 1);
  if (n % 2 == 1) coef = -coef;
  return ExactPi(coef, 2);
}

ExactPi ramanujan_gamma(int n, int p) {
  if (n < 0) throw RuleError("ramanujan_gamma: need n >= 0");
  // (-1)^p binom(2n, n-p) / 2^{2n+1} * pi; the binomial is zero off range,
  // which is exactly the Gamma-pole annihilation for |p| > n
  Rational coef = binomial(2 * n, n - p) / Rational(int64_t(1) << (2 * n + 1), 1);
  if (((p % 2) + 2) % 2 == 1) coef = -coef;
  return ExactPi(coef, 2);
}

// ---------------------------------------------------------------------------
// tensor_eval: split a product integrand into per-variable factors

namespace {

struct FactorSplit {
  std::map<std::string, std::vector<ExprPtr>> per_var;
  cplx scalar = 1.0;
};

void collect_additive(const ExprPtr& e, int sign,
                      std::vector<std::pair<ExprPtr, int>>& out) {
  switch (e->type) {
    case NodeType::Add:
      collect_additive(e->kids[0], sign, out);
      collect_additive(e->kids[1], sign, out);
      return;
    case NodeType::Sub:
      collect_additive(e->kids[0], sign, out);
      collect_additive(e->kids[1], -sign, out);
      return;
    case NodeType::Neg:
      collect_additive(e->kids[0], -sign, out);
      return;
    default:
      out.push_back({e, sign});
      return;
  }
}

void collect_factors(const ExprPtr& e, FactorSplit& fs) {
  switch (e->type) {
    case NodeType::Mul:
      collect_factors(e->kids[0], fs);
      collect_factors(e->kids[1], fs);
      return;
    case NodeType::Neg:
      fs.scalar *= -1.0;
      collect_factors(e->kids[0], fs);
      return;
    case NodeType::Div:
      if (free_vars(e->kids[1]).empty()) {
        fs.scalar /= eval(e->kids[1], {});
        collect_factors(e->kids[0], fs);
        return;
      }
      break;
    case NodeType::Call:
      if (e->fn == Fn::Exp) {
        // exp of a sum of single-variable pieces splits multiplicatively
        std::vector<std::pair<ExprPtr, int>> pieces;
        collect_additive(e->kids[0], 1, pieces);
        bool splittable = true;
        for (auto& [piece, sign] : pieces)
          if (free_vars(piece).size() > 1) splittable = false;
        if (splittable && pieces.size() > 1) {
          for (auto& [piece, sign] : pieces) {
            ExprPtr arg = (sign > 0) ? piece : neg(piece);
            auto fv = free_vars(arg);
            if (fv.empty())
              fs.scalar *= eval(call(Fn::Exp, {arg}), {});
            else
              fs.per_var[fv[0]].push_back(call(Fn::Exp, {arg}));
          }
          return;
        }
      }
      break;
    default:
      break;
  }
  auto fv = free_vars(e);
  if (fv.empty()) {
    fs.scalar *= eval(e, {});
  } else if (fv.size() == 1) {
    fs.per_var[fv[0]].push_back(e);
  } else {
    throw RuleError("tensor_eval: factor couples variables " + fv[0] + "," +
                    fv[1] + "; the integrand is not separable");
  }
}

}  // namespace

double tensor_eval(const ExprPtr& f, const std::vector<std::string>& vars,
                   const std::vector<double>& rates) {
  if (vars.size() != rates.size())
    throw RuleError("tensor_eval: vars/rates size mismatch");
  FactorSplit fs;
  collect_factors(f, fs);
  for (auto& [v, factors] : fs.per_var)
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw RuleError("tensor_eval: integrand mentions unlisted variable " + v);

  cplx total = fs.scalar;
  for (size_t i = 0; i < vars.size(); ++i) {
    auto it = fs.per_var.find(vars[i]);
    Kernel k;
    if (it == fs.per_var.end()) {
      k = one_over_x();
    } else {
      ExprPtr prod = it->second[0];
      for (size_t j = 1; j < it->second.size(); ++j)
        prod = mul(prod, it->second[j]);
      k = apply_exp_poly_op(classify_exp_poly(prod, vars[i]), one_over_x());
    }
    if (rates[i] > 0.0) {
      total *= eval(k, rates[i]);
    } else {
      auto lim = limit_at_zero(k);
      if (!lim)
        throw RuleError("tensor_eval: factor in " + vars[i] +
                        " diverges at zero rate");
      total *= *lim;
    }
  }
  return total.real();
}

double bivariate_xplusy(double nu, double u, double v) {
  if (nu < 0.0) throw RuleError("bivariate_xplusy: need nu >= 0");
  if (u <= 0.0 || v <= 0.0) throw RuleError("bivariate_xplusy: need u, v > 0");
  if (nu == 0.0) {
    if (u == v) return 1.0 / u;
    return (std::log(u) - std::log(v)) / (u - v);
  }
  if (u == v) return std::tgamma(nu + 1.0) / std::pow(u, nu + 1.0);
  return std::tgamma(nu) * (std::pow(u, nu) - std::pow(v, nu)) /
         ((u - v) * std::pow(u * v, nu));
}

EulerReduceResult euler_like_reduce(double a0, const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    const std::vector<double>& nu, double mu,
                                    long long samples, uint64_t seed) {
  const size_t n = a.size();
  if (b.size() != n || nu.size() != n)
    throw RuleError("euler_like_reduce: dimension mismatch");
  if (mu <= 0.0) throw RuleError("euler_like_reduce: need mu > 0");
  for (size_t i = 0; i < n; ++i)
    if (a[i] <= 0.0 || b[i] <= 0.0 || nu[i] <= 0.0)
      throw RuleError("euler_like_reduce: parameters must be positive");

  auto weight = [&](const std::vector<double>& x) {
    double dot = a0;
    double w = 1.0;
    for (size_t i = 0; i < n; ++i) {
      dot += a[i] * x[i];
      if (nu[i] != 1.0) w *= std::pow(x[i], nu[i] - 1.0);
    }
    return w * std::pow(dot, -mu);
  };
  McResult lhs = mc_orthant_exp(weight, b, samples, seed);

  auto g = [&](const std::vector<double>& p) {
    double w = 1.0;
    for (size_t i = 0; i < n; ++i) w *= std::pow(p[i], -nu[i]);
    return w;
  };
  InversePowerResult rhs = inverse_power_apply(mu, a0, g, b, a);
  double gnu = 1.0;
  for (size_t i = 0; i < n; ++i) gnu *= std::tgamma(nu[i]);
  return {lhs, gnu * rhs.value, gnu * rhs.error_estimate};
}

ExactPi radial_constant_exact(int n) {
  if (n < 1) throw RuleError("radial_constant_exact: need n >= 1");
  const Rational two_gamma_n(2 * factorial(n - 1), 1);
  if (n % 2 == 0) return ExactPi(two_gamma_n / Rational(factorial(n / 2 - 1), 1), n);
  return ExactPi(two_gamma_n / gamma_half_coeff((n - 1) / 2), n - 1);
}

RotationalSinc rotational_eval_sinc(int n) {
  if (n < 1) throw RuleError("rotational_eval_sinc: need n >= 1");
  // (-d)^{-n} u^{-n} = -log(u)/(n-1)!  (n negated antiderivatives)
  Kernel base;
  base.terms.push_back({cplx(1.0, 0.0), cplx(0.0, 0.0), -n, 0, cplx(0.0, 0.0), {}});
  Kernel f = base;
  for (int j = 0; j < n; ++j) f = antiderivative(f);
  if (n % 2 == 1) f = scale(f, cplx(-1.0, 0.0));
  Kernel k = apply_shift_sum(sin_op(cplx(-1.0, 0.0)), f);

  // the claim of exactness rides on this structural verification: the kernel
  // must be the conjugate log pair +-i/(2 (n-1)!) log(x -+ i), coefficients
  // equal to the correctly rounded images of those rationals
  const double half_inv_fact = 0.5 / double(factorial(n - 1));
  bool verified = k.terms.size() == 2;
  if (verified) {
    const KernelTerm& t0 = k.terms[0];  // canonical order puts s = -i first
    const KernelTerm& t1 = k.terms[1];
    verified = t0.s == cplx(0.0, -1.0) && t1.s == cplx(0.0, 1.0) &&
               t0.m == 0 && t1.m == 0 && t0.l == 1 && t1.l == 1 &&
               t0.w == cplx(0.0, 0.0) && t1.w == cplx(0.0, 0.0) &&
               !t0.h && !t1.h && t0.c == cplx(0.0, half_inv_fact) &&
               t1.c == cplx(0.0, -half_inv_fact);
  }

  // pi/(2 (n-1)!) times 2 pi^{n/2} Gamma(n)/Gamma(n/2) = pi^{n/2+1}/Gamma(n/2)
  ExactPi exact = radial_constant_exact(n) *
                  ExactPi(Rational(1, 2 * factorial(n - 1)), 2);

  auto lim = limit_at_zero(k);
  if (!lim) throw RuleError("rotational_eval_sinc: limit diverged");
  const double cn = 2.0 * std::pow(M_PI, 0.5 * n) * std::tgamma(double(n)) /
                    std::tgamma(0.5 * n);
  const double routed = cn * lim->real();
  if (std::abs(routed - exact.to_double()) > 1e-12 * std::abs(exact.to_double()))
    verified = false;
  return {exact, routed, verified};
}

double rotational_eval(const ExprPtr& f_of_r, int n, double u) {
  if (n < 1) throw RuleError("rotational_eval: need n >= 1");
  auto vars = free_vars(f_of_r);
  if (vars.size() > 1)
    throw RuleError("rotational_eval: radial profile must be univariate");
  const std::string v = vars.empty() ? "r" : vars[0];
  ExpPoly f = classify_exp_poly(f_of_r, v);
  Kernel base;
  base.terms.push_back({cplx(1.0, 0.0), cplx(0.0, 0.0), -n, 0, cplx(0.0, 0.0), {}});
  Kernel k = apply_exp_poly_op(f, base);
  const double cn = 2.0 * std::pow(M_PI, 0.5 * n) * std::tgamma(double(n)) /
                    std::tgamma(0.5 * n);
  if (u > 0.0) return cn * eval(k, u).real();
  auto lim = limit_at_zero(k);
  if (!lim) throw RuleError("rotational_eval: limit diverges at u = 0");
  return cn * lim->real();
}

// ---------------------------------------------------------------------------
// simplex

cplx simplex_laplace_closed(std::vector<cplx> a) {
  if (a.empty()) throw RuleError("simplex_laplace: empty parameter vector");
  std::sort(a.begin(), a.end(), [](const cplx& x, const cplx& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  const size_t n = a.size();
  for (size_t i = 0; i < n; ++i) {
    if (a[i] == cplx(0.0, 0.0))
      throw RuleError("simplex_laplace_closed: zero parameter");
    if (i + 1 < n && a[i] == a[i + 1])
      throw RuleError("simplex_laplace_closed: repeated parameter");
  }
  cplx total = 0.0;
  for (size_t k = 0; k < n; ++k) {
    cplx denom = -a[k];
    for (size_t i = 0; i < n; ++i)
      if (i != k) denom *= (a[i] - a[k]);
    total += (std::exp(-a[k]) - 1.0) / denom;
  }
  return total;
}

double simplex_laplace(const std::vector<cplx>& a) {
  const double tol = 1e-7;
  bool degenerate = false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i]) < tol) degenerate = true;
    for (size_t j = i + 1; j < a.size(); ++j)
      if (std::abs(a[i] - a[j]) < tol) degenerate = true;
  }
  if (!degenerate) return simplex_laplace_closed(a).real();

  // perturb along distinct imaginary directions; the value is analytic in a
  // and real on real input, so the real part is even in eps and Richardson
  // can assume an eps^2 error ladder
  auto g = [&](double eps) {
    std::vector<cplx> ap = a;
    for (size_t k = 0; k < ap.size(); ++k)
      ap[k] += cplx(0.0, eps * double(k + 1));
    return simplex_laplace_closed(ap).real();
  };
  auto est = richardson_limit<double>(g, 0.5, 7, 2);
  return est.value;
}

HeavisideRouteResult simplex_laplace_via_heaviside(const std::vector<double>& a) {
  if (a.empty()) throw RuleError("simplex_laplace_via_heaviside: empty vector");
  double prod = 1.0;
  for (double ai : a) {
    if (ai <= 0.0)
      throw RuleError("simplex_laplace_via_heaviside: parameters must be > 0");
    prod *= ai;
  }
  auto g = [&](double y) {
    cplx z = std::exp(cplx(0.0, y));
    for (double ai : a) z /= cplx(ai, y);
    return z.imag() / y;
  };
  QuadResult osc = quad_oscillatory(g, 1e-10);
  if (!osc.converged)
    throw RuleError("simplex_laplace_via_heaviside: oscillatory tail did not settle");
  return {0.5 / prod + osc.value / M_PI, osc.error_estimate / M_PI};
}

WeightedReduceResult simplex_weighted_reduce(const std::vector<double>& alpha,
                                             const std::function<double(double)>& f,
                                             double u, long long samples,
                                             uint64_t seed) {
  const size_t n = alpha.size();
  if (n == 0) throw RuleError("simplex_weighted_reduce: empty alpha");
  double asum = 0.0, gprod = 1.0;
  for (double ai : alpha) {
    if (ai <= 0.0) throw RuleError("simplex_weighted_reduce: need alpha > 0");
    asum += ai;
    gprod *= std::tgamma(ai);
  }
  const double pref = gprod / std::tgamma(asum);
  QuadResult q = quad_1d(
      [&](double t) { return f(t) * std::exp(-u * t) * std::pow(t, asum - 1.0); },
      0.0, 1.0, 1e-12);
  if (!q.converged)
    throw RuleError("simplex_weighted_reduce: reduced quadrature did not converge");
  const double reduced_error = pref * q.error_estimate;

  McResult direct = mc_simplex(
      [&](const std::vector<double>& x) {
        double s = 0.0, w = 1.0;
        for (size_t i = 0; i < n; ++i) {
          s += x[i];
          if (alpha[i] != 1.0) w *= std::pow(x[i], alpha[i] - 1.0);
        }
        return w * f(s) * std::exp(-u * s);
      },
      int(n), samples, seed);
  return {pref * q.value, reduced_error, direct};
}

}  // namespace ibd
