#include "ibd/psido.hpp"

#include <algorithm>
#include <cmath>

#include "ibd/oracle.hpp"
#include "ibd/special.hpp"

namespace ibd {

ShiftSum canonicalize(const ShiftSum& s) {
  std::vector<ShiftTerm> ts = s.terms;
  std::stable_sort(ts.begin(), ts.end(), [](const ShiftTerm& a, const ShiftTerm& b) {
    if (a.shift.real() != b.shift.real()) return a.shift.real() < b.shift.real();
    return a.shift.imag() < b.shift.imag();
  });
  ShiftSum out;
  for (const auto& t : ts) {
    if (!out.terms.empty() &&
        std::abs(out.terms.back().shift - t.shift) <=
            1e-12 * std::max(1.0, std::abs(t.shift))) {
      out.terms.back().coef += t.coef;
    } else {
      out.terms.push_back(t);
    }
  }
  out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                 [](const ShiftTerm& t) {
                                   return t.coef == cplx(0.0, 0.0);
                                 }),
                  out.terms.end());
  return out;
}

ShiftSum shift_mul(const ShiftSum& a, const ShiftSum& b) {
  ShiftSum out;
  out.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& x : a.terms)
    for (const auto& y : b.terms)
      out.terms.push_back({x.coef * y.coef, x.shift + y.shift});
  return canonicalize(out);
}

ShiftSum shift_pow(const ShiftSum& a, int n) {
  if (n < 0) throw OperatorError("shift-sum power must be nonnegative");
  ShiftSum out{{{cplx(1, 0), cplx(0, 0)}}};
  for (int i = 0; i < n; ++i) out = shift_mul(out, a);
  return out;
}

ShiftSum exp_op(cplx a) { return ShiftSum{{{cplx(1, 0), a}}}; }

ShiftSum sin_op(cplx a) {
  const cplx I(0, 1);
  return canonicalize(ShiftSum{{{-0.5 * I, I * a}, {0.5 * I, -I * a}}});
}

ShiftSum cos_op(cplx a) {
  const cplx I(0, 1);
  return canonicalize(ShiftSum{{{cplx(0.5, 0), I * a}, {cplx(0.5, 0), -I * a}}});
}

ShiftSum trig_power_expand(int m, double scale) {
  if (m < 1 || m % 2 == 0)
    throw OperatorError("binomial expansion of sin^m needs odd positive m");
  int n = (m - 1) / 2;
  ShiftSum out;
  for (int k = 0; k <= m; ++k) {
    // exact dyadic coefficient (-1)^{n+k} binom(m,k) / 2^m
    Rational coef = binomial(m, k) / Rational(1LL << m);
    if ((n + k) % 2 == 1) coef = -coef;
    out.terms.push_back({cplx(coef.to_double(), 0.0), cplx(scale * (m - 2 * k), 0.0)});
  }
  return canonicalize(out);
}

Kernel apply_shift_sum(const ShiftSum& op, const Kernel& k) {
  Kernel out;
  for (const auto& t : op.terms) {
    Kernel piece = shift(k, t.shift);
    for (auto& kt : piece.terms) kt.c *= t.coef;
    out.terms.insert(out.terms.end(), piece.terms.begin(), piece.terms.end());
  }
  return canonicalize(out);
}

SeriesOp series_op_from_expr(const ExprPtr& f, const std::string& v, int order) {
  if (order < 0) throw OperatorError("series order must be nonnegative");
  SeriesOp op;
  op.order = order;
  op.coeffs = taylor_coeffs(f, v, 0.0, order + 2);
  return op;
}

SeriesApplyResult apply_series(const SeriesOp& op, const Kernel& k, double x_eval,
                               double radius) {
  if ((int)op.coeffs.size() < op.order + 3)
    throw OperatorError("series operator is missing its tail coefficients");
  for (const auto& t : k.terms)
    if (t.h) throw OperatorError("series application needs derivatives; Heaviside terms have none");

  SeriesApplyResult res;
  Kernel deriv = k;
  double sign = 1.0;
  for (int j = 0; j <= op.order; ++j) {
    if (j > 0) {
      deriv = derivative(deriv);
      sign = -sign;
    }
    Kernel piece = scale(deriv, sign * op.coeffs[(size_t)j]);
    res.kernel.terms.insert(res.kernel.terms.end(), piece.terms.begin(),
                            piece.terms.end());
  }
  res.kernel = canonicalize(res.kernel);

  // first omitted terms, with the derivative sampled across the reach of the
  // operator; two orders guard against alternating zero coefficients
  double tail = 0.0;
  for (int j = op.order + 1; j <= op.order + 2; ++j) {
    deriv = derivative(deriv);
    double growth = std::abs(eval(deriv, x_eval));
    growth = std::max(growth, std::abs(eval(deriv, x_eval - radius)));
    growth = std::max(growth, std::abs(eval(deriv, x_eval + radius)));
    tail = std::max(tail, std::abs(op.coeffs[(size_t)j]) * growth);
  }
  res.tail_estimate = tail;
  return res;
}

InversePowerResult inverse_power_apply(
    double mu, double a0, const std::function<double(const std::vector<double>&)>& g,
    const std::vector<double>& b, const std::vector<double>& a, double tol) {
  if (mu <= 0.0) throw OperatorError("inverse power needs mu > 0");
  if (a0 < 0.0) throw OperatorError("inverse power needs a0 >= 0");
  if (b.size() != a.size())
    throw OperatorError("base point and direction dimensions differ");

  auto shifted = [&](double t) {
    std::vector<double> p(b.size());
    for (size_t i = 0; i < b.size(); ++i) p[i] = b[i] + t * a[i];
    return g(p);
  };

  const double inf = std::numeric_limits<double>::infinity();
  QuadResult q;
  if (mu >= 1.0) {
    q = quad_1d(
        [&](double t) {
          return std::exp(-a0 * t) * std::pow(t, mu - 1.0) * shifted(t);
        },
        0.0, inf, tol);
  } else {
    // t = tau^qq regularizes the t^{mu-1} endpoint
    int qq = (int)std::ceil(1.0 / mu);
    q = quad_1d(
        [&](double tau) {
          double t = std::pow(tau, qq);
          return qq * std::pow(tau, qq * mu - 1.0) * std::exp(-a0 * t) * shifted(t);
        },
        0.0, inf, tol);
  }
  if (!q.converged)
    throw OperatorError("the t-integral of the inverse power did not converge");
  double norm = std::tgamma(mu);
  return {q.value / norm, q.error_estimate / norm};
}

Prop1Result prop1_factorizations(const ShiftSum& f, const ShiftSum& g, const Kernel& k) {
  Prop1Result r;
  r.f_then_g = apply_shift_sum(g, apply_shift_sum(f, k));
  r.g_then_f = apply_shift_sum(f, apply_shift_sum(g, k));
  r.product = apply_shift_sum(shift_mul(f, g), k);
  return r;
}

}  // namespace ibd
