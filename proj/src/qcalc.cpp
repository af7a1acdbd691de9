#include "ibd/qcalc.hpp"

#include <cmath>
#include <vector>

#include "ibd/oracle.hpp"
#include "ibd/special.hpp"

namespace ibd {

static void validate(const QContext& ctx) {
  if (!(ctx.q > 0.0 && ctx.q < 1.0)) throw QError("QContext: need 0 < q < 1");
  if (!(ctx.tol > 0.0)) throw QError("QContext: need tol > 0");
}

double q_int(double j, const QContext& ctx) {
  validate(ctx);
  return (1.0 - std::pow(ctx.q, j)) / (1.0 - ctx.q);
}

double q_factorial(int j, const QContext& ctx) {
  validate(ctx);
  if (j < 0) throw QError("q_factorial: need j >= 0");
  double f = 1.0, qpow = 1.0;
  for (int k = 1; k <= j; ++k) {
    qpow *= ctx.q;
    f *= (1.0 - qpow) / (1.0 - ctx.q);
  }
  return f;
}

double dq(const std::function<double(double)>& f, double x, const QContext& ctx) {
  validate(ctx);
  if (x == 0.0) throw QError("dq: x = 0 needs the expression overload");
  return (f(ctx.q * x) - f(x)) / ((ctx.q - 1.0) * x);
}

double dq(const ExprPtr& f, double x, const QContext& ctx) {
  validate(ctx);
  auto vars = free_vars(f);
  if (vars.size() > 1) throw QError("dq: expected a univariate expression");
  const std::string v = vars.empty() ? "x" : vars[0];
  if (x != 0.0) {
    cplx fx = eval(f, {{v, cplx(x, 0.0)}});
    cplx fqx = eval(f, {{v, cplx(ctx.q * x, 0.0)}});
    return ((fqx - fx) / ((ctx.q - 1.0) * x)).real();
  }
  // limit value: D_q x^k -> [k]_q x^{k-1} vanishes at 0 except for k = 1
  auto c = taylor_coeffs(f, v, cplx(0.0, 0.0), 1);
  return c[1].real();
}

double eq_series(double x, const QContext& ctx) {
  validate(ctx);
  double sum = 1.0, term = 1.0, qpow = 1.0;
  double prev_mag = 1.0;
  int grow_streak = 0;
  // the term ratio tends to |x|(1-q), so the tail past term j is bounded by
  // |t_j| r/(1-r); cap r below 1 (the growth detector covers divergence)
  const double r = std::min(std::abs(x) * (1.0 - ctx.q), 0.97);
  const double tail_factor = std::max(r / (1.0 - r), 1.0);
  for (int j = 1; j < ctx.max_terms; ++j) {
    qpow *= ctx.q;
    term *= x * (1.0 - ctx.q) / (1.0 - qpow);  // x / [j]_q
    sum += term;
    const double mag = std::abs(term);
    if (mag * tail_factor <= 0.5 * ctx.tol * std::max(1.0, std::abs(sum)) && j > 2)
      return sum;
    grow_streak = (mag >= prev_mag) ? grow_streak + 1 : 0;
    if (grow_streak >= 24)
      throw QError("eq_series: terms stopped decreasing; |x(1-q)| >= 1");
    prev_mag = mag;
  }
  throw QError("eq_series: term cap reached before convergence");
}

static double eq_product_impl(double x, const QContext& ctx, int start) {
  double prod = 1.0;
  double u = x * (1.0 - ctx.q) * std::pow(ctx.q, start);
  // the factors still to come multiply to ~ exp(u q/(1-q)), so the loop must
  // run until that residual is inside the tolerance
  const double stop = 0.1 * ctx.tol * (1.0 - ctx.q);
  for (int n = start; n < ctx.max_terms; ++n) {
    const double factor = 1.0 - u;
    if (std::abs(factor) < 1e-300) throw QError("eq_product: factor vanishes");
    prod /= factor;
    if (std::abs(u) < stop) return prod;
    u *= ctx.q;
  }
  throw QError("eq_product: term cap reached before convergence");
}

double eq_product(double x, const QContext& ctx) {
  validate(ctx);
  return eq_product_impl(x, ctx, 0);
}

double eq_product_from_one(double x, const QContext& ctx) {
  validate(ctx);
  return eq_product_impl(x, ctx, 1);
}

// one-endpoint Jackson sum (1-q) c sum q^n f(q^n c)
static JacksonResult jackson_head(const std::function<double(double)>& f,
                                  double c, const QContext& ctx) {
  JacksonResult r;
  if (c == 0.0) {
    r.converged = true;
    return r;
  }
  double sum = 0.0, qpow = 1.0;
  int small_streak = 0;
  for (int n = 0; n < ctx.max_terms; ++n) {
    const double term = (1.0 - ctx.q) * c * qpow * f(qpow * c);
    sum += term;
    ++r.terms;
    const double mag = std::abs(term);
    if (mag <= ctx.tol * std::max(1.0, std::abs(sum))) {
      if (++small_streak >= 3) {
        r.value = sum;
        // ratio-q geometric tail bound from the last term
        r.truncation_error = mag * ctx.q / (1.0 - ctx.q);
        r.converged = true;
        return r;
      }
    } else {
      small_streak = 0;
    }
    qpow *= ctx.q;
  }
  r.value = sum;
  r.truncation_error = std::abs(sum);
  return r;  // converged stays false
}

JacksonResult jackson_integral(const std::function<double(double)>& f, double a,
                               double b, const QContext& ctx) {
  validate(ctx);
  if (a < 0.0 || b < a) throw QError("jackson_integral: need 0 <= a <= b");
  JacksonResult hb = jackson_head(f, b, ctx);
  JacksonResult ha = jackson_head(f, a, ctx);
  JacksonResult r;
  r.value = hb.value - ha.value;
  r.truncation_error = hb.truncation_error + ha.truncation_error;
  r.terms = hb.terms + ha.terms;
  r.converged = hb.converged && ha.converged;
  return r;
}

JacksonResult jackson_semi_infinite(const std::function<double(double)>& f,
                                    const QContext& ctx) {
  validate(ctx);
  JacksonResult r = jackson_head(f, 1.0, ctx);  // the n >= 0 half
  // the n < 0 half walks the sampling points q^{-m} out to infinity; the
  // terms may rise while f does, so only a sustained drop below tolerance
  // ends the sum
  double sum = 0.0, qinv = 1.0;
  int small_streak = 0;
  bool tail_ok = false;
  for (int m = 1; m < ctx.max_terms; ++m) {
    qinv /= ctx.q;
    const double term = (1.0 - ctx.q) * qinv * f(qinv);
    sum += term;
    ++r.terms;
    if (std::abs(term) <= ctx.tol * std::max(1.0, std::abs(sum) + std::abs(r.value))) {
      if (++small_streak >= 3) {
        tail_ok = true;
        break;
      }
    } else {
      small_streak = 0;
    }
  }
  r.value += sum;
  r.converged = r.converged && tail_ok;
  if (!tail_ok) r.truncation_error = std::max(r.truncation_error, std::abs(sum));
  return r;
}

double q_ibd_eval(const ExprPtr& f, double a, double b, const QContext& ctx) {
  validate(ctx);
  if (a < 0.0 || b < a) throw QError("q_ibd_eval: need 0 <= a <= b");
  auto vars = free_vars(f);
  if (vars.size() > 1) throw QError("q_ibd_eval: expected a univariate expression");
  const std::string v = vars.empty() ? "x" : vars[0];

  for (int order = 16; order <= 256; order *= 2) {
    auto c = taylor_coeffs(f, v, cplx(0.0, 0.0), order);
    double sum = 0.0, qpow = ctx.q;
    double bp = b, ap = a;  // b^{k+1}, a^{k+1}
    std::vector<double> mags(size_t(order) + 1);
    for (int k = 0; k <= order; ++k) {
      const double qk1 = (1.0 - qpow) / (1.0 - ctx.q);  // [k+1]_q
      const double term = c[size_t(k)].real() * (bp - ap) / qk1;
      sum += term;
      mags[size_t(k)] = std::abs(term);
      qpow *= ctx.q;
      bp *= b;
      ap *= a;
    }
    double tail = 0.0;
    for (int k = order - 3; k <= order; ++k) tail = std::max(tail, mags[size_t(k)]);
    if (tail <= ctx.tol * std::max(1.0, std::abs(sum))) return sum;
    if (order == 256)
      throw QError("q_ibd_eval: Taylor series does not settle on [a, b]");
  }
  throw QError("q_ibd_eval: unreachable");
}

KurokawaReport kurokawa_check(double s, const QContext& ctx) {
  validate(ctx);
  if (s == 1.0) throw QError("kurokawa_check: s = 1 is the zeta pole");

  KurokawaReport rep;
  rep.formal_head = 1.0 / q_int(1.0 - s, ctx);

  JacksonResult jac = jackson_integral(
      [&](double a) { return hurwitz_zeta(s, 1.0 + a); }, 0.0, 1.0, ctx);
  if (!jac.converged)
    throw QError("kurokawa_check: Jackson integral of zeta(s, 1+a) did not converge");
  rep.jackson_piece = jac.value;
  rep.lhs = rep.formal_head + rep.jackson_piece;

  // k-series: binom(-s, k) zeta(s+k) / [k+1]_q by the binomial recurrence
  const int K = ctx.max_zeta_terms;
  std::vector<double> terms(size_t(K), 0.0);
  std::vector<double> partial(size_t(K), 0.0);
  double binom_k = 1.0, qpow = ctx.q, run = 0.0;
  for (int k = 0; k < K; ++k) {
    if (k > 0) binom_k *= (-s - double(k) + 1.0) / double(k);
    if (s + double(k) == 1.0)
      throw QError("kurokawa_check: series hits the zeta pole");
    const double t = binom_k * riemann_zeta(s + double(k)) *
                     (1.0 - ctx.q) / (1.0 - qpow);
    terms[size_t(k)] = t;
    run += t;
    partial[size_t(k)] = run;
    qpow *= ctx.q;
  }

  // do the raw partial sums settle?
  const double settle = 1e-9 * std::max(1.0, std::abs(partial.back()));
  int settled_at = -1;
  int streak = 0;
  for (int k = 1; k < K; ++k) {
    if (std::abs(terms[size_t(k)]) <= settle) {
      if (++streak >= 5) {
        settled_at = k;
        break;
      }
    } else {
      streak = 0;
    }
  }
  rep.raw_converged = settled_at >= 0;
  rep.terms_divergent =
      std::abs(terms[size_t(K - 1)]) > std::abs(terms[size_t(K / 2)]);

  double series;
  if (rep.raw_converged) {
    series = partial[size_t(settled_at)];
    rep.mode = "raw";
  } else {
    EulerResult acc = euler_transform(partial);
    if (acc.stability > 1e-8 * std::max(1.0, std::abs(acc.value)))
      throw QError("kurokawa_check: Euler acceleration did not settle");
    series = acc.value;
    rep.mode = "euler";
  }
  rep.rhs = rep.formal_head + series;

  // Abel cross-check: sum_k t_k x^k at x = 1 - eps, extrapolated to eps = 0
  auto abel_sum = [&](double eps) {
    const double x = 1.0 - eps;
    double bk = 1.0, qp = ctx.q, acc = 0.0, xp = 1.0;
    for (int k = 0; k < 20000; ++k) {
      if (k > 0) bk *= (-s - double(k) + 1.0) / double(k);
      const double t =
          bk * riemann_zeta(s + double(k)) * (1.0 - ctx.q) / (1.0 - qp) * xp;
      acc += t;
      if (k > 8 && std::abs(t) < 1e-15 * std::max(1.0, std::abs(acc))) break;
      qp *= ctx.q;  // underflow is harmless: [k+1]_q just saturates at 1/(1-q)
      xp *= x;
    }
    return acc;
  };
  auto lim = richardson_limit<double>(abel_sum, 0.25, 6, 1);
  rep.abel = rep.formal_head + lim.value;
  return rep;
}

}  // namespace ibd
