#pragma once
// q-calculus layer: q-integers, the q-derivative, q-exponentials, Jackson
// integrals, the q-analogue of the limit rule, and the Hurwitz-zeta identity
// for the Jackson integral of zeta(s, a) over [0, 1].

#include <functional>
#include <stdexcept>
#include <string>

#include "ibd/expr.hpp"

namespace ibd {

struct QError : std::runtime_error {
  explicit QError(const std::string& what) : std::runtime_error(what) {}
};

struct QContext {
  double q = 0.5;               // deformation parameter, 0 < q < 1
  double tol = 1e-12;           // series truncation target
  int max_terms = 200000;       // Jackson / q-exponential term cap
  int max_zeta_terms = 400;     // zeta-series partial sums kept for acceleration
};

// [j]_q = (1 - q^j)/(1 - q); real j is allowed ([1-s]_q appears with real s)
double q_int(double j, const QContext& ctx);

// [j]!_q = [1]_q [2]_q ... [j]_q
double q_factorial(int j, const QContext& ctx);

// D_q f(x) = (f(qx) - f(x))/((q-1) x); the x = 0 value of the expression
// overload is the limit, i.e. the first Taylor coefficient
double dq(const std::function<double(double)>& f, double x, const QContext& ctx);
double dq(const ExprPtr& f, double x, const QContext& ctx);

// e_q(x) = sum_j x^j/[j]!_q; diverges once |x(1-q)| >= 1 (detected by term
// growth).  The product form prod_{n>=0} 1/(1 - x(1-q)q^n) is the standard
// identity partner; some printed forms start the product at n = 1, dropping
// the n = 0 factor, and that variant is kept alongside for comparison.
double eq_series(double x, const QContext& ctx);
double eq_product(double x, const QContext& ctx);
double eq_product_from_one(double x, const QContext& ctx);

struct JacksonResult {
  double value = 0.0;
  double truncation_error = 0.0;
  int terms = 0;
  bool converged = false;
};

// int_a^b f(x) d_q x = F(b) - F(a), F(c) = (1-q) c sum_{n>=0} q^n f(q^n c);
// needs 0 <= a <= b
JacksonResult jackson_integral(const std::function<double(double)>& f, double a,
                               double b, const QContext& ctx);

// int_0^inf f(x) d_q x = (1-q) sum_{n in Z} q^n f(q^n); converged=false when
// either tail fails to drop below tolerance before the cap
JacksonResult jackson_semi_infinite(const std::function<double(double)>& f,
                                    const QContext& ctx);

// q-analogue of the limit rule: with f(x) = sum c_k x^k,
// int_a^b f d_q x = sum_k c_k (b^{k+1} - a^{k+1})/[k+1]_q
double q_ibd_eval(const ExprPtr& f, double a, double b, const QContext& ctx);

// int_0^1 zeta(s, a) d_q a = 1/[1-s]_q + sum_k binom(-s,k) zeta(s+k)/[k+1]_q.
// Both sides carry the head 1/[1-s]_q: for s > 1 it is the value of the
// formal q-antiderivative of a^{-s} (the raw Jackson sum diverges there), so
// the equality is between regularized quantities.  lhs adds the convergent
// Jackson integral of zeta(s, 1+a); rhs sums the k-series, raw when the
// partial sums settle, Euler-accelerated otherwise; `abel` re-sums the series
// by Abel's method (evaluation at x = 1-eps, extrapolated) as a cross-check.
struct KurokawaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double formal_head = 0.0;     // 1/[1-s]_q
  double jackson_piece = 0.0;   // int_0^1 zeta(s, 1+a) d_q a
  bool raw_converged = false;   // raw partial sums settled before the cap
  bool terms_divergent = false; // raw |terms| were growing at the cap
  std::string mode;             // "raw" or "euler"
  double abel = 0.0;
};
KurokawaReport kurokawa_check(double s, const QContext& ctx);

}  // namespace ibd
