#pragma once
// Pseudo-differential operators f(-d/dx) in the three forms the method
// needs: exact finite sums of exponential shifts, truncated Taylor series
// with an explicit tail estimate, and the Euler integral for inverse powers.

#include <functional>
#include <stdexcept>
#include <vector>

#include "ibd/kernels.hpp"
#include "ibd/rational.hpp"

namespace ibd {

struct OperatorError : std::runtime_error {
  explicit OperatorError(const std::string& what) : std::runtime_error(what) {}
};

// sum_k coef_k e^{shift_k d/dx}; applied to k(x) this is sum coef_k k(x+shift_k)
struct ShiftTerm {
  cplx coef;
  cplx shift;
};
struct ShiftSum {
  std::vector<ShiftTerm> terms;
};

// merge equal shifts, drop zero coefficients, order by shift
ShiftSum canonicalize(const ShiftSum& s);

// operator product: shifts add, coefficients multiply
ShiftSum shift_mul(const ShiftSum& a, const ShiftSum& b);
ShiftSum shift_pow(const ShiftSum& a, int n);

ShiftSum exp_op(cplx a);  // e^{a d/dx}
ShiftSum sin_op(cplx a);  // sin(a d/dx)
ShiftSum cos_op(cplx a);  // cos(a d/dx)

// sin^m(scale*d) for odd m=2n+1 with the real-shift normalization
// ((-1)^n/2^m) sum_k binom(m,k)(-1)^k e^{scale(m-2k) d}; coefficients are
// exact dyadic rationals
ShiftSum trig_power_expand(int m, double scale);

Kernel apply_shift_sum(const ShiftSum& op, const Kernel& k);

// truncated series f(-d) = sum_{j<=N} c_j (-1)^j d^j; coeffs holds c_0..c_{N+2}
// so the tail estimate can see the first omitted coefficients
struct SeriesOp {
  std::vector<cplx> coeffs;
  int order = 40;
};

SeriesOp series_op_from_expr(const ExprPtr& f, const std::string& v, int order = 40);

struct SeriesApplyResult {
  Kernel kernel;      // sum_{j<=N} c_j (-1)^j k^{(j)}
  double tail_estimate;
};

// tail estimate max_{j in {N+1,N+2}} |c_j| * max |k^{(j)}| sampled over
// [x_eval - radius, x_eval + radius]
SeriesApplyResult apply_series(const SeriesOp& op, const Kernel& k, double x_eval,
                               double radius = 1.0);

// (1/Gamma(mu)) \int_0^infty e^{-a0 t} t^{mu-1} g(b + t a) dt, the Euler
// integral realization of (a0 - a.grad_b)^{-mu} g(b); for mu < 1 the
// substitution t = tau^q, q = ceil(1/mu), removes the endpoint singularity
struct InversePowerResult {
  double value;
  double error_estimate;
};
InversePowerResult inverse_power_apply(
    double mu, double a0, const std::function<double(const std::vector<double>&)>& g,
    const std::vector<double>& b, const std::vector<double>& a, double tol = 1e-10);

// the three equivalent evaluations of a product operator: f then g, g then f,
// and the merged product fg, all applied to k
struct Prop1Result {
  Kernel f_then_g;
  Kernel g_then_f;
  Kernel product;
};
Prop1Result prop1_factorizations(const ShiftSum& f, const ShiftSum& g, const Kernel& k);

}  // namespace ibd
