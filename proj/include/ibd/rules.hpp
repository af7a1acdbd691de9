#pragma once
// The integration-by-differentiation rules: a definite integral
// \int f(y) e^{-xy} dy is f(-d/dx) applied to the elementary kernel of the
// domain, and the integral itself is the kernel limit at x -> 0+.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibd/expr.hpp"
#include "ibd/kernels.hpp"
#include "ibd/oracle.hpp"
#include "ibd/psido.hpp"
#include "ibd/rational.hpp"

namespace ibd {

struct RuleError : std::runtime_error {
  explicit RuleError(const std::string& what) : std::runtime_error(what) {}
};

// f(-d) applied termwise to a base kernel: c y^j e^{-by} acts as
// c (-1)^j d^j after a shift by b
Kernel apply_exp_poly_op(const ExpPoly& f, const Kernel& base);

// lim_{x->0+} f(-d_x) K_domain(x); equals \int_domain f(y) dy
cplx laplace_limit_eval(const ExpPoly& f, const Domain& dom = SemiInfinite{});
cplx laplace_limit_eval(const ExprPtr& f, const Domain& dom = SemiInfinite{});

// f(-d_x) K_domain(x) evaluated at x = u > 0: the damped transform
// \int_domain f(y) e^{-uy} dy
cplx laplace_transform_eval(const ExpPoly& f, double u,
                            const Domain& dom = SemiInfinite{});

// the Dirichlet integral, twice: sin(-d) on the antiderivative of 1/x, and
// the -Im log(y - i) shortcut; both land on pi/2 exactly
struct SincResult {
  ExactPi exact;
  double routed;
};
SincResult sinc_route();
SincResult sinc_alternative_route();

// I_{n,p} = \int_0^inf sin^{2n+1}(x) cos(2px)/x dx, exactly, two ways
ExactPi ramanujan_heaviside(int n, double p, H0 h0 = H0::One);
ExactPi ramanujan_gamma(int n, int p);

// separable multivariate transforms: f(-d_{u_1},...) on prod 1/u_i
double tensor_eval(const ExprPtr& f, const std::vector<std::string>& vars,
                   const std::vector<double>& rates);

// M(nu) = int int (x+y)^{nu-1} e^{-ux-vy} dx dy; nu = 0 is the continuous
// log extension (log u - log v)/(u - v), u = v the confluent value
double bivariate_xplusy(double nu, double u, double v);

// both sides of the orthant reduction
// int e^{-b.x} (a0+a.x)^{-mu} prod x_k^{nu_k - 1} dx
//   = (prod Gamma(nu_k)/Gamma(mu)) int_0^inf e^{-a0 t} t^{mu-1}
//     prod (b_k + a_k t)^{-nu_k} dt
struct EulerReduceResult {
  McResult lhs;
  double rhs;
  double rhs_error;
};
EulerReduceResult euler_like_reduce(double a0, const std::vector<double>& a,
                                    const std::vector<double>& b,
                                    const std::vector<double>& nu, double mu,
                                    long long samples, uint64_t seed);

// 2 pi^{n/2} Gamma(n) / Gamma(n/2), exactly (even n: integer * pi^{n/2};
// odd n: the half-integer Gamma cancels one sqrt(pi))
ExactPi radial_constant_exact(int n);

// I_n = int_{R^n} sin(|x|)/|x|^n dx = pi^{n/2+1}/Gamma(n/2): the kernel route
// is structurally verified term by term, and the exact value is assembled in
// rational arithmetic; `routed` is the floating-point kernel evaluation
struct RotationalSinc {
  ExactPi exact;
  double routed;
  bool verified;
};
RotationalSinc rotational_eval_sinc(int n);

// radial profile f(r) with exp-polynomial structure:
// C_n * f(-d_u) u^{-n} at u (u = 0 takes the limit)
double rotational_eval(const ExprPtr& f_of_r, int n, double u);

// simplex { x_i >= 0, sum x_i <= 1 } Laplace transform of 1:
// closed form sum_k (e^{-a_k} - 1) / ((-a_k) prod_{i!=k} (a_i - a_k))
cplx simplex_laplace_closed(std::vector<cplx> a);

// closed form when parameters are distinct and nonzero, otherwise the
// i*eps*k perturbation with even-order Richardson extrapolation
double simplex_laplace(const std::vector<cplx>& a);

// Heaviside/Fourier route: 1/(2 prod a) + (1/pi) int_0^inf Im(e^{iy}/prod(a_j+iy))/y dy
struct HeavisideRouteResult {
  double value;
  double error_estimate;
};
HeavisideRouteResult simplex_laplace_via_heaviside(const std::vector<double>& a);

// weighted simplex integral of prod x_i^{alpha_i-1} f(sum x) e^{-u sum x}:
// reduced 1-D Euler form vs direct Dirichlet-sampling Monte Carlo
struct WeightedReduceResult {
  double reduced;
  double reduced_error;
  McResult direct;
};
WeightedReduceResult simplex_weighted_reduce(const std::vector<double>& alpha,
                                             const std::function<double(double)>& f,
                                             double u, long long samples,
                                             uint64_t seed);

}  // namespace ibd
