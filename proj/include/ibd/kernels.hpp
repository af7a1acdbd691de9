#pragma once
// Closed function family the shift/series operators act on exactly:
// finite sums of terms  c * (x+s)^m * log(x+s)^l * e^{w x} * H(x+h).
// Closed under shift, differentiation, the antiderivatives listed below,
// and the one-sided limit x -> 0+.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ibd/expr.hpp"

namespace ibd {

struct KernelError : std::runtime_error {
  explicit KernelError(const std::string& what) : std::runtime_error(what) {}
};

// One term c*(x+s)^m * log(x+s)^l * exp(w*x) * H(x+h).
// l is a 0/1 flag (log^2 never arises); the Heaviside factor exists only
// when h is set, and such terms are only shifted/evaluated, never composed.
struct KernelTerm {
  cplx c{1.0, 0.0};
  cplx s{0.0, 0.0};
  int m = 0;
  int l = 0;
  cplx w{0.0, 0.0};
  std::optional<double> h;
};

struct Kernel {
  std::vector<KernelTerm> terms;
};

inline Kernel one_over_x() { return Kernel{{KernelTerm{cplx(1, 0), cplx(0, 0), -1, 0, cplx(0, 0), {}}}}; }
inline Kernel log_x() { return Kernel{{KernelTerm{cplx(1, 0), cplx(0, 0), 0, 1, cplx(0, 0), {}}}}; }
inline Kernel heaviside_x() { return Kernel{{KernelTerm{cplx(1, 0), cplx(0, 0), 0, 0, cplx(0, 0), 0.0}}}; }

// integration domains whose Laplace transform of 1 is elementary
struct SemiInfinite {};
struct Interval {
  double a, b;
};
struct Orthant {
  int n;
};
struct Radial {
  int n;
};
using Domain = std::variant<SemiInfinite, Interval, Orthant, Radial>;

// Tensor factors of ∫ e^{-x·y} dy over the domain, one Kernel per transform
// variable: {1/x}; {(e^{-ax}-e^{-bx})/x}; n copies of 1/u; the radial factor
// (2 pi^{n/2} Gamma(n)/Gamma(n/2)) u^{-n}.
std::vector<Kernel> elementary_laplace_kernel(const Domain& d);

// k(x+a); Heaviside thresholds shift too, which requires a real
Kernel shift(const Kernel& k, cplx a);

Kernel derivative(const Kernel& k);
Kernel derivative_n(const Kernel& k, int n);

// F with F' = k, constant of integration 0; throws on terms outside the
// closure (log*exp, log/x, e^{wx}/x^j)
Kernel antiderivative(const Kernel& k);

Kernel scale(const Kernel& k, cplx factor);
Kernel add(const Kernel& a, const Kernel& b);

// sort terms by (s, m, l, w, h) and merge like terms; exact on integer
// fields, 1e-12 tolerance on complex/real ones; drops exact-zero terms
Kernel canonicalize(const Kernel& k);

cplx eval(const Kernel& k, double x, H0 h0 = H0::One);

// limit x -> 0+, with exact cancellation of divergent power/log orders;
// nullopt means the kernel diverges there
std::optional<cplx> limit_at_zero(const Kernel& k);

ExprPtr kernel_to_expr(const Kernel& k, const std::string& var = "x");

}  // namespace ibd
