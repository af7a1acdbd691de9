#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ibd/rational.hpp"
#include "ibd/special.hpp"

namespace ibd {

// ---------------------------------------------------------------------------
// Expression AST for the little integrand language.
//
// Grammar (whitespace-insensitive):
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := primary ('^' power)?          //  right-associative
//   primary:= number | 'pi' | 'e' | 'i' | ident | ident '(' args ')' | '(' expr ')'
//
// Unary minus binds looser than '^', so  -x^2 == -(x^2)  and  x^-2  is a
// syntax error (write x^(-2)).  Integer literals and integer/integer fold to
// exact rationals; decimals (with optional exponent) stay floating.
// ---------------------------------------------------------------------------

enum class NodeType { Rat, Dec, Pi, E, I, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Fn { Sin, Cos, Exp, Log, Sqrt, Gamma, Zeta, HZeta, Heaviside };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  NodeType type;
  Rational rat;             // Rat (non-negative by construction)
  double dec = 0.0;         // Dec (non-negative by construction)
  std::string var;          // Var
  Fn fn = Fn::Sin;          // Call
  std::vector<ExprPtr> kids;
};

// node builders; negative literals are routed through Neg
ExprPtr rat(Rational r);
inline ExprPtr rat(long long n) { return rat(Rational(n)); }
inline ExprPtr rat(long long n, long long d) { return rat(Rational(n, d)); }
ExprPtr dec(double v);
ExprPtr pi_const();
ExprPtr e_const();
ExprPtr i_const();
ExprPtr var(std::string name);
ExprPtr neg(ExprPtr a);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, ExprPtr b);
ExprPtr call(Fn f, std::vector<ExprPtr> args);

bool equals(const ExprPtr& a, const ExprPtr& b);

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " (at offset " + std::to_string(off) + ")"),
        offset(off) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DiffError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TaylorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotExpPolyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ExprPtr parse(const std::string& src);
std::string print(const ExprPtr& e);

// Step-function value at 0: the source convention is H(0) = 1; the midpoint
// convention H(0) = 1/2 is the Fourier/Dirichlet value and is switchable
// everywhere a Heaviside gets evaluated.
enum class H0 { One, Half };

inline double heaviside(double t, H0 conv = H0::One) {
  if (t > 0.0) return 1.0;
  if (t < 0.0) return 0.0;
  return conv == H0::One ? 1.0 : 0.5;
}

struct EvalOpts {
  H0 h0 = H0::One;
};

using VarMap = std::map<std::string, cplx>;

cplx eval(const ExprPtr& e, const VarMap& vars = {}, const EvalOpts& opts = {});

// d/d var; H, zeta, hzeta, gamma nodes on the path are rejected.
ExprPtr diff(const ExprPtr& e, const std::string& v);

// Taylor coefficients of e about `center` in the single variable `v`,
// degrees 0..order.  Removable singularities cancel through series division
// (never through numeric limits); poles and branch points throw TaylorError.
std::vector<cplx> taylor_coeffs(const ExprPtr& e, const std::string& v,
                                cplx center, int order);

// ---------------------------------------------------------------------------
// ExpPoly: finite sums  sum_j c_j x^{n_j} e^{-b_j x}  with every b_j > 0.
// Canonical form: terms sorted by (b, n), merged, zero coefficients dropped.
// ---------------------------------------------------------------------------
struct ExpPoly {
  struct Term {
    cplx c;
    double b;  // decay rate, > 0
    int n;     // monomial degree, >= 0
  };
  std::vector<Term> terms;

  cplx eval(double x) const;
  ExpPoly derivative() const;
};

ExpPoly normalize(ExpPoly p);
ExpPoly mul(const ExpPoly& a, const ExpPoly& b);
ExprPtr to_expr(const ExpPoly& p, const std::string& v);

// Decides membership in the ExpPoly class and extracts canonical terms;
// throws NotExpPolyError otherwise (pure polynomials and growing
// exponentials are outside: they have no b > 0).
ExpPoly classify_exp_poly(const ExprPtr& e, const std::string& v);
// convenience: single free variable detected automatically
ExpPoly classify_exp_poly(const ExprPtr& e);

// free variables, sorted
std::vector<std::string> free_vars(const ExprPtr& e);

// numeric literals as expressions: integers become exact rationals,
// everything else a decimal; complex values use the i constant
ExprPtr num_expr(double x);
ExprPtr cplx_expr(cplx c);

}  // namespace ibd
