#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace ibd {

// ---------------------------------------------------------------------------
// Deterministic quadrature and Monte Carlo used to verify every symbolic
// result independently.  All node placements and the PRNG recurrence are
// pinned here so any implementation can reproduce identical numbers.
// ---------------------------------------------------------------------------

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// Globally adaptive Gauss(7)/Kronrod(15) on [a, b]; b may be +infinity, in
// which case t = s/(1-s) maps the tail onto [0, 1).  Interval sums are
// accumulated in left-endpoint order so results are run-to-run identical.
QuadResult quad_1d(const std::function<double(double)>& f, double a, double b,
                   double tol = 1e-10, int max_subdiv = 4000);

// Semi-infinite oscillatory integrals with period-pi sign slabs: the head
// [0, first_zero] and each slab [first_zero + k*pi, first_zero + (k+1)*pi]
// go through quad_1d, then the eventually-alternating slab sums are
// accelerated with the Euler transform.  Slab width is fixed at pi, so the
// integrand's sign must eventually flip once per slab (oscillation period
// 2*pi, e.g. sin x, cos x); rescale faster oscillations before calling.
QuadResult quad_oscillatory(const std::function<double(double)>& f,
                            double tol = 1e-9, double first_zero = M_PI,
                            int max_slabs = 64);

// Iterated 2-D quadrature over [0,inf)^2 (outer in y, inner in x).
QuadResult quad_2d_orthant(const std::function<double(double, double)>& f,
                           double tol = 1e-8);

// ---------------------------------------------------------------------------
// PRNG: xorshift64* (Marsaglia/Vigna).  State update
//   x ^= x >> 12;  x ^= x << 25;  x ^= x >> 27;  return x * 2685821657736338717
// seeded through one splitmix64 scramble so that small seeds decorrelate.
// Uniform doubles are (next_u64() >> 11) * 2^-53 in [0, 1).
// ---------------------------------------------------------------------------
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    state_ = z ? z : 0x9e3779b97f4a7c15ull;
  }
  uint64_t next_u64() {
    uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 2685821657736338717ull;
  }
  double next_unit() { return (double)(next_u64() >> 11) * 0x1.0p-53; }
  // Exponential(rate) via inversion; -log1p(-u) keeps u = 0 finite.
  double next_exp(double rate = 1.0) { return -std::log1p(-next_unit()) / rate; }

 private:
  uint64_t state_;
};

struct McResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  uint64_t samples = 0;
  uint64_t seed = 0;
};

// Uniform sampling of the solid simplex {x_i >= 0, sum x_i <= 1}: the
// direction is Dirichlet(1,...,1) from n unit exponentials, the radius is
// U^{1/n}.  Draw order per sample: E_1..E_n then U.  estimate = mean(f)/n!.
McResult mc_simplex(const std::function<double(const std::vector<double>&)>& f,
                    int n, uint64_t samples, uint64_t seed);

// Importance sampling on [0,inf)^n with independent Exponential(rates[k])
// coordinates: estimate = mean(f(x)) / prod(rates).
McResult mc_orthant_exp(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<double>& rates, uint64_t samples,
                        uint64_t seed);

// ---------------------------------------------------------------------------
// Sequence limits
// ---------------------------------------------------------------------------

template <class T>
struct LimitEstimate {
  T value{};
  double stability = 0.0;  // |last diagonal step|, the honest error proxy
  int levels_used = 0;
};

// Richardson extrapolation of g(h) as h -> 0+ over h0, h0/2, h0/4, ...
// error_power is the leading exponent step of the h-expansion (1 for full
// Taylor, 2 for even expansions).
template <class T>
LimitEstimate<T> richardson_limit(const std::function<T(double)>& g, double h0,
                                  int levels, int error_power = 1) {
  std::vector<std::vector<T>> t(levels);
  double h = h0;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    t[i].resize(i + 1);
    t[i][0] = g(h);
    for (int j = 1; j <= i; ++j) {
      double r = std::pow(2.0, (double)(error_power * j));
      t[i][j] = (r * t[i][j - 1] - t[i - 1][j - 1]) / (r - 1.0);
    }
  }
  LimitEstimate<T> out;
  out.value = t[levels - 1][levels - 1];
  out.levels_used = levels;
  if (levels >= 2)
    out.stability = std::abs(t[levels - 1][levels - 1] - t[levels - 2][levels - 2]);
  return out;
}

struct EulerResult {
  double value = 0.0;
  double stability = 0.0;
  int depth = 0;
};

// Euler transform by iterated averaging of a partial-sum sequence.  Returns
// the row-end value at the depth where consecutive rows settle; convergent
// inputs pass through within rounding, alternating divergent inputs get
// their Abel value.
EulerResult euler_transform(std::vector<double> partial_sums);

}  // namespace ibd
