#pragma once

#include <complex>

namespace ibd {

using cplx = std::complex<double>;

// Gamma on the complex plane (Lanczos, g=7), reflection for Re z < 1/2.
cplx gamma_cplx(cplx z);

// Hurwitz zeta(s, a) for real s != 1, a > 0, via Euler-Maclaurin with a
// 12-term Bernoulli tail.  Target accuracy ~1e-13 relative for |s| <= 40.
double hurwitz_zeta(double s, double a);

inline double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

// Integer power with exact small-case behavior; m may be negative.
cplx ipow(cplx z, long long m);

}  // namespace ibd
