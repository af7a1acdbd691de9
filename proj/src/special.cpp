#include "ibd/special.hpp"

#include <cmath>
#include <stdexcept>

namespace ibd {

cplx ipow(cplx z, long long m) {
  if (m < 0) return cplx(1.0, 0.0) / ipow(z, -m);
  cplx r(1.0, 0.0), b = z;
  while (m) {
    if (m & 1) r *= b;
    if (m > 1) b *= b;
    m >>= 1;
  }
  return r;
}

cplx gamma_cplx(cplx z) {
  static const double g[9] = {
      0.99999999999980993,
      676.5203681218851,
      -1259.1392167224028,
      771.32342877765313,
      -176.61502916214059,
      12.507343278686905,
      -0.13857109526572012,
      9.9843695780195716e-6,
      1.5056327351493116e-7};
  static const double pi = 3.14159265358979323846;
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return pi / (std::sin(pi * z) * gamma_cplx(1.0 - z));
  }
  z -= 1.0;
  cplx x = g[0];
  for (int i = 1; i < 9; ++i) x += g[i] / (z + (double)i);
  cplx t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// B_{2j} for j = 1..15.
static const double kBern2j[16] = {
    0.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0};

double hurwitz_zeta(double s, double a) {
  if (a <= 0.0) throw std::domain_error("hurwitz_zeta requires a > 0");
  if (s == 1.0) throw std::domain_error("hurwitz_zeta pole at s = 1");
  // Large s: the defining sum already converges at double precision.
  if (s > 34.0) {
    double sum = 0.0;
    for (int k = 0;; ++k) {
      double term = std::pow(a + k, -s);
      sum += term;
      if (term < 1e-18 * (std::abs(sum) + 1e-300) || k > 100000) break;
    }
    return sum;
  }
  // Euler-Maclaurin from A = a + N with A comfortably past |s|.
  double target = std::max(18.0, 1.6 * std::abs(s));
  int N = a >= target ? 0 : (int)std::ceil(target - a);
  double sum = 0.0;
  for (int k = 0; k < N; ++k) sum += std::pow(a + k, -s);
  double A = a + N;
  sum += std::pow(A, 1.0 - s) / (s - 1.0);
  sum += 0.5 * std::pow(A, -s);
  // Bernoulli tail: sum_j B_{2j}/(2j)! * (s)_{2j-1} * A^{-s-2j+1}
  double poch = s;          // (s)_1
  double fact = 2.0;        // (2j)! running
  double Apow = std::pow(A, -s - 1.0);
  for (int j = 1; j <= 12; ++j) {
    sum += kBern2j[j] / fact * poch * Apow;
    // advance to j+1: multiply Pochhammer by (s+2j-1)(s+2j), factorial by (2j+1)(2j+2)
    poch *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    Apow /= A * A;
  }
  return sum;
}

}  // namespace ibd
