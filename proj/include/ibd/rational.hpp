#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ibd {

struct RationalOverflow : std::runtime_error {
  RationalOverflow() : std::runtime_error("rational arithmetic overflow") {}
};

// Exact rational arithmetic over 64-bit integers, __int128 intermediates.
// Magnitudes in this project stay small (binomials up to choose(26,13),
// dyadic denominators up to 2^27), so overflow throws instead of widening.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(long long n, long long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) { nn = -nn; dd = -dd; }
    reduce_assign(nn, dd);
  }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
    __int128 d = (__int128)a.den_ * b.den_;
    return make(n, d);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    __int128 n = (__int128)a.num_ * b.num_;
    __int128 d = (__int128)a.den_ * b.den_;
    return make(n, d);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    __int128 n = (__int128)a.num_ * b.den_;
    __int128 d = (__int128)a.den_ * b.num_;
    if (d < 0) { n = -n; d = -d; }
    return make(n, d);
  }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  Rational pow(int e) const {
    if (e < 0) return Rational(1) / pow(-e);
    Rational r(1), base = *this;
    while (e) {
      if (e & 1) r *= base;
      base = (e > 1) ? base * base : base;
      e >>= 1;
    }
    return r;
  }

  double to_double() const { return (double)num_ / (double)den_; }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static Rational make(__int128 n, __int128 d) {
    Rational r;
    r.reduce_assign(n, d);
    return r;
  }
  void reduce_assign(__int128 n, __int128 d) {
    if (n == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    __int128 an = n < 0 ? -n : n;
    __int128 g = gcd128(an, d);
    n /= g;
    d /= g;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX) throw RationalOverflow();
    num_ = (long long)n;
    den_ = (long long)d;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  long long num_ = 0;
  long long den_ = 1;
};

// choose(n, k) computed with stepwise-exact division; n <= 62 stays in range.
inline Rational binomial(long long n, long long k) {
  if (k < 0 || k > n) return Rational(0);
  if (k > n - k) k = n - k;
  __int128 c = 1;
  for (long long i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
    if (c > INT64_MAX) throw RationalOverflow();
  }
  return Rational((long long)c);
}

inline long long factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  if (n > 20) throw RationalOverflow();
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// (2m-1)!! = 1*3*5*...*(2m-1); fits in 64 bits through m = 16.
inline long long odd_double_factorial(int m) {
  if (m < 0) throw std::domain_error("double factorial of negative index");
  if (m > 16) throw RationalOverflow();
  long long r = 1;
  for (int i = 1; i <= m; ++i) r *= 2 * i - 1;
  return r;
}

// Gamma(m + 1/2) = odd_double_factorial(m) / 2^m * sqrt(pi), exactly.
inline Rational gamma_half_coeff(int m) {
  return Rational(odd_double_factorial(m), 1LL << m);
}

// Exact value of the form coef * (sqrt(pi))^p.  Even p is a plain pi power.
struct ExactPi {
  Rational coef;
  int sqrt_pi_pow = 0;

  ExactPi() = default;
  ExactPi(Rational c, int p) : coef(c), sqrt_pi_pow(c.is_zero() ? 0 : p) {}

  double to_double() const {
    static const double kSqrtPi = 1.7724538509055160273;
    double v = coef.to_double();
    int p = sqrt_pi_pow;
    double base = p >= 0 ? kSqrtPi : 1.0 / kSqrtPi;
    for (int i = 0; i < std::abs(p); ++i) v *= base;
    return v;
  }

  friend ExactPi operator*(const ExactPi& a, const ExactPi& b) {
    return ExactPi(a.coef * b.coef, a.sqrt_pi_pow + b.sqrt_pi_pow);
  }
  friend bool operator==(const ExactPi& a, const ExactPi& b) {
    return a.coef == b.coef && a.sqrt_pi_pow == b.sqrt_pi_pow;
  }
  friend bool operator!=(const ExactPi& a, const ExactPi& b) { return !(a == b); }

  std::string str() const {
    if (coef.is_zero()) return "0";
    std::string s = coef.str();
    if (sqrt_pi_pow == 0) return s;
    if (sqrt_pi_pow % 2 == 0) {
      int k = sqrt_pi_pow / 2;
      s += " * pi";
      if (k != 1) s += "^" + std::to_string(k);
    } else {
      s += " * sqrt(pi)^" + std::to_string(sqrt_pi_pow);
    }
    return s;
  }
};

}  // namespace ibd
