#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ibd/rational.hpp"

using namespace ibd;

TEST_CASE("rational arithmetic reduces exactly") {
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(7, 3) * Rational(9, 14) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational(-3).str() == "-3");
  CHECK((-Rational(5, 7)).str() == "-5/7");
  CHECK(Rational(0).is_zero());
  CHECK(Rational(4, 2).is_integer());
  CHECK_FALSE(Rational(1, 3).is_integer());
}

TEST_CASE("rational ordering and pow") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(1, 3));
  CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
  CHECK(Rational(2).pow(-2) == Rational(1, 4));
  CHECK(Rational(5).pow(0) == Rational(1));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("rational overflow is detected, not wrapped") {
  Rational big(INT64_MAX / 2);
  CHECK_THROWS_AS(big * Rational(3), RationalOverflow);
  // intermediate products above 64 bits that reduce back are fine
  Rational a(1LL << 40, 3);
  Rational b(3, 1LL << 40);
  CHECK(a * b == Rational(1));
}

TEST_CASE("binomial is exact in the supported range") {
  CHECK(binomial(0, 0) == Rational(1));
  CHECK(binomial(5, 2) == Rational(10));
  CHECK(binomial(25, 12) == Rational(5200300));
  CHECK(binomial(52, 26) == Rational(495918532948104LL));
  CHECK(binomial(10, -1) == Rational(0));
  CHECK(binomial(10, 11) == Rational(0));
  CHECK_THROWS_AS(binomial(68, 34), RationalOverflow);
}

TEST_CASE("factorial and double factorial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(20) == 2432902008176640000LL);
  CHECK_THROWS_AS(factorial(21), RationalOverflow);
  CHECK(odd_double_factorial(0) == 1);
  CHECK(odd_double_factorial(1) == 1);
  CHECK(odd_double_factorial(3) == 15);
  CHECK(odd_double_factorial(4) == 105);
}

TEST_CASE("gamma_half_coeff matches Gamma(m+1/2)/sqrt(pi)") {
  CHECK(gamma_half_coeff(0) == Rational(1));
  CHECK(gamma_half_coeff(1) == Rational(1, 2));
  CHECK(gamma_half_coeff(2) == Rational(3, 4));
  CHECK(gamma_half_coeff(3) == Rational(15, 8));
  // numeric cross-check against lgamma
  for (int m = 0; m <= 8; ++m) {
    double want = std::exp(std::lgamma(m + 0.5)) / std::sqrt(M_PI);
    CHECK(gamma_half_coeff(m).to_double() == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("ExactPi values and algebra") {
  ExactPi half_pi(Rational(1, 2), 2);
  CHECK(half_pi.to_double() == doctest::Approx(M_PI_2).epsilon(1e-15));
  CHECK(half_pi.str() == "1/2 * pi");

  ExactPi sqrt_pi(Rational(1), 1);
  CHECK(sqrt_pi.to_double() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
  CHECK((sqrt_pi * sqrt_pi).to_double() == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(sqrt_pi * sqrt_pi == ExactPi(Rational(1), 2));

  ExactPi zero(Rational(0), 5);
  CHECK(zero == ExactPi(Rational(0), 0));  // zero forgets its pi power
  CHECK(zero.str() == "0");

  ExactPi pi_sq(Rational(2), 4);
  CHECK(pi_sq.str() == "2 * pi^2");
  CHECK(pi_sq.to_double() == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-14));
}
