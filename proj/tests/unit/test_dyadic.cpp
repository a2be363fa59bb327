#include "harmzero/dyadic.hpp"

#include <doctest.h>

#include <cmath>

using namespace harmzero;

TEST_CASE("canonical form") {
  const DyadicRational a(BigInt(12), 4);  // 12/16 = 3/4
  CHECK(a.numerator() == 3);
  CHECK(a.exponent() == 2);
  CHECK(DyadicRational(BigInt(0), 9) == DyadicRational(0));
  CHECK((a + a) == DyadicRational(BigInt(3), 1));
  CHECK((a * 4) == DyadicRational(3));
  CHECK(DyadicRational(6).scaled_down(2) == DyadicRational(BigInt(3), 1));
}

TEST_CASE("from_real is exact") {
  set_working_precision(128);
  for (double x : {0.0, 1.0, -3.5, 0.1, 1e-30, 12345.678}) {
    const Real r(x);
    CHECK(DyadicRational::from_real(r).to_real() == r);
  }
}

TEST_CASE("sinpi is exact at integers and half-integers") {
  set_working_precision(128);
  for (long n = -40; n <= 40; ++n) {
    CHECK(sinpi_dyadic(DyadicRational(n)) == 0);
    const Real half = sinpi_dyadic(DyadicRational(BigInt(2 * n + 1), 1));
    CHECK(half == ((n % 2 == 0) ? 1 : -1));
    CHECK(cospi_dyadic(DyadicRational(BigInt(2 * n + 1), 1)) == 0);
  }
}

TEST_CASE("sinpi matches the library sine") {
  set_working_precision(128);
  const Real tol = unit_roundoff() * kSinPiUlps;
  for (int i = -200; i <= 200; ++i) {
    const Real x = Real(i) * Real("0.0371");
    const DyadicRational q = DyadicRational::from_real(x);
    const Real expect = sin(pi() * q.to_real());
    const Real got = sinpi_dyadic(q);
    // The reference itself loses accuracy through pi * x; allow for it.
    CHECK(abs(got - expect) <= tol * abs(expect) + unit_roundoff() * (abs(x) + 1) * 16);
  }
}
