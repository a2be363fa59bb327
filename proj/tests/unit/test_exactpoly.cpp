#include "harmzero/exactpoly.hpp"

#include <doctest.h>

using namespace harmzero;

namespace {

// Product form evaluated directly: x * prod_{j=2..c} (x^2 - 1 + 1/j).
Rational product_form(int c, const Rational& x) {
  Rational v = x;
  for (int j = 2; j <= c; ++j) v *= x * x - 1 + Rational(1, j);
  return v;
}

BigInt pascal(int n, int k) {
  std::vector<BigInt> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<BigInt> next(row.size() + 1, 0);
    for (std::size_t t = 0; t < row.size(); ++t) {
      next[t] += row[t];
      next[t + 1] += row[t];
    }
    row = next;
  }
  return row[static_cast<std::size_t>(k)];
}

}  // namespace

TEST_CASE("P_c agrees with its product form at 2c points") {
  for (int c = 2; c <= 12; ++c) {
    const RationalPolynomial p = build_pc(c);
    CHECK(p.degree() == 2 * c - 1);
    for (int i = 0; i < 2 * c; ++i) {
      const Rational x(i - c, 7);
      CHECK(evaluate(p, x) == product_form(c, x));
    }
  }
}

TEST_CASE("small cases by hand") {
  // P_2 = x^3 - x/2, P_3 = x (x^2 - 1/2)(x^2 - 2/3) = x^5 - 7/6 x^3 + 1/3 x
  const BlockCoefficients b2 = extract_b(2);
  CHECK(b2.at(1) == Rational(-1, 2));
  CHECK(b2.at(3) == Rational(-1));
  const BlockCoefficients b3 = extract_b(3);
  CHECK(b3.at(1) == Rational(1, 3));
  CHECK(b3.at(3) == Rational(7, 6));
  CHECK(b3.at(5) == Rational(1));
  CHECK(b3.at(2) == 0);
  CHECK(b3.at(7) == 0);
}

TEST_CASE("even coefficients vanish and b is bounded by binomials") {
  for (int c = 2; c <= 20; ++c) {
    const RationalPolynomial p = build_pc(c);
    for (int i = 0; i <= p.degree(); i += 2) CHECK(p[i] == 0);
    const BlockCoefficients b = extract_b(c);
    CHECK(b.b.size() == static_cast<std::size_t>(c));
    for (const auto& [j, bj] : b.b) {
      CHECK(j % 2 == 1);
      CHECK(abs(bj) <= Rational(pascal(c - 1, (j - 1) / 2)));
    }
    const RationalPolynomial back = reconstruct(b);
    CHECK(back.coeffs == p.coeffs);
  }
}

TEST_CASE("binomial matches Pascal's triangle") {
  for (int n = 0; n <= 40; n += 5) {
    for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == pascal(n, k));
  }
}

TEST_CASE("roots are the 2c-1 exact zeros, ascending") {
  set_working_precision(128);
  for (int c = 2; c <= 10; ++c) {
    const auto roots = roots_pc(c);
    REQUIRE(roots.size() == static_cast<std::size_t>(2 * c - 1));
    const RationalPolynomial p = build_pc(c);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      // P_c(x) / x as a polynomial in t = x^2 vanishes at t = square() unless the root is 0.
      const Rational t = roots[i].square();
      if (roots[i].kind == ExactRoot::Kind::zero) {
        CHECK(t == 0);
      } else {
        Rational q(0), tp(1);
        for (int d = 1; d <= p.degree(); d += 2) {
          q += p[d] * tp;
          tp *= t;
        }
        CHECK(q == 0);
      }
      if (i > 0) CHECK(roots[i - 1].value() < roots[i].value());
    }
  }
}

TEST_CASE("eval_poly bounds its own error") {
  set_working_precision(64);
  for (int c = 2; c <= 8; ++c) {
    const RationalPolynomial p = build_pc(c);
    for (int i = -9; i <= 9; ++i) {
      const Rational x(i, 8);  // dyadic, exact in binary
      const Bounded v = eval_poly(p, Real(i) / 8);
      const Real exact(evaluate(p, x));
      CHECK(abs(v.value - exact) <= v.error + unit_roundoff() * abs(exact));
    }
  }
}

TEST_CASE("out-of-range c is rejected") {
  CHECK_THROWS_AS(build_pc(1), std::invalid_argument);
  CHECK_THROWS_AS(build_pc(kMaxC + 1), std::invalid_argument);
}
