#pragma once

// Exact construction of the odd polynomials
//
//   P_c(x) = x * (x^2 - 1 + 1/2) * (x^2 - 1 + 1/3) * ... * (x^2 - 1 + 1/c)
//
// and of the signed coefficient tables b_j that turn P_c into a sine series
// on the line x = 2^(k-1).

#include "harmzero/real.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <map>
#include <vector>

namespace harmzero {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

/// Largest supported c.
inline constexpr int kMaxC = 64;

/// Univariate polynomial with exact rational coefficients, coeffs[i] is the
/// coefficient of x^i. The trailing coefficient is nonzero.
struct RationalPolynomial {
  std::vector<Rational> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const Rational& operator[](int i) const { return coeffs.at(static_cast<std::size_t>(i)); }
};

/// Exact product of two polynomials.
RationalPolynomial multiply(const RationalPolynomial& p, const RationalPolynomial& q);

/// Exact value at a rational point.
Rational evaluate(const RationalPolynomial& p, const Rational& x);

/// P_c expanded exactly. Throws std::invalid_argument unless 2 <= c <= kMaxC.
RationalPolynomial build_pc(int c);

/// Coefficients b_j for odd j in 1..2c-1, with
///   sum_j (-1)^((j-1)/2) b_j x^j = P_c(x).
/// Even j are absent (their coefficients vanish).
struct BlockCoefficients {
  int c = 0;
  std::map<int, Rational> b;

  /// b_j, zero for even or out-of-range j.
  Rational at(int j) const;
};

BlockCoefficients extract_b(int c);

/// binomial(n, k) exactly.
BigInt binomial(int n, int k);

/// Re-expand sum_j (-1)^((j-1)/2) b_j x^j.
RationalPolynomial reconstruct(const BlockCoefficients& coeffs);

/// A root of P_c kept symbolically: 0 or +-sqrt(1 - 1/j), 2 <= j <= c.
struct ExactRoot {
  enum class Kind { zero, plus, minus };
  Kind kind = Kind::zero;
  int j = 0;

  /// Exact square of the root: 0 or 1 - 1/j.
  Rational square() const;
  /// Root materialized at the working precision (relative error <= 2u).
  Real value() const;
};

/// The 2c-1 roots of P_c, sorted ascending.
std::vector<ExactRoot> roots_pc(int c);

/// Horner evaluation at t with a forward error bound covering coefficient
/// conversion and every rounding step.
Bounded eval_poly(const RationalPolynomial& p, const Real& t);

}  // namespace harmzero
