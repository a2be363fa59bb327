#include "harmzero/exactpoly.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace harmzero {

RationalPolynomial multiply(const RationalPolynomial& p, const RationalPolynomial& q) {
  RationalPolynomial out;
  if (p.coeffs.empty() || q.coeffs.empty()) return out;
  out.coeffs.assign(p.coeffs.size() + q.coeffs.size() - 1, Rational(0));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    if (p.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < q.coeffs.size(); ++j) {
      out.coeffs[i + j] += p.coeffs[i] * q.coeffs[j];
    }
  }
  while (out.coeffs.size() > 1 && out.coeffs.back() == 0) out.coeffs.pop_back();
  return out;
}

Rational evaluate(const RationalPolynomial& p, const Rational& x) {
  Rational acc(0);
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalPolynomial build_pc(int c) {
  if (c < 2 || c > kMaxC) {
    throw std::invalid_argument("build_pc: c must lie in [2, " + std::to_string(kMaxC) +
                                "], got " + std::to_string(c));
  }
  RationalPolynomial p{{Rational(0), Rational(1)}};
  for (int j = 2; j <= c; ++j) {
    // x^2 - 1 + 1/j
    RationalPolynomial factor{{Rational(1, j) - 1, Rational(0), Rational(1)}};
    p = multiply(p, factor);
  }
  return p;
}

Rational BlockCoefficients::at(int j) const {
  auto it = b.find(j);
  return it == b.end() ? Rational(0) : it->second;
}

BlockCoefficients extract_b(int c) {
  const RationalPolynomial p = build_pc(c);
  BlockCoefficients out;
  out.c = c;
  for (int j = 1; j <= p.degree(); j += 2) {
    // (-1)^((j-1)/2) is its own inverse.
    const bool negate = ((j - 1) / 2) % 2 == 1;
    out.b.emplace(j, negate ? Rational(-p[j]) : p[j]);
  }
  return out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return BigInt(0);
  BigInt r(1);
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

RationalPolynomial reconstruct(const BlockCoefficients& coeffs) {
  RationalPolynomial p;
  p.coeffs.assign(static_cast<std::size_t>(2 * coeffs.c), Rational(0));
  for (const auto& [j, bj] : coeffs.b) {
    const bool negate = ((j - 1) / 2) % 2 == 1;
    p.coeffs[static_cast<std::size_t>(j)] = negate ? Rational(-bj) : bj;
  }
  while (p.coeffs.size() > 1 && p.coeffs.back() == 0) p.coeffs.pop_back();
  return p;
}

Rational ExactRoot::square() const {
  if (kind == Kind::zero) return Rational(0);
  return Rational(1) - Rational(1, j);
}

Real ExactRoot::value() const {
  if (kind == Kind::zero) return Real(0);
  Real r = sqrt(Real(j - 1) / Real(j));
  return kind == Kind::minus ? Real(-r) : r;
}

std::vector<ExactRoot> roots_pc(int c) {
  if (c < 2 || c > kMaxC) throw std::invalid_argument("roots_pc: c out of range");
  std::vector<ExactRoot> roots;
  roots.reserve(static_cast<std::size_t>(2 * c - 1));
  // sqrt(1 - 1/j) increases with j, so the negative roots come first with
  // j descending.
  for (int j = c; j >= 2; --j) roots.push_back({ExactRoot::Kind::minus, j});
  roots.push_back({ExactRoot::Kind::zero, 0});
  for (int j = 2; j <= c; ++j) roots.push_back({ExactRoot::Kind::plus, j});
  return roots;
}

Bounded eval_poly(const RationalPolynomial& p, const Real& t) {
  const Real u = unit_roundoff();
  const Real at = abs(t);
  Real acc(0);
  Real mag(0);  // Horner on |coefficients| and |t|
  for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
    const Real ci = Real(*it);
    acc = acc * t + ci;
    mag = mag * at + abs(ci);
  }
  // Each coefficient is rounded once and each Horner step contributes a
  // multiply and an add: gamma_{2n+1} with n = degree.
  const int n = std::max(p.degree(), 0);
  const Real gamma = Real(2 * n + 2) * u / (Real(1) - Real(2 * n + 2) * u);
  return {acc, next_above(gamma * mag * (Real(1) + u * 4))};
}

}  // namespace harmzero
