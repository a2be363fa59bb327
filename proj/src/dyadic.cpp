#include "harmzero/dyadic.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace harmzero {

DyadicRational::DyadicRational(long integer) : numerator_(integer), exponent_(0) {}

DyadicRational::DyadicRational(BigInt numerator, unsigned exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  canonicalize();
}

void DyadicRational::canonicalize() {
  if (numerator_ == 0) {
    exponent_ = 0;
    return;
  }
  const auto twos = static_cast<unsigned>(mpz_scan1(numerator_.backend().data(), 0));
  const unsigned shift = twos < exponent_ ? twos : exponent_;
  if (shift > 0) {
    numerator_ >>= shift;
    exponent_ -= shift;
  }
}

DyadicRational DyadicRational::from_real(const Real& x) {
  if (!boost::multiprecision::isfinite(x)) {
    throw std::invalid_argument("DyadicRational::from_real: non-finite value");
  }
  if (x == 0) return DyadicRational();
  BigInt z;
  const mpfr_exp_t e = mpfr_get_z_2exp(z.backend().data(), x.backend().data());
  if (e >= 0) {
    z <<= static_cast<unsigned>(e);
    return DyadicRational(std::move(z), 0);
  }
  return DyadicRational(std::move(z), static_cast<unsigned>(-e));
}

DyadicRational DyadicRational::operator*(long m) const {
  return DyadicRational(numerator_ * m, exponent_);
}

DyadicRational DyadicRational::operator+(const DyadicRational& o) const {
  if (exponent_ >= o.exponent_) {
    return DyadicRational(numerator_ + (o.numerator_ << (exponent_ - o.exponent_)), exponent_);
  }
  return DyadicRational((numerator_ << (o.exponent_ - exponent_)) + o.numerator_, o.exponent_);
}

DyadicRational DyadicRational::operator-() const {
  return DyadicRational(BigInt(-numerator_), exponent_);
}

DyadicRational DyadicRational::scaled_down(unsigned e) const {
  return DyadicRational(numerator_, exponent_ + e);
}

Real DyadicRational::to_real() const {
  Real r;
  mpfr_set_z_2exp(r.backend().data(), numerator_.backend().data(),
                  -static_cast<mpfr_exp_t>(exponent_), MPFR_RNDN);
  return r;
}

Real sinpi_dyadic(const DyadicRational& q) {
  if (q.is_integer()) return Real(0);
  const unsigned e = q.exponent();
  // r = numerator mod 2^(e+1), so q = r / 2^e (mod 2) with r in [0, 2^(e+1)).
  BigInt period = BigInt(1) << (e + 1);
  BigInt r = q.numerator() % period;
  if (r < 0) r += period;
  const BigInt one = BigInt(1) << e;       // q == 1
  const BigInt half = BigInt(1) << (e - 1);  // q == 1/2
  if (r == half) return Real(1);
  if (r == one + half) return Real(-1);

  // Fold into t in (0, 1/2) so that sin(pi t) is well conditioned.
  BigInt t;
  bool negative = false;
  if (r < half) {
    t = r;
  } else if (r < one) {
    t = one - r;
  } else if (r < one + half) {
    t = r - one;
    negative = true;
  } else {
    t = period - r;
    negative = true;
  }
  Real arg = DyadicRational(std::move(t), e).to_real() * pi();
  Real s = sin(arg);
  return negative ? Real(-s) : s;
}

Real cospi_dyadic(const DyadicRational& q) {
  return sinpi_dyadic(q + DyadicRational(BigInt(1), 1));
}

}  // namespace harmzero
