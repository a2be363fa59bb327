#pragma once

#include "harmzero/exactpoly.hpp"
#include "harmzero/real.hpp"

namespace harmzero {

/// numerator / 2^exponent, kept canonical: the numerator is odd or the value
/// is zero with exponent 0.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long integer);  // NOLINT: implicit from integers is intended
  DyadicRational(BigInt numerator, unsigned exponent);

  /// Exact conversion of a finite binary float.
  static DyadicRational from_real(const Real& x);

  const BigInt& numerator() const { return numerator_; }
  unsigned exponent() const { return exponent_; }
  bool is_integer() const { return exponent_ == 0; }

  DyadicRational operator*(long m) const;
  DyadicRational operator+(const DyadicRational& o) const;
  DyadicRational operator-() const;
  /// this / 2^e
  DyadicRational scaled_down(unsigned e) const;

  /// Rounded to the working precision.
  Real to_real() const;

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;

 private:
  void canonicalize();

  BigInt numerator_{0};
  unsigned exponent_ = 0;
};

/// Relative error bound of sinpi_dyadic / cospi_dyadic, in units of the
/// unit roundoff.
inline constexpr int kSinPiUlps = 6;

/// sin(pi q) by exact reduction of q modulo 2. Exactly 0 for integer q and
/// exactly +-1 for odd multiples of 1/2; otherwise within kSinPiUlps * u
/// relative error.
Real sinpi_dyadic(const DyadicRational& q);

/// cos(pi q) = sin(pi (q + 1/2)), same guarantees.
Real cospi_dyadic(const DyadicRational& q);

}  // namespace harmzero
