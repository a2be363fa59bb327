#pragma once

// Extended-precision scalar support shared by every module.
//
// All floating work runs on MPFR through Boost.Multiprecision. The working
// precision is process-wide: it is fixed when a construction is built or
// loaded, and every value created afterwards carries it.

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace harmzero {

using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

/// Set the working mantissa width. The effective width is at least `bits`
/// (MPFR precision is requested through a decimal digit count).
void set_working_precision(unsigned bits);

/// Effective mantissa width of newly created values, in bits.
unsigned working_precision_bits();

/// Restores the previous working precision on scope exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits10_;
};

/// Unit roundoff of the working precision, 2^(1-p).
Real unit_roundoff();

Real pi();

/// x * 2^e, exact.
Real ldexp2(const Real& x, long e);

/// A computed value together with a bound on its absolute forward error:
/// the exact quantity lies in [value - error, value + error].
struct Bounded {
  Real value;
  Real error;

  /// Sign certified by the bound: +1 / -1, or 0 when |value| <= error.
  int certified_sign() const;
};

/// Decimal string with enough digits to round-trip at the working precision.
std::string to_decimal(const Real& x);

/// Parse a decimal string at the working precision. Throws std::invalid_argument.
Real from_decimal(const std::string& s);

/// Next representable value below / above x at its own precision.
Real next_below(const Real& x);
Real next_above(const Real& x);

/// Thrown when a computation cannot be certified at the working precision.
/// `level` is the construction level involved, or 0 when not level-specific.
class PrecisionError : public std::runtime_error {
 public:
  PrecisionError(const std::string& what, int level)
      : std::runtime_error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

/// Thrown when a point lies outside the region where the truncation tail
/// bound is valid.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Deterministic uniform generator in [0, 1) driven by a 64-bit seed. The
/// mapping from engine output to doubles is fixed here so that sampled
/// quantities are reproducible across standard libraries.
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed);
  double next();
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace harmzero
