#include "harmzero/real.hpp"

#include <mpfr.h>

#include <cmath>
#include <sstream>

namespace harmzero {

namespace {

unsigned digits10_for_bits(unsigned bits) {
  // Boost maps d decimal digits to roughly d / log10(2) + 2 bits; pick the
  // smallest d that reaches the request.
  unsigned d = static_cast<unsigned>(std::floor(bits * 0.30102999566398120));
  if (d < 1) d = 1;
  while (boost::multiprecision::detail::digits10_2_2(d) < bits) ++d;
  return d;
}

}  // namespace

void set_working_precision(unsigned bits) {
  if (bits < 2) throw std::invalid_argument("precision must be at least 2 bits");
  Real::default_precision(digits10_for_bits(bits));
}

unsigned working_precision_bits() {
  return boost::multiprecision::detail::digits10_2_2(Real::default_precision());
}

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_digits10_(Real::default_precision()) {
  set_working_precision(bits);
}

PrecisionGuard::~PrecisionGuard() { Real::default_precision(saved_digits10_); }

Real unit_roundoff() {
  return ldexp2(Real(1), 1 - static_cast<long>(working_precision_bits()));
}

Real pi() {
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

Real ldexp2(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.backend().data(), x.backend().data(), e, MPFR_RNDN);
  return r;
}

int Bounded::certified_sign() const {
  if (abs(value) <= error) return 0;
  return value > 0 ? 1 : -1;
}

std::string to_decimal(const Real& x) {
  const auto bits = mpfr_get_prec(x.backend().data());
  const auto digits = static_cast<std::streamsize>(std::ceil(bits * 0.30102999566398120)) + 3;
  return x.str(digits, std::ios_base::scientific);
}

Real from_decimal(const std::string& s) {
  Real r;
  if (s.empty() || mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

Real next_below(const Real& x) {
  Real r = x;
  mpfr_nextbelow(r.backend().data());
  return r;
}

Real next_above(const Real& x) {
  Real r = x;
  mpfr_nextabove(r.backend().data());
  return r;
}

UniformSampler::UniformSampler(std::uint64_t seed) : engine_(seed) {}

double UniformSampler::next() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace harmzero
