#pragma once

// Inductive assembly of g = sum_k a_k u_k, the harmonic map
// h = (g, sin(pi x) e^{pi y}), its term-wise complex extension f and the
// dimension lift.
//
// The construction is truncated at depth N. Every level i > N that a
// continuation would add obeys
//   a_i * ||u_i||_{C^1(B_{2^i})} <= min(m_1..m_{i-1}) / 2^i,
// so the unbuilt tail is bounded in C^1 on B_{2^{N+1}} by min(m_1..m_N) 2^-N.
// That bound is carried as interval inflation by every evaluation.

#include "harmzero/blocks.hpp"
#include "harmzero/real.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>
#include <vector>

namespace harmzero {

struct Level {
  int k = 0;
  int c = 0;
  Real A;  // modulus cap
  Real a;  // amplitude
  Real m;  // sign-persistence margin on B_{2^k}
  Block block;
};

struct Construction {
  std::vector<int> n;
  Real epsilon;
  int depth = 0;
  unsigned precision = 0;  // requested mantissa bits
  std::vector<Level> levels;

  const Level& level(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
  Real min_margin() const;
};

/// Minimizer of r^(1+eps) - (pi/2) kappa r over r >= 0.
struct CapMinimum {
  Real r_star;
  Real value;  // M(kappa) <= 0
};

CapMinimum cap_minimum(int kappa, const Real& epsilon);

/// A_k = 2^-kappa e^{M(kappa)} / 2^{3c-2} with kappa = 2c - 1, rounded
/// downward so that a_k <= A_k implies
///   a_k 2^{3c-2} e^{(pi/2) kappa r} <= 2^-kappa e^{r^{1+eps}} for all r >= 0.
Real compute_cap_A(int k, int c, const Real& epsilon);

/// a * 2^k * c1_norm_bound(u_k, 2^k): the left side of the amplitude audit.
Real amplitude_load(const Real& a, const Block& block);

/// Largest a <= A with amplitude_load(a) <= min of the prior margins
/// (a = A when there are no prior levels). Throws PrecisionError if the
/// result is not strictly positive.
Real choose_amplitude(int k, std::span<const Level> prior, const Block& block, const Real& cap);

/// Half the smallest certified |a_k u_k| over the test ordinates
/// -2^(k-1), the midpoints between consecutive predicted zeros, and 0 on the
/// line x = 2^(k-1). Any perturbation below it in sup norm keeps the sign
/// pattern, hence at least c_k - 1 sign changes. Throws PrecisionError if
/// the margin is not positive or the signs do not alternate.
Real choose_margin(const Level& level);
Real choose_margin(int k, std::span<const Level> partial);

/// Test ordinates used by choose_margin, ascending.
std::vector<Real> margin_test_ordinates(int k, int c);

/// Runs the induction for levels 1..depth. Sets the working precision.
Construction build_construction(const std::vector<int>& n, const Real& epsilon, int depth,
                                unsigned precision);

/// build_construction, doubling the precision after each PrecisionError up
/// to max_precision. `attempts` receives the precisions tried.
Construction build_construction_adaptive(const std::vector<int>& n, const Real& epsilon,
                                         int depth, unsigned precision, unsigned max_precision,
                                         std::vector<unsigned>* attempts = nullptr);

struct TailBound {
  int k = 0;
  int depth = 0;
  Real built_part;    // sum_{i=k+1}^{N} a_i c1_norm_bound(u_i, 2^k)
  Real unbuilt_part;  // min(m_1..m_N) 2^-N
  Real value;         // built_part + unbuilt_part
};

/// C^1 bound on B_{2^k} for all levels beyond k (built and unbuilt).
TailBound tail_bound(const Construction& constr, int k);

/// C^1 bound on B_{2^{N+1}} for the levels beyond the truncation.
Real unbuilt_tail(const Construction& constr);

struct AuditRow {
  int k = 0;
  Real cap_recomputed;  // compute_cap_A for this level
  bool cap_ok = false;  // a <= A <= cap_recomputed
  Real load;            // amplitude_load(a)
  Real prior_min;       // min of earlier margins (unused at k = 1)
  bool load_ok = false;
  Real tail;            // tail_bound(k).value
  bool tail_ok = false; // tail < m
  bool margin_ok = false;  // 0 < m <= choose_margin(level)
  bool ok() const { return cap_ok && load_ok && tail_ok && margin_ok; }
};

/// Re-derives the induction conditions from the stored values.
std::vector<AuditRow> audit_construction(const Construction& constr);

/// Throws DomainError when (x, y) lies outside B_{2^{N+1}}.
void require_in_domain(const Construction& constr, const Real& x, const Real& y);

/// g at (x, y); the error covers rounding and the unbuilt tail.
Bounded eval_g(const Construction& constr, const Real& x, const Real& y);
Bounded eval_g(const Construction& constr, const DyadicRational& x, const Real& y);

/// Value and gradient of g with the same error model.
Jet jet_g(const Construction& constr, const DyadicRational& x, const Real& y);

/// sin(pi x) e^{pi y} with exact phase reduction.
Bounded eval_second(const DyadicRational& x, const Real& y);

struct HValue {
  Bounded g;
  Bounded s;
};

HValue eval_h(const Construction& constr, const Real& x, const Real& y);

struct Complex {
  Real re{0};
  Real im{0};
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator*(const Real& a, const Complex& b);
Real abs(const Complex& z);

struct FValue {
  Complex f1;
  Real err1;  // rounding only
  Complex f2;
  Real err2;
};

/// Term-wise complex extension of h (truncated at depth N). On real
/// arguments it reduces to eval_h.
FValue eval_f(const Construction& constr, const Complex& z1, const Complex& z2);

/// (h(x1, x2), x3, ..., xd). Throws std::invalid_argument for d < 3 or a
/// point of the wrong dimension.
std::vector<Real> lift_dim(const Construction& constr, int d, std::span<const Real> point);

/// Lossless JSON form (decimal strings for extended-precision values).
nlohmann::json to_json(const Construction& constr);

/// Parses and rebuilds the blocks. Sets the working precision from the file.
/// Throws std::invalid_argument on malformed input.
Construction construction_from_json(const nlohmann::json& j);

/// Hex SHA-256 of the canonical JSON form.
std::string construction_hash(const Construction& constr);

}  // namespace harmzero
