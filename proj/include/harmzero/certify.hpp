#pragma once

// Certified zero counting for h = (g, sin(pi x) e^{pi y}).
//
// The second component vanishes exactly on the integer lines, so zeros of h
// are the zeros of g on those lines. A zero is certified by a bracket whose
// endpoint values of g exceed their full error bound (rounding plus the
// unbuilt truncation tail) with opposite signs.

#include "harmzero/assembly.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace harmzero {

struct ZeroCertificate {
  long line_x = 0;
  Real y_lo;
  Real y_hi;
  int sign_lo = 0;
  int sign_hi = 0;
  Real refined_root;      // root of the truncated g, inside [y_lo, y_hi]
  Real root_halfwidth;    // half-width of the final (uncertified) bisection bracket
  Real dg_dy;             // computed dg/dy at refined_root
  Real derivative_bound;  // certified lower bound on |dg/dy| there, 0 if none
  Real jacobian_det;
  Real jacobian_error;

  bool regular() const { return derivative_bound > 0 && abs(jacobian_det) > jacobian_error; }
};

struct ScanOptions {
  int samples = 512;
  /// Consecutive uncertified samples tolerated inside one bracket.
  int max_shrink = 8;
  /// Bisection target, as a fraction of the segment half-length.
  double refine_fraction = 1e-10;
};

struct LineScan {
  long x = 0;
  std::vector<ZeroCertificate> certificates;
  int failed_brackets = 0;
};

/// Scans g on {x} x [y_lo, y_hi] at `options.samples` uniform ordinates plus
/// `seeds` (kept if inside the segment).
LineScan scan_line(const Construction& constr, long x, const Real& y_lo, const Real& y_hi,
                   std::span<const Real> seeds, const ScanOptions& options = {});

/// Certificates on {2^(k-1)} x (-2^(k-1), 0), seeded at the predicted zeros.
std::vector<ZeroCertificate> count_zeros_on_line(const Construction& constr, int k,
                                                 const ScanOptions& options = {});

struct CountReport {
  Real r;
  std::map<long, int> per_line;
  int total = 0;
  /// sum of n_i over the levels i with 2^i <= r (and i <= N).
  int target = 0;
  /// r equals 2^k for some 1 <= k <= N; the target is then asserted.
  bool target_asserted = false;
  bool meets_target = true;
  /// Lines where every built level vanishes identically (x a multiple of
  /// 2^N, including x = 0): zeros there are not isolated for the truncation.
  std::vector<long> degenerate_lines;
  int failed_brackets = 0;
  std::vector<ZeroCertificate> certificates;  // by line x, then y_lo
};

/// Certified zeros in the closed disk of radius r (r <= 2^N).
CountReport count_zeros_ball(const Construction& constr, const Real& r,
                             const ScanOptions& options = {});

struct JacobianH {
  Bounded entry[2][2];  // [[dg/dx, d(s)/dx], [dg/dy, d(s)/dy]]
  Bounded det;
};

/// dh at (x, y) for integer x.
JacobianH jacobian_h(const Construction& constr, long x, const Real& y);

struct MuRow {
  Real r;
  Real certified;  // sum_k a_k mu_u_bound(u_k, r)
  Real budget;     // e^{r^{1+eps}}
  bool certified_ok = false;
  Real sampled_g;        // max |g| over the boundary samples
  Real sampled_h;        // max |h| over the boundary samples
  Real displayed_bound;  // sqrt(e^{r^{1+eps}} + e^{2 pi r})
  Real squared_bound;    // sqrt(e^{2 r^{1+eps}} + e^{2 pi r})
  bool sample_below_certified = false;
  bool sample_below_displayed = false;
  bool sample_below_squared = false;
};

struct MuReport {
  std::vector<MuRow> rows;
  bool certified_ok() const;
};

/// Certified modulus budget and boundary sampling at each radius. With
/// boundary_samples = 0 only the certified side is computed.
MuReport check_mu_bound(const Construction& constr, std::span<const Real> r_values,
                        int boundary_samples = 720);

struct RestrictionReport {
  Real max_deviation;  // max |f - h| over random real samples
  Real max_allowed;    // largest combined rounding bound met
  bool deviation_ok = true;
  int zeros_checked = 0;
  bool zeros_vanish = true;           // |f| within bound at every certificate
  bool zeros_regular = true;          // complex Jacobian nonsingular there
  Real min_det_margin;                // min |det| / its error over certificates
};

/// f restricted to R^2 against h, and f at certified zeros.
RestrictionReport verify_restriction(const Construction& constr, int sample_count,
                                     std::uint64_t seed,
                                     std::span<const ZeroCertificate> certificates);

/// Complex Jacobian of f at a real point by central differences along the
/// real axes (f is holomorphic, so these are the complex derivatives).
struct ComplexJacobian {
  Complex entry[2][2];  // entry[i][j] = d f_{i+1} / d z_{j+1}
  Complex det() const;
};

ComplexJacobian complex_jacobian_fd(const Construction& constr, const Complex& z1,
                                    const Complex& z2, const Real& step);

/// Largest relative Cauchy-Riemann residual |df/dy_j - i df/dx_j| /
/// (|df/dx_j| + |df/dy_j|) over both components and both variables, by
/// central differences with the given step.
Real cauchy_riemann_residual(const Construction& constr, const Complex& z1, const Complex& z2,
                             const Real& step);

struct ExtensionRow {
  Real r;
  Real mu_f;   // sampled max |f| on the sphere of radius r in C^2
  Real mu_h2;  // sampled max |h| on the circle of radius 2r
  Real ratio;
};

/// Measured constant C in mu(f, r) <= C mu(h, 2r).
std::vector<ExtensionRow> extension_constant(const Construction& constr,
                                             std::span<const Real> r_values, int sphere_samples,
                                             int circle_samples, std::uint64_t seed);

nlohmann::json to_json(const ZeroCertificate& cert);
nlohmann::json to_json(const CountReport& report);

}  // namespace harmzero
