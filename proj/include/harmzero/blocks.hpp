#pragma once

// Level-k harmonic building blocks
//
//   u_k(x, y) = sum_{j odd} b_{k,j} sin(pi j x / 2^k) exp(pi j y / 2^k)
//
// Phases j x / 2^k are reduced exactly (x is treated as the dyadic rational
// it is), so u_k vanishes bit-exactly on every line x = 2^l, l >= k.

#include "harmzero/dyadic.hpp"
#include "harmzero/exactpoly.hpp"
#include "harmzero/real.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace harmzero {

class Block {
 public:
  Block(int k, BlockCoefficients coeffs);

  int k() const { return k_; }
  int c() const { return coeffs_.c; }
  const BlockCoefficients& coeffs() const { return coeffs_; }

  struct Term {
    int j;
    Real b;      // b_{k,j} rounded to the working precision
    Real abs_b;  // |b_{k,j}|
  };
  /// Odd-j terms with nonzero coefficient, j ascending.
  const std::vector<Term>& terms() const { return terms_; }

 private:
  int k_;
  BlockCoefficients coeffs_;
  std::vector<Term> terms_;
};

/// Value and gradient of a block at one point, each with an error bound.
struct Jet {
  Bounded value;
  Bounded dx;
  Bounded dy;
};

Bounded eval_u(const Block& block, const DyadicRational& x, const Real& y);
/// Real abscissae are converted to dyadic rationals exactly.
Bounded eval_u(const Block& block, const Real& x, const Real& y);

Jet jet_u(const Block& block, const DyadicRational& x, const Real& y);

/// (du/dx, du/dy).
std::pair<Bounded, Bounded> grad_u(const Block& block, const Real& x, const Real& y);

/// Upper bound on max(|u|, |du/dx|, |du/dy|) over the closed disk of radius r:
/// sum_j |b_j| max(1, pi j / 2^k) exp(pi j r / 2^k), rounded upward.
Real c1_norm_bound(const Block& block, const Real& r);

/// Upper bound on max |u| over the disk of radius r:
/// sum_j |b_j| exp(pi j r / 2^k), rounded upward.
Real mu_u_bound(const Block& block, const Real& r);

/// Predicted zero of u_k on x = 2^(k-1):
/// (2^(k-1), (2^(k-1) / pi) log(1 - 1/j)).
struct XiPoint {
  int k;
  int j;
  Real x;
  Real y;
};

XiPoint xi_point(int k, int j);

struct BoundingBox {
  double x0;
  double y0;
  double x1;
  double y1;
};

using Polyline = std::vector<std::pair<double, double>>;

/// Marching squares on the vertex lattice of `resolution` x `resolution`
/// cells over `box`. `field` returns a signed value; values <= 0 count as
/// outside. Saddle cells are resolved by sampling the cell centre.
/// Throws std::invalid_argument for a degenerate box or resolution < 2.
std::vector<Polyline> trace_level_set(const std::function<Real(const Real&, const Real&)>& field,
                                      const BoundingBox& box, int resolution);

/// Zero set of u_k inside `box`.
std::vector<Polyline> trace_zero_set(const Block& block, const BoundingBox& box, int resolution);

/// Bound on |grad u_k| over the horizontal strip y <= y_max, used to check
/// traced vertices: |u(v)| <= lipschitz * cell diagonal.
Real lipschitz_bound(const Block& block, const Real& y_max);

}  // namespace harmzero
