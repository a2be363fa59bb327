#include "harmzero/blocks.hpp"

#include <boost/functional/hash.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace harmzero {

Block::Block(int k, BlockCoefficients coeffs) : k_(k), coeffs_(std::move(coeffs)) {
  if (k < 1) throw std::invalid_argument("Block: level must be >= 1");
  for (const auto& [j, bj] : coeffs_.b) {
    if (bj == 0) continue;
    Real b(bj);
    terms_.push_back({j, b, abs(b)});
  }
}

namespace {

// Shared per-point quantities: theta = pi y / 2^k and E = exp(theta).
struct Exponential {
  Real theta;
  Real e;
  Real e2;
};

Exponential exponential(const Block& block, const Real& y) {
  Exponential out;
  out.theta = ldexp2(pi() * y, -block.k());
  out.e = exp(out.theta);
  if (!boost::multiprecision::isfinite(out.e)) {
    throw std::overflow_error("exp(pi y / 2^k) is not representable; raise the precision");
  }
  out.e2 = out.e * out.e;
  return out;
}

// Relative error, in units of u, of b_j * trig * E^j (first order).
Real term_ulps(int j, const Real& abs_theta, int trig_ulps) {
  return Real(3 + trig_ulps) + Real(j) * (Real(2) * abs_theta + Real(2));
}

Real finish_bound(const Real& ulp_weighted, const Real& abs_sum, std::size_t n, const Real& u) {
  Real bound = u * (ulp_weighted + Real(static_cast<long>(n)) * abs_sum);
  return next_above(bound * Real(1.01));
}

}  // namespace

Bounded eval_u(const Block& block, const DyadicRational& x, const Real& y) {
  const Real u = unit_roundoff();
  const Exponential ex = exponential(block, y);
  const Real abs_theta = abs(ex.theta);
  Real sum(0), abs_sum(0), weighted(0);
  Real power = ex.e;  // E^j for the current odd j
  int power_j = 1;
  for (const auto& term : block.terms()) {
    while (power_j < term.j) {
      power *= ex.e2;
      power_j += 2;
    }
    const Real sv = sinpi_dyadic((x * term.j).scaled_down(static_cast<unsigned>(block.k())));
    if (sv == 0) continue;
    const Real t = term.b * sv * power;
    sum += t;
    const Real at = abs(t);
    abs_sum += at;
    weighted += at * term_ulps(term.j, abs_theta, kSinPiUlps);
  }
  return {sum, finish_bound(weighted, abs_sum, block.terms().size(), u)};
}

Bounded eval_u(const Block& block, const Real& x, const Real& y) {
  return eval_u(block, DyadicRational::from_real(x), y);
}

Jet jet_u(const Block& block, const DyadicRational& x, const Real& y) {
  const Real u = unit_roundoff();
  const Exponential ex = exponential(block, y);
  const Real abs_theta = abs(ex.theta);
  const Real freq = ldexp2(pi(), -block.k());  // pi / 2^k
  Real v(0), v_abs(0), v_w(0);
  Real dx(0), dx_abs(0), dx_w(0);
  Real dy(0), dy_abs(0), dy_w(0);
  Real power = ex.e;
  int power_j = 1;
  for (const auto& term : block.terms()) {
    while (power_j < term.j) {
      power *= ex.e2;
      power_j += 2;
    }
    const DyadicRational phase = (x * term.j).scaled_down(static_cast<unsigned>(block.k()));
    const Real s = sinpi_dyadic(phase);
    const Real c = cospi_dyadic(phase);
    const Real amp = term.b * power;
    const Real w = term_ulps(term.j, abs_theta, kSinPiUlps);
    const Real wd = w + Real(3);  // frequency factor: pi rounding, scaling, product
    const Real fj = freq * Real(term.j);
    if (s != 0) {
      const Real t = amp * s;
      v += t;
      v_abs += abs(t);
      v_w += abs(t) * w;
      const Real td = t * fj;
      dy += td;
      dy_abs += abs(td);
      dy_w += abs(td) * wd;
    }
    if (c != 0) {
      const Real td = amp * c * fj;
      dx += td;
      dx_abs += abs(td);
      dx_w += abs(td) * wd;
    }
  }
  const std::size_t n = block.terms().size();
  return {{v, finish_bound(v_w, v_abs, n, u)},
          {dx, finish_bound(dx_w, dx_abs, n, u)},
          {dy, finish_bound(dy_w, dy_abs, n, u)}};
}

std::pair<Bounded, Bounded> grad_u(const Block& block, const Real& x, const Real& y) {
  Jet j = jet_u(block, DyadicRational::from_real(x), y);
  return {std::move(j.dx), std::move(j.dy)};
}

namespace {

Real series_bound(const Block& block, const Real& r, bool with_frequency) {
  if (r < 0) throw std::invalid_argument("norm bound: radius must be >= 0");
  const Real u = unit_roundoff();
  const Real theta = ldexp2(pi() * r, -block.k());
  const Real freq = ldexp2(pi(), -block.k());
  Real total(0);
  for (const auto& term : block.terms()) {
    Real t = term.abs_b * exp(theta * Real(term.j));
    if (with_frequency) t *= std::max(Real(1), freq * Real(term.j));
    // Inflate each term past its own rounding error so the sum stays an
    // upper bound.
    t *= Real(1) + u * (Real(32) + Real(4 * term.j) * (theta + Real(1)));
    total += t;
  }
  total *= Real(1) + u * Real(static_cast<long>(block.terms().size()) + 4);
  return next_above(total);
}

}  // namespace

Real c1_norm_bound(const Block& block, const Real& r) { return series_bound(block, r, true); }

Real mu_u_bound(const Block& block, const Real& r) { return series_bound(block, r, false); }

XiPoint xi_point(int k, int j) {
  if (k < 1 || j < 2) throw std::invalid_argument("xi_point: need k >= 1 and j >= 2");
  const Real half = ldexp2(Real(1), k - 1);
  const Real y = half / pi() * log(Real(j - 1) / Real(j));
  return {k, j, half, y};
}

Real lipschitz_bound(const Block& block, const Real& y_max) {
  const Real theta = ldexp2(pi() * y_max, -block.k());
  const Real freq = ldexp2(pi(), -block.k());
  Real total(0);
  for (const auto& term : block.terms()) {
    total += term.abs_b * freq * Real(term.j) * exp(theta * Real(term.j));
  }
  // sqrt(dx^2 + dy^2) <= sqrt(2) max(|dx|, |dy|)
  return next_above(total * sqrt(Real(2)) * (Real(1) + unit_roundoff() * Real(64)));
}

namespace {

struct EdgeKey {
  int i;
  int j;
  bool vertical;
  bool operator==(const EdgeKey&) const = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& e) const {
    std::size_t seed = 0;
    boost::hash_combine(seed, e.i);
    boost::hash_combine(seed, e.j);
    boost::hash_combine(seed, e.vertical);
    return seed;
  }
};

}  // namespace

std::vector<Polyline> trace_level_set(const std::function<Real(const Real&, const Real&)>& field,
                                      const BoundingBox& box, int resolution) {
  if (resolution < 2) throw std::invalid_argument("trace: resolution must be >= 2");
  if (!(box.x1 > box.x0) || !(box.y1 > box.y0)) {
    throw std::invalid_argument("trace: bounding box is empty or degenerate");
  }
  const int n = resolution;
  const Real x0(box.x0), y0(box.y0);
  const Real hx = (Real(box.x1) - x0) / Real(n);
  const Real hy = (Real(box.y1) - y0) / Real(n);
  auto vx = [&](int i) { return x0 + hx * Real(i); };
  auto vy = [&](int j) { return y0 + hy * Real(j); };

  std::vector<Real> values(static_cast<std::size_t>((n + 1) * (n + 1)));
  auto at = [&](int i, int j) -> Real& { return values[static_cast<std::size_t>(j * (n + 1) + i)]; };
  for (int j = 0; j <= n; ++j) {
    const Real y = vy(j);
    for (int i = 0; i <= n; ++i) at(i, j) = field(vx(i), y);
  }

  auto crossing = [&](const EdgeKey& e) -> std::pair<double, double> {
    const int i1 = e.vertical ? e.i : e.i + 1;
    const int j1 = e.vertical ? e.j + 1 : e.j;
    const Real& a = at(e.i, e.j);
    const Real& b = at(i1, j1);
    const Real t = a / (a - b);
    const Real x = vx(e.i) + (e.vertical ? Real(0) : t * hx);
    const Real y = vy(e.j) + (e.vertical ? t * hy : Real(0));
    return {x.convert_to<double>(), y.convert_to<double>()};
  };

  // Segments as pairs of edge keys; adjacency from each edge to its segments.
  std::vector<std::pair<EdgeKey, EdgeKey>> segments;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int idx = (at(i, j) > 0 ? 1 : 0) | (at(i + 1, j) > 0 ? 2 : 0) |
                      (at(i + 1, j + 1) > 0 ? 4 : 0) | (at(i, j + 1) > 0 ? 8 : 0);
      const EdgeKey bottom{i, j, false}, top{i, j + 1, false};
      const EdgeKey left{i, j, true}, right{i + 1, j, true};
      auto add = [&](const EdgeKey& a, const EdgeKey& b) { segments.emplace_back(a, b); };
      switch (idx) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 3: case 12: add(left, right); break;
        case 4: case 11: add(right, top); break;
        case 6: case 9: add(bottom, top); break;
        case 7: case 8: add(left, top); break;
        case 5:
        case 10: {
          const bool centre = field(vx(i) + hx / 2, vy(j) + hy / 2) > 0;
          // Corners bl and tr share a sign in case 5, br and tl in case 10.
          const bool diagonal_bl_tr = (idx == 5) == centre;
          if (diagonal_bl_tr) {
            add(bottom, right);
            add(left, top);
          } else {
            add(left, bottom);
            add(right, top);
          }
          break;
        }
        default: break;
      }
    }
  }

  std::unordered_map<EdgeKey, std::vector<std::size_t>, EdgeKeyHash> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge[segments[s].first].push_back(s);
    by_edge[segments[s].second].push_back(s);
  }

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> out;
  auto walk = [&](std::size_t start, const EdgeKey& from) {
    Polyline line;
    line.push_back(crossing(from));
    EdgeKey cur = from;
    std::size_t seg = start;
    while (true) {
      used[seg] = true;
      const EdgeKey next = segments[seg].first == cur ? segments[seg].second : segments[seg].first;
      line.push_back(crossing(next));
      cur = next;
      std::size_t follow = segments.size();
      for (std::size_t cand : by_edge[cur]) {
        if (!used[cand]) {
          follow = cand;
          break;
        }
      }
      if (follow == segments.size()) break;
      seg = follow;
    }
    out.push_back(std::move(line));
  };

  // Open chains first (start at edges touched by a single segment), then loops.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (const EdgeKey& end : {segments[s].first, segments[s].second}) {
      if (by_edge[end].size() == 1) {
        walk(s, end);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) walk(s, segments[s].first);
  }
  return out;
}

std::vector<Polyline> trace_zero_set(const Block& block, const BoundingBox& box, int resolution) {
  return trace_level_set([&](const Real& x, const Real& y) { return eval_u(block, x, y).value; },
                         box, resolution);
}

}  // namespace harmzero
