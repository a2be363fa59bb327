#include "harmzero/certify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace harmzero {

namespace {

struct Bracket {
  Real lo;
  Real hi;
  int sign_lo;
  int sign_hi;
};

ZeroCertificate refine(const Construction& constr, long x, Bracket b, const Real& target_width) {
  const DyadicRational dx(x);
  // Certified phase: move an endpoint only when the midpoint sign is certified.
  while (b.hi - b.lo > target_width) {
    const Real mid = (b.lo + b.hi) / 2;
    const int s = eval_g(constr, dx, mid).certified_sign();
    if (s == 0) break;
    if (s == b.sign_lo) {
      b.lo = mid;
    } else {
      b.hi = mid;
    }
  }
  // Below the certification floor, keep bisecting the truncated g by the
  // sign of its computed value to locate its root.
  Real lo = b.lo, hi = b.hi;
  while (hi - lo > target_width) {
    const Real mid = (lo + hi) / 2;
    const Real v = eval_g(constr, dx, mid).value;
    if (v == 0) {
      lo = hi = mid;
      break;
    }
    if ((v > 0 ? 1 : -1) == b.sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  ZeroCertificate cert;
  cert.line_x = x;
  cert.y_lo = b.lo;
  cert.y_hi = b.hi;
  cert.sign_lo = b.sign_lo;
  cert.sign_hi = b.sign_hi;
  cert.refined_root = (lo + hi) / 2;
  cert.root_halfwidth = (hi - lo) / 2;
  const JacobianH jac = jacobian_h(constr, x, cert.refined_root);
  const Bounded& dgdy = jac.entry[1][0];
  cert.dg_dy = dgdy.value;
  cert.derivative_bound = std::max(Real(0), abs(dgdy.value) - dgdy.error);
  cert.jacobian_det = jac.det.value;
  cert.jacobian_error = jac.det.error;
  return cert;
}

}  // namespace

LineScan scan_line(const Construction& constr, long x, const Real& y_lo, const Real& y_hi,
                   std::span<const Real> seeds, const ScanOptions& options) {
  if (!(y_hi > y_lo)) throw std::invalid_argument("scan_line: empty segment");
  if (options.samples < 2) throw std::invalid_argument("scan_line: need at least 2 samples");

  std::vector<Real> ys;
  ys.reserve(static_cast<std::size_t>(options.samples) + 1 + seeds.size());
  const Real step = (y_hi - y_lo) / Real(options.samples);
  for (int i = 0; i < options.samples; ++i) ys.push_back(y_lo + step * Real(i));
  ys.push_back(y_hi);
  for (const Real& s : seeds) {
    if (s >= y_lo && s <= y_hi) ys.push_back(s);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  const DyadicRational dx(x);
  std::vector<int> signs;
  signs.reserve(ys.size());
  for (const Real& y : ys) signs.push_back(eval_g(constr, dx, y).certified_sign());

  LineScan out;
  out.x = x;
  const Real target_width = (y_hi - y_lo) / 2 * Real(options.refine_fraction);
  long last = -1;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (signs[i] == 0) continue;
    if (last >= 0 && signs[i] != signs[static_cast<std::size_t>(last)]) {
      const long skipped = static_cast<long>(i) - last - 1;
      if (skipped <= options.max_shrink) {
        out.certificates.push_back(refine(
            constr, x,
            {ys[static_cast<std::size_t>(last)], ys[i], signs[static_cast<std::size_t>(last)], signs[i]},
            target_width));
      } else {
        ++out.failed_brackets;
      }
    }
    last = static_cast<long>(i);
  }
  return out;
}

std::vector<ZeroCertificate> count_zeros_on_line(const Construction& constr, int k,
                                                 const ScanOptions& options) {
  if (k < 1 || k > constr.depth) throw std::invalid_argument("count_zeros_on_line: level out of range");
  const long x = 1L << (k - 1);
  const std::vector<Real> seeds = margin_test_ordinates(k, constr.level(k).c);
  LineScan scan = scan_line(constr, x, -ldexp2(Real(1), k - 1), Real(0), seeds, options);
  if (scan.failed_brackets > 0) {
    throw PrecisionError("sign change on x = 2^(k-1) could not be bracketed", k);
  }
  return std::move(scan.certificates);
}

CountReport count_zeros_ball(const Construction& constr, const Real& r, const ScanOptions& options) {
  if (r < 0) throw std::invalid_argument("count_zeros_ball: radius must be >= 0");
  if (r > ldexp2(Real(1), constr.depth)) {
    throw DomainError("count_zeros_ball: radius exceeds 2^N");
  }
  CountReport report;
  report.r = r;
  for (int k = 1; k <= constr.depth && ldexp2(Real(1), k) <= r; ++k) {
    report.target += constr.n[static_cast<std::size_t>(k - 1)];
    report.target_asserted = ldexp2(Real(1), k) == r;
  }

  const long period = 1L << constr.depth;
  const long reach = static_cast<long>(floor(r).convert_to<double>());
  for (long x = -reach; x <= reach; ++x) {
    if (x % period == 0) {
      report.degenerate_lines.push_back(x);
      continue;
    }
    const Real half = sqrt(r * r - Real(x) * Real(x));
    if (!(half > 0)) continue;

    std::vector<Real> seeds;
    const long ax = x < 0 ? -x : x;
    if ((ax & (ax - 1)) == 0) {
      const int k = static_cast<int>(std::countr_zero(static_cast<unsigned long>(ax))) + 1;
      if (k <= constr.depth) seeds = margin_test_ordinates(k, constr.level(k).c);
    }
    LineScan scan = scan_line(constr, x, -half, half, seeds, options);
    report.per_line[x] = static_cast<int>(scan.certificates.size());
    report.total += static_cast<int>(scan.certificates.size());
    report.failed_brackets += scan.failed_brackets;
    for (auto& c : scan.certificates) report.certificates.push_back(std::move(c));
  }
  std::stable_sort(report.certificates.begin(), report.certificates.end(),
                   [](const ZeroCertificate& a, const ZeroCertificate& b) {
                     return a.line_x != b.line_x ? a.line_x < b.line_x : a.y_lo < b.y_lo;
                   });
  report.meets_target = report.total >= report.target;
  return report;
}

JacobianH jacobian_h(const Construction& constr, long x, const Real& y) {
  const DyadicRational dx(x);
  const Jet jet = jet_g(constr, dx, y);
  const Real u = unit_roundoff();
  const Real arg = pi() * y;
  const Real e = pi() * exp(arg);
  const Real rel = u * (abs(arg) * 2 + Real(kSinPiUlps + 5));
  const Real c = cospi_dyadic(dx);
  const Real s = sinpi_dyadic(dx);

  JacobianH out;
  out.entry[0][0] = jet.dx;
  out.entry[1][0] = jet.dy;
  const Real j12 = c * e;
  const Real j22 = s * e;
  out.entry[0][1] = {j12, next_above(abs(j12) * rel)};
  out.entry[1][1] = {j22, next_above(abs(j22) * rel)};

  const Bounded& a = out.entry[0][0];
  const Bounded& b = out.entry[0][1];
  const Bounded& cc = out.entry[1][0];
  const Bounded& d = out.entry[1][1];
  const Real p1 = a.value * d.value;
  const Real p2 = b.value * cc.value;
  const Real err = abs(a.value) * d.error + abs(d.value) * a.error + a.error * d.error +
                   abs(b.value) * cc.error + abs(cc.value) * b.error + b.error * cc.error +
                   u * 3 * (abs(p1) + abs(p2));
  out.det = {p1 - p2, next_above(err)};
  return out;
}

bool MuReport::certified_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const MuRow& r) { return r.certified_ok; });
}

MuReport check_mu_bound(const Construction& constr, std::span<const Real> r_values,
                        int boundary_samples) {
  MuReport report;
  const Real limit = ldexp2(Real(1), constr.depth);
  for (const Real& r : r_values) {
    if (r < 0 || r > limit) throw DomainError("check_mu_bound: radius outside [0, 2^N]");
    MuRow row;
    row.r = r;
    row.certified = Real(0);
    for (const auto& l : constr.levels) row.certified += l.a * mu_u_bound(l.block, r);
    row.certified = next_above(row.certified * (Real(1) + unit_roundoff() * 8));
    const Real growth = r == 0 ? Real(0) : pow(r, Real(1) + constr.epsilon);
    row.budget = exp(growth);
    row.certified_ok = row.certified <= row.budget;

    row.displayed_bound = sqrt(exp(growth) + exp(2 * pi() * r));
    row.squared_bound = sqrt(exp(2 * growth) + exp(2 * pi() * r));
    row.sampled_g = Real(0);
    row.sampled_h = Real(0);
    if (boundary_samples > 0) {
      const int count = r == 0 ? 1 : boundary_samples;
      for (int i = 0; i < count; ++i) {
        const Real theta = 2 * pi() * Real(i) / Real(count);
        const Real x = r * cos(theta);
        const Real y = r * sin(theta);
        const HValue h = eval_h(constr, x, y);
        row.sampled_g = std::max(row.sampled_g, abs(h.g.value));
        row.sampled_h = std::max(row.sampled_h, hypot(h.g.value, h.s.value));
      }
    }
    row.sample_below_certified = row.sampled_g <= row.certified;
    row.sample_below_displayed = row.sampled_h <= row.displayed_bound;
    row.sample_below_squared = row.sampled_h <= row.squared_bound;
    report.rows.push_back(std::move(row));
  }
  return report;
}

Complex ComplexJacobian::det() const {
  return entry[0][0] * entry[1][1] - entry[0][1] * entry[1][0];
}

namespace {

Complex scale(const Complex& z, const Real& s) { return {z.re * s, z.im * s}; }

std::pair<Complex, Complex> f_pair(const Construction& constr, const Complex& z1, const Complex& z2) {
  FValue f = eval_f(constr, z1, z2);
  return {std::move(f.f1), std::move(f.f2)};
}

// Central difference of (f1, f2) along `dir` in variable `var` (0 or 1).
std::pair<Complex, Complex> directional(const Construction& constr, const Complex& z1,
                                        const Complex& z2, int var, const Complex& dir,
                                        const Real& step) {
  const Complex delta = scale(dir, step);
  Complex a1 = z1, a2 = z2, b1 = z1, b2 = z2;
  if (var == 0) {
    a1 = z1 + delta;
    b1 = z1 - delta;
  } else {
    a2 = z2 + delta;
    b2 = z2 - delta;
  }
  const auto fa = f_pair(constr, a1, a2);
  const auto fb = f_pair(constr, b1, b2);
  const Real inv = Real(1) / (2 * step);
  return {scale(fa.first - fb.first, inv), scale(fa.second - fb.second, inv)};
}

}  // namespace

ComplexJacobian complex_jacobian_fd(const Construction& constr, const Complex& z1,
                                    const Complex& z2, const Real& step) {
  ComplexJacobian out;
  for (int var = 0; var < 2; ++var) {
    const auto d = directional(constr, z1, z2, var, Complex{Real(1), Real(0)}, step);
    out.entry[0][var] = d.first;
    out.entry[1][var] = d.second;
  }
  return out;
}

Real cauchy_riemann_residual(const Construction& constr, const Complex& z1, const Complex& z2,
                             const Real& step) {
  Real worst(0);
  for (int var = 0; var < 2; ++var) {
    const auto dre = directional(constr, z1, z2, var, Complex{Real(1), Real(0)}, step);
    const auto dim = directional(constr, z1, z2, var, Complex{Real(0), Real(1)}, step);
    for (int comp = 0; comp < 2; ++comp) {
      const Complex& dx = comp == 0 ? dre.first : dre.second;
      const Complex& dy = comp == 0 ? dim.first : dim.second;
      // Holomorphic: df/dy = i df/dx.
      const Complex i_dx{-dx.im, dx.re};
      const Real scale_v = abs(dx) + abs(dy);
      if (scale_v == 0) continue;
      worst = std::max(worst, abs(dy - i_dx) / scale_v);
    }
  }
  return worst;
}

RestrictionReport verify_restriction(const Construction& constr, int sample_count,
                                     std::uint64_t seed,
                                     std::span<const ZeroCertificate> certificates) {
  RestrictionReport report;
  report.max_deviation = Real(0);
  report.max_allowed = Real(0);
  const Real tail = unbuilt_tail(constr);
  const double radius = std::ldexp(1.0, constr.depth);
  UniformSampler rng(seed);
  int taken = 0;
  while (taken < sample_count) {
    const double x = rng.next(-radius, radius);
    const double y = rng.next(-radius, radius);
    if (x * x + y * y > radius * radius) continue;
    ++taken;
    const HValue h = eval_h(constr, Real(x), Real(y));
    const FValue f = eval_f(constr, {Real(x), Real(0)}, {Real(y), Real(0)});
    // Both sides are the same truncation; only rounding separates them.
    const Real dev1 = abs(f.f1 - Complex{h.g.value, Real(0)});
    const Real dev2 = abs(f.f2 - Complex{h.s.value, Real(0)});
    const Real allowed1 = f.err1 + std::max(Real(0), h.g.error - tail) + unit_roundoff() * abs(h.g.value);
    const Real allowed2 = f.err2 + h.s.error;
    report.max_deviation = std::max({report.max_deviation, dev1, dev2});
    report.max_allowed = std::max({report.max_allowed, allowed1, allowed2});
    if (dev1 > allowed1 || dev2 > allowed2) report.deviation_ok = false;
  }

  bool first = true;
  for (const ZeroCertificate& cert : certificates) {
    ++report.zeros_checked;
    const Complex z1{Real(cert.line_x), Real(0)};
    const Complex z2{cert.refined_root, Real(0)};
    const FValue f = eval_f(constr, z1, z2);
    const Real slack = (abs(cert.dg_dy) * 2 + cert.derivative_bound) * cert.root_halfwidth * 2;
    if (abs(f.f1) > f.err1 + tail + slack || abs(f.f2) > f.err2) report.zeros_vanish = false;

    const ComplexJacobian jac = complex_jacobian_fd(constr, z1, z2, Real(1e-5));
    const Complex det_fd = jac.det();
    const JacobianH real_jac = jacobian_h(constr, cert.line_x, cert.refined_root);
    const Real gap = abs(det_fd - Complex{real_jac.det.value, Real(0)});
    const Real margin = abs(det_fd) / std::max(gap + real_jac.det.error, Real(1e-300));
    if (first || margin < report.min_det_margin) report.min_det_margin = margin;
    first = false;
    if (!(gap <= Real(1e-6) * abs(real_jac.det.value)) ||
        !(abs(real_jac.det.value) > real_jac.det.error)) {
      report.zeros_regular = false;
    }
  }
  if (first) report.min_det_margin = Real(0);
  return report;
}

std::vector<ExtensionRow> extension_constant(const Construction& constr,
                                             std::span<const Real> r_values, int sphere_samples,
                                             int circle_samples, std::uint64_t seed) {
  std::vector<ExtensionRow> rows;
  UniformSampler rng(seed);
  for (const Real& r : r_values) {
    ExtensionRow row;
    row.r = r;
    row.mu_f = Real(0);
    for (int i = 0; i < sphere_samples; ++i) {
      // Box-Muller normals, normalized onto the sphere of radius r in R^4.
      double g[4];
      for (int p = 0; p < 2; ++p) {
        const double u1 = 1.0 - rng.next();
        const double u2 = rng.next();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        g[2 * p] = rad * std::cos(2.0 * std::numbers::pi * u2);
        g[2 * p + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
      }
      const double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
      const Real s = r / Real(norm);
      const FValue f = eval_f(constr, {Real(g[0]) * s, Real(g[1]) * s}, {Real(g[2]) * s, Real(g[3]) * s});
      row.mu_f = std::max(row.mu_f, hypot(abs(f.f1), abs(f.f2)));
    }
    row.mu_h2 = Real(0);
    const Real r2 = 2 * r;
    for (int i = 0; i < circle_samples; ++i) {
      const Real theta = 2 * pi() * Real(i) / Real(circle_samples);
      const HValue h = eval_h(constr, r2 * cos(theta), r2 * sin(theta));
      row.mu_h2 = std::max(row.mu_h2, hypot(h.g.value, h.s.value));
    }
    row.ratio = row.mu_f / row.mu_h2;
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const ZeroCertificate& cert) {
  return {{"line_x", cert.line_x},
          {"y_lo", to_decimal(cert.y_lo)},
          {"y_hi", to_decimal(cert.y_hi)},
          {"sign_lo", cert.sign_lo},
          {"sign_hi", cert.sign_hi},
          {"refined_root", to_decimal(cert.refined_root)},
          {"derivative_bound", to_decimal(cert.derivative_bound)},
          {"jacobian_det", to_decimal(cert.jacobian_det)},
          {"jacobian_error", to_decimal(cert.jacobian_error)},
          {"regular", cert.regular()}};
}

nlohmann::json to_json(const CountReport& report) {
  nlohmann::json per_line = nlohmann::json::array();
  for (const auto& [x, count] : report.per_line) per_line.push_back({{"x", x}, {"count", count}});
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : report.certificates) certs.push_back(to_json(c));
  return {{"r", to_decimal(report.r)},
          {"total", report.total},
          {"target", report.target},
          {"target_asserted", report.target_asserted},
          {"meets_target", report.meets_target},
          {"per_line", std::move(per_line)},
          {"degenerate_lines", report.degenerate_lines},
          {"failed_brackets", report.failed_brackets},
          {"certificates", std::move(certs)}};
}

}  // namespace harmzero
