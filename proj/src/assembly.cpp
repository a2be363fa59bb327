#include "harmzero/assembly.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace harmzero {

Real Construction::min_margin() const {
  if (levels.empty()) throw std::logic_error("construction has no levels");
  Real out = levels.front().m;
  for (const auto& l : levels) out = std::min(out, l.m);
  return out;
}

CapMinimum cap_minimum(int kappa, const Real& epsilon) {
  if (kappa < 1 || !(epsilon > 0)) throw std::invalid_argument("cap_minimum: need kappa >= 1, eps > 0");
  const Real slope = pi() * Real(kappa) / 2;
  const Real r_star = pow(slope / (Real(1) + epsilon), Real(1) / epsilon);
  const Real value = -r_star * slope * (epsilon / (Real(1) + epsilon));
  return {r_star, value};
}

Real compute_cap_A(int /*k*/, int c, const Real& epsilon) {
  if (c < 2) throw std::invalid_argument("compute_cap_A: c must be >= 2");
  const int kappa = 2 * c - 1;
  const CapMinimum m = cap_minimum(kappa, epsilon);
  Real cap = ldexp2(exp(m.value), -(kappa + 3 * c - 2));
  // The exponential and the minimum carry relative error ~ |M| u; shave a
  // generous multiple so the guarantee survives rounding.
  cap *= Real(1) - unit_roundoff() * (abs(m.value) * 8 + Real(1 << 10));
  return next_below(cap);
}

Real amplitude_load(const Real& a, const Block& block) {
  const Real radius = ldexp2(Real(1), block.k());
  return a * ldexp2(c1_norm_bound(block, radius), block.k());
}

Real choose_amplitude(int k, std::span<const Level> prior, const Block& block, const Real& cap) {
  if (!(cap > 0)) throw PrecisionError("modulus cap A is not positive", k);
  if (prior.empty()) return cap;
  Real min_m = prior.front().m;
  for (const auto& l : prior) min_m = std::min(min_m, l.m);

  const Real radius = ldexp2(Real(1), k);
  Real a = min_m / ldexp2(c1_norm_bound(block, radius), k);
  // Settle on the largest representable a that passes the audit as computed.
  while (a > 0 && amplitude_load(a, block) > min_m) a = next_below(a);
  for (int step = 0; step < 64; ++step) {
    const Real up = next_above(a);
    if (amplitude_load(up, block) > min_m) break;
    a = up;
  }
  a = std::min(a, cap);
  if (!(a > 0)) throw PrecisionError("amplitude underflows at the working precision", k);
  return a;
}

std::vector<Real> margin_test_ordinates(int k, int c) {
  std::vector<Real> ys;
  ys.push_back(-ldexp2(Real(1), k - 1));
  for (int j = 2; j < c; ++j) ys.push_back((xi_point(k, j).y + xi_point(k, j + 1).y) / 2);
  ys.push_back(Real(0));
  return ys;
}

Real choose_margin(const Level& level) {
  const DyadicRational line(BigInt(1) << (level.k - 1), 0);
  Real smallest;
  bool first = true;
  int previous_sign = 0;
  for (const Real& y : margin_test_ordinates(level.k, level.c)) {
    const Bounded v = eval_u(level.block, line, y);
    const int sign = v.certified_sign();
    if (sign == 0 || sign == previous_sign) {
      throw PrecisionError("sign pattern on x = 2^(k-1) not certified", level.k);
    }
    previous_sign = sign;
    const Real margin = level.a * (abs(v.value) - v.error);
    if (first || margin < smallest) smallest = margin;
    first = false;
  }
  const Real m = ldexp2(smallest, -1);
  if (!(m > 0)) throw PrecisionError("margin is not positive after error subtraction", level.k);
  return m;
}

Real choose_margin(int k, std::span<const Level> partial) {
  if (k < 1 || static_cast<std::size_t>(k) > partial.size()) {
    throw std::invalid_argument("choose_margin: level not assembled");
  }
  return choose_margin(partial[static_cast<std::size_t>(k - 1)]);
}

Construction build_construction(const std::vector<int>& n, const Real& epsilon, int depth,
                                unsigned precision) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (static_cast<std::size_t>(depth) > n.size()) {
    throw std::invalid_argument("depth " + std::to_string(depth) + " exceeds the length of n (" +
                                std::to_string(n.size()) + ")");
  }
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  if (precision < 53) throw std::invalid_argument("precision must be >= 53 bits");
  for (int v : n) {
    if (v < 1 || v + 1 > kMaxC) throw std::invalid_argument("n entries must lie in [1, 63]");
  }

  // Capture epsilon before the precision change re-rounds new values.
  const std::string eps_text = to_decimal(epsilon);
  set_working_precision(precision);

  Construction out;
  out.n = n;
  out.epsilon = from_decimal(eps_text);
  out.depth = depth;
  out.precision = precision;
  out.levels.reserve(static_cast<std::size_t>(depth));
  for (int k = 1; k <= depth; ++k) {
    const int c = n[static_cast<std::size_t>(k - 1)] + 1;
    Block block(k, extract_b(c));
    Real cap = compute_cap_A(k, c, out.epsilon);
    Real a = choose_amplitude(k, out.levels, block, cap);
    Level level{k, c, std::move(cap), std::move(a), Real(0), std::move(block)};
    level.m = choose_margin(level);
    out.levels.push_back(std::move(level));
  }
  return out;
}

Construction build_construction_adaptive(const std::vector<int>& n, const Real& epsilon,
                                         int depth, unsigned precision, unsigned max_precision,
                                         std::vector<unsigned>* attempts) {
  const std::string eps_text = to_decimal(epsilon);
  for (unsigned p = precision;; p *= 2) {
    if (attempts) attempts->push_back(p);
    try {
      return build_construction(n, from_decimal(eps_text), depth, p);
    } catch (const PrecisionError&) {
      if (p * 2 > max_precision) throw;
    }
  }
}

Real unbuilt_tail(const Construction& constr) {
  return next_above(ldexp2(constr.min_margin(), -constr.depth));
}

TailBound tail_bound(const Construction& constr, int k) {
  if (k < 1 || k > constr.depth) throw std::invalid_argument("tail_bound: level out of range");
  TailBound out;
  out.k = k;
  out.depth = constr.depth;
  out.built_part = Real(0);
  const Real radius = ldexp2(Real(1), k);
  for (int i = k + 1; i <= constr.depth; ++i) {
    const Level& l = constr.level(i);
    out.built_part = next_above(out.built_part + next_above(l.a * c1_norm_bound(l.block, radius)));
  }
  out.unbuilt_part = unbuilt_tail(constr);
  out.value = next_above(out.built_part + out.unbuilt_part);
  return out;
}

std::vector<AuditRow> audit_construction(const Construction& constr) {
  std::vector<AuditRow> rows;
  for (const Level& l : constr.levels) {
    AuditRow row;
    row.k = l.k;
    row.cap_recomputed = compute_cap_A(l.k, l.c, constr.epsilon);
    row.cap_ok = l.a > 0 && l.a <= l.A && l.A <= row.cap_recomputed;
    row.load = amplitude_load(l.a, l.block);
    row.prior_min = Real(0);
    row.load_ok = true;
    for (int i = 1; i < l.k; ++i) {
      const Real& m = constr.level(i).m;
      row.prior_min = i == 1 ? m : std::min(row.prior_min, m);
    }
    if (l.k > 1) row.load_ok = row.load <= row.prior_min;
    row.tail = tail_bound(constr, l.k).value;
    row.tail_ok = row.tail < l.m;
    try {
      row.margin_ok = l.m > 0 && l.m <= choose_margin(l);
    } catch (const PrecisionError&) {
      row.margin_ok = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void require_in_domain(const Construction& constr, const Real& x, const Real& y) {
  const Real limit = ldexp2(Real(1), 2 * (constr.depth + 1));
  if (x * x + y * y > limit) {
    throw DomainError("point lies outside B_{2^(N+1)}, where the truncation tail is not controlled");
  }
}

namespace {

// Combines per-level results a_k * v_k into one bounded value.
class LevelSum {
 public:
  void add(const Real& a, const Bounded& v) {
    const Real t = a * v.value;
    sum_ += t;
    abs_ += abs(t);
    err_ += a * v.error;
    ++count_;
  }
  Bounded finish(const Real& tail) const {
    const Real u = unit_roundoff();
    Real err = err_ * (Real(1) + u * 4) + u * Real(count_ + 2) * abs_ + tail;
    return {sum_, next_above(err)};
  }

 private:
  Real sum_{0}, abs_{0}, err_{0};
  long count_ = 0;
};

}  // namespace

Bounded eval_g(const Construction& constr, const DyadicRational& x, const Real& y) {
  require_in_domain(constr, x.to_real(), y);
  LevelSum acc;
  for (const auto& l : constr.levels) acc.add(l.a, eval_u(l.block, x, y));
  return acc.finish(unbuilt_tail(constr));
}

Bounded eval_g(const Construction& constr, const Real& x, const Real& y) {
  return eval_g(constr, DyadicRational::from_real(x), y);
}

Jet jet_g(const Construction& constr, const DyadicRational& x, const Real& y) {
  require_in_domain(constr, x.to_real(), y);
  LevelSum v, dx, dy;
  for (const auto& l : constr.levels) {
    const Jet j = jet_u(l.block, x, y);
    v.add(l.a, j.value);
    dx.add(l.a, j.dx);
    dy.add(l.a, j.dy);
  }
  const Real tail = unbuilt_tail(constr);
  return {v.finish(tail), dx.finish(tail), dy.finish(tail)};
}

Bounded eval_second(const DyadicRational& x, const Real& y) {
  const Real s = sinpi_dyadic(x);
  if (s == 0) return {Real(0), Real(0)};
  const Real arg = pi() * y;
  const Real v = s * exp(arg);
  const Real ulps = Real(kSinPiUlps + 4) + abs(arg) * 2;
  return {v, next_above(abs(v) * unit_roundoff() * ulps * Real(1.01))};
}

HValue eval_h(const Construction& constr, const Real& x, const Real& y) {
  const DyadicRational dx = DyadicRational::from_real(x);
  return {eval_g(constr, dx, y), eval_second(dx, y)};
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator*(const Real& a, const Complex& b) { return {a * b.re, a * b.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }

namespace {

// sin(pi p + i q) for an exact dyadic p.
Complex complex_sin(const DyadicRational& p, const Real& q) {
  if (q == 0) return {sinpi_dyadic(p), Real(0)};
  return {sinpi_dyadic(p) * cosh(q), cospi_dyadic(p) * sinh(q)};
}

Complex complex_exp(const Real& re, const Real& im) {
  const Real e = exp(re);
  if (im == 0) return {e, Real(0)};
  return {e * cos(im), e * sin(im)};
}

}  // namespace

FValue eval_f(const Construction& constr, const Complex& z1, const Complex& z2) {
  const Real u = unit_roundoff();
  const DyadicRational x = DyadicRational::from_real(z1.re);
  const Real pi_v = pi();

  FValue out;
  Real abs1(0), weighted1(0);
  for (const auto& l : constr.levels) {
    const int k = l.block.k();
    const Real q1 = ldexp2(pi_v * z1.im, -k);
    const Real tr = ldexp2(pi_v * z2.re, -k);
    const Real ti = ldexp2(pi_v * z2.im, -k);
    const Complex w = complex_exp(tr, ti);
    const Complex w2 = w * w;
    Complex power = w;
    int power_j = 1;
    Complex level_sum;
    Real level_abs(0), level_weighted(0);
    for (const auto& term : l.block.terms()) {
      while (power_j < term.j) {
        power = power * w2;
        power_j += 2;
      }
      const Complex s = complex_sin((x * term.j).scaled_down(static_cast<unsigned>(k)),
                                    q1 * Real(term.j));
      const Complex t = (term.b * s) * power;
      level_sum = level_sum + t;
      const Real mag = term.abs_b * abs(s) * abs(power);
      level_abs += mag;
      const Real ulps = Real(kSinPiUlps + 12) +
                        Real(term.j) * ((abs(tr) + abs(ti)) * 2 + Real(4) + abs(q1) * 2);
      level_weighted += mag * ulps;
    }
    out.f1 = out.f1 + l.a * level_sum;
    abs1 += l.a * level_abs;
    weighted1 += l.a * (level_weighted + level_abs * Real(static_cast<long>(l.block.terms().size())));
  }
  out.err1 = next_above(u * (weighted1 + abs1 * Real(static_cast<long>(constr.levels.size()) + 4)) *
                        Real(1.01));

  const Complex s0 = complex_sin(x, pi_v * z1.im);
  const Complex w0 = complex_exp(pi_v * z2.re, pi_v * z2.im);
  out.f2 = s0 * w0;
  const Real ulps2 = Real(kSinPiUlps + 12) + (abs(pi_v * z1.im) + abs(pi_v * z2.re) + abs(pi_v * z2.im)) * 2;
  out.err2 = next_above(abs(s0) * abs(w0) * u * ulps2 * Real(1.01));
  return out;
}

std::vector<Real> lift_dim(const Construction& constr, int d, std::span<const Real> point) {
  if (d < 3) throw std::invalid_argument("lift_dim: dimension must be >= 3");
  if (point.size() != static_cast<std::size_t>(d)) {
    throw std::invalid_argument("lift_dim: point has the wrong dimension");
  }
  const HValue h = eval_h(constr, point[0], point[1]);
  std::vector<Real> out;
  out.reserve(point.size());
  out.push_back(h.g.value);
  out.push_back(h.s.value);
  for (std::size_t i = 2; i < point.size(); ++i) out.push_back(point[i]);
  return out;
}

nlohmann::json to_json(const Construction& constr) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : constr.levels) {
    levels.push_back({{"k", l.k},
                      {"c", l.c},
                      {"A", to_decimal(l.A)},
                      {"a", to_decimal(l.a)},
                      {"m", to_decimal(l.m)}});
  }
  return {{"format", "harmzero.construction"},
          {"version", 1},
          {"n", constr.n},
          {"epsilon", to_decimal(constr.epsilon)},
          {"depth", constr.depth},
          {"precision", constr.precision},
          {"levels", std::move(levels)}};
}

Construction construction_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "harmzero.construction") {
      throw std::invalid_argument("not a harmzero construction file");
    }
    Construction out;
    out.precision = j.at("precision").get<unsigned>();
    if (out.precision < 53) throw std::invalid_argument("precision must be >= 53 bits");
    set_working_precision(out.precision);
    out.n = j.at("n").get<std::vector<int>>();
    out.epsilon = from_decimal(j.at("epsilon").get<std::string>());
    out.depth = j.at("depth").get<int>();
    const auto& levels = j.at("levels");
    if (out.depth < 1 || static_cast<std::size_t>(out.depth) > out.n.size() ||
        levels.size() != static_cast<std::size_t>(out.depth)) {
      throw std::invalid_argument("depth does not match the level table");
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& lj = levels[i];
      const int k = lj.at("k").get<int>();
      const int c = lj.at("c").get<int>();
      if (k != static_cast<int>(i) + 1 || c != out.n[i] + 1) {
        throw std::invalid_argument("level " + std::to_string(i + 1) + " is inconsistent with n");
      }
      out.levels.push_back({k, c, from_decimal(lj.at("A").get<std::string>()),
                            from_decimal(lj.at("a").get<std::string>()),
                            from_decimal(lj.at("m").get<std::string>()), Block(k, extract_b(c))});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed construction: ") + e.what());
  }
}

std::string construction_hash(const Construction& constr) {
  const std::string text = to_json(constr).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace harmzero
