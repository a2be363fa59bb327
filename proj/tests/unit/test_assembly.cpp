#include "harmzero/assembly.hpp"

#include <doctest.h>

#include <cmath>

using namespace harmzero;

namespace {

const Construction& small() {
  static const Construction c = build_construction({1, 2, 3}, Real("0.5"), 3, 160);
  set_working_precision(c.precision);
  return c;
}

// Minimize r^(1+eps) - (pi/2) kappa r over [0, hi] by repeated grid zoom.
double grid_min(int kappa, double eps, double hi) {
  const double slope = M_PI * kappa / 2;
  auto f = [&](double r) { return std::pow(r, 1 + eps) - slope * r; };
  double lo = 0, best = 0;
  for (int round = 0; round < 12; ++round) {
    const int n = 400;
    double arg = lo, val = f(lo);
    for (int i = 0; i <= n; ++i) {
      const double r = lo + (hi - lo) * i / n;
      if (f(r) < val) {
        val = f(r);
        arg = r;
      }
    }
    best = val;
    const double w = (hi - lo) / n;
    lo = std::max(0.0, arg - w);
    hi = arg + w;
  }
  return best;
}

}  // namespace

TEST_CASE("cap minimizer agrees with grid minimization") {
  set_working_precision(128);
  for (double eps : {0.25, 0.5, 1.0, 2.0}) {
    for (int kappa = 3; kappa <= 11; kappa += 2) {
      const CapMinimum m = cap_minimum(kappa, Real(eps));
      const double ref = grid_min(kappa, eps, 4 * m.r_star.convert_to<double>() + 4);
      CHECK(std::abs(m.value.convert_to<double>() - ref) <= 1e-9 * std::abs(ref));
    }
  }
}

TEST_CASE("cap guarantees the growth inequality on a radius grid") {
  set_working_precision(128);
  const Real eps("0.5");
  for (int c = 2; c <= 6; ++c) {
    const int kappa = 2 * c - 1;
    const Real A = compute_cap_A(1, c, eps);
    for (int i = 0; i <= 400; ++i) {
      const Real r = Real(i) / 10;
      const Real lhs = A * ldexp2(exp(pi() * Real(kappa) * r / 2), 3 * c - 2);
      const Real rhs = ldexp2(exp(pow(r, Real(1) + eps)), -kappa);
      CHECK(lhs <= rhs);
    }
  }
}

TEST_CASE("large epsilon: the minimum tends to -pi kappa / 2") {
  set_working_precision(128);
  for (int kappa : {3, 5}) {
    const CapMinimum m = cap_minimum(kappa, Real(10000));
    const double limit = -M_PI * kappa / 2;
    CHECK(std::abs(m.value.convert_to<double>() - limit) <= 0.002 * std::abs(limit));
    CHECK(std::abs(m.r_star.convert_to<double>() - 1) < 0.002);
  }
}

TEST_CASE("induction invariants hold for the stored values") {
  const Construction& c = small();
  REQUIRE(c.levels.size() == 3);
  for (const AuditRow& row : audit_construction(c)) CHECK(row.ok());
  for (const Level& l : c.levels) {
    CHECK(l.a <= l.A);
    CHECK(tail_bound(c, l.k).value < l.m);
  }
  CHECK(unbuilt_tail(c) == next_above(ldexp2(c.min_margin(), -3)));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(build_construction({1, 2}, Real("0.5"), 3, 128), std::invalid_argument);
  CHECK_THROWS_AS(build_construction({1, 2}, Real(0), 2, 128), std::invalid_argument);
  CHECK_THROWS_AS(build_construction({1, 2}, Real("0.5"), 2, 32), std::invalid_argument);
  CHECK_THROWS_AS(build_construction({0, 2}, Real("0.5"), 2, 128), std::invalid_argument);
}

TEST_CASE("g sums the levels and refuses points outside B_{2^(N+1)}") {
  const Construction& c = small();
  const Real x("1.3"), y("-0.7");
  Real sum(0);
  for (const Level& l : c.levels) sum += l.a * eval_u(l.block, x, y).value;
  const Bounded g = eval_g(c, x, y);
  CHECK(abs(g.value - sum) <= g.error);
  CHECK(g.error >= unbuilt_tail(c));
  CHECK_THROWS_AS(eval_g(c, Real(16), Real(1)), DomainError);
  CHECK_NOTHROW(eval_g(c, Real(16), Real(0)));
}

TEST_CASE("gradient of g agrees with central differences") {
  const Construction& c = small();
  UniformSampler rng(3);
  const Real h("1e-15");
  for (int i = 0; i < 25; ++i) {
    const Real x(rng.next(-10, 10)), y(rng.next(-10, 10));
    const Jet j = jet_g(c, DyadicRational::from_real(x), y);
    const Real fx = (eval_g(c, x + h, y).value - eval_g(c, x - h, y).value) / (2 * h);
    const Real fy = (eval_g(c, x, y + h).value - eval_g(c, x, y - h).value) / (2 * h);
    const Real norm = abs(j.dx.value) + abs(j.dy.value);
    CHECK(abs(j.dx.value - fx) + abs(j.dy.value - fy) <= Real("1e-10") * norm);
  }
}

TEST_CASE("f restricts to h on real points and lift_dim appends coordinates") {
  const Construction& c = small();
  const Real x("2.25"), y("-1.5");
  const HValue h = eval_h(c, x, y);
  const FValue f = eval_f(c, {x, Real(0)}, {y, Real(0)});
  CHECK(f.f1.re == h.g.value);
  CHECK(f.f1.im == 0);
  CHECK(abs(f.f2.re - h.s.value) <= f.err2 + h.s.error);
  const std::vector<Real> p{x, y, Real(7), Real(-3)};
  const auto lifted = lift_dim(c, 4, p);
  REQUIRE(lifted.size() == 4);
  CHECK(lifted[0] == h.g.value);
  CHECK(lifted[2] == 7);
  CHECK(lifted[3] == -3);
  CHECK_THROWS_AS(lift_dim(c, 2, std::span<const Real>(p).first(2)), std::invalid_argument);
  CHECK_THROWS_AS(lift_dim(c, 3, p), std::invalid_argument);
}

TEST_CASE("JSON round trip preserves every stored value") {
  const Construction& c = small();
  const std::string hash = construction_hash(c);
  CHECK(hash.size() == 64);
  const Construction back = construction_from_json(to_json(c));
  CHECK(construction_hash(back) == hash);
  for (int k = 1; k <= 3; ++k) {
    CHECK(back.level(k).a == c.level(k).a);
    CHECK(back.level(k).m == c.level(k).m);
  }
  nlohmann::json bad = to_json(c);
  bad["levels"].erase(1);
  CHECK_THROWS_AS(construction_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(construction_from_json(nlohmann::json::object()), std::invalid_argument);
}

TEST_CASE("adaptive build retries at higher precision") {
  std::vector<unsigned> tried;
  const Construction c = build_construction_adaptive({1, 2}, Real("0.5"), 2, 64, 1024, &tried);
  REQUIRE(!tried.empty());
  CHECK(c.precision == tried.back());
  for (const AuditRow& row : audit_construction(c)) CHECK(row.ok());
}
