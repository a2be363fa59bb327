#include "harmzero/blocks.hpp"

#include <doctest.h>

#include <cmath>

using namespace harmzero;

namespace {

// On x = 2^(k-1) each sine is (-1)^((j-1)/2), so u_k there equals P_c(E),
// E = exp(pi y / 2^k). Evaluated from the product form.
Real pc_product(int c, const Real& e) {
  Real v = e;
  for (int j = 2; j <= c; ++j) v *= e * e - 1 + Real(1) / Real(j);
  return v;
}

}  // namespace

TEST_CASE("u_k is bit-exactly zero on x = 2^l, l >= k") {
  set_working_precision(192);
  for (int k = 1; k <= 4; ++k) {
    const Block block(k, extract_b(k + 1));
    for (int l = k; l <= k + 4; ++l) {
      for (int s = -1; s <= 1; s += 2) {
        for (int i = 0; i < 20; ++i) {
          const Real y = Real(i - 10) * Real("0.731");
          const Bounded v = eval_u(block, DyadicRational(s * (1L << l)), y);
          CHECK(v.value == 0);
        }
      }
    }
  }
}

TEST_CASE("u_k on x = 2^(k-1) is P_c(exp(pi y / 2^k))") {
  set_working_precision(192);
  for (int k = 1; k <= 4; ++k) {
    for (int c = 2; c <= 6; ++c) {
      const Block block(k, extract_b(c));
      for (int i = 0; i < 15; ++i) {
        const Real y = Real(i - 12) * Real("0.37");
        const Bounded v = eval_u(block, DyadicRational(1L << (k - 1)), y);
        const Real e = exp(ldexp2(pi() * y, -k));
        const Real expect = pc_product(c, e);
        CHECK(abs(v.value - expect) <= v.error + unit_roundoff() * 64 * (abs(expect) + 1));
      }
      for (int j = 2; j <= c; ++j) {
        const XiPoint xi = xi_point(k, j);
        const Bounded v = eval_u(block, xi.x, xi.y);
        CHECK(abs(v.value) <= Real("1e-50"));
      }
    }
  }
}

TEST_CASE("jet agrees with central differences") {
  set_working_precision(256);
  UniformSampler rng(11);
  const Real h("1e-20");
  for (int k = 1; k <= 3; ++k) {
    const Block block(k, extract_b(k + 2));
    for (int i = 0; i < 30; ++i) {
      const Real x(rng.next(-6, 6)), y(rng.next(-6, 6));
      const Jet jet = jet_u(block, DyadicRational::from_real(x), y);
      const Real fx = (eval_u(block, x + h, y).value - eval_u(block, x - h, y).value) / (2 * h);
      const Real fy = (eval_u(block, x, y + h).value - eval_u(block, x, y - h).value) / (2 * h);
      const Real scale = abs(jet.dx.value) + abs(jet.dy.value);
      CHECK(abs(jet.dx.value - fx) <= Real("1e-12") * scale);
      CHECK(abs(jet.dy.value - fy) <= Real("1e-12") * scale);
      const Bounded v = eval_u(block, x, y);
      CHECK(abs(jet.value.value - v.value) <= jet.value.error + v.error);
    }
  }
}

TEST_CASE("norm bounds dominate sampled values on the disk") {
  set_working_precision(128);
  const Block block(2, extract_b(4));
  for (double r : {0.5, 2.0, 5.0}) {
    const Real c1 = c1_norm_bound(block, Real(r));
    const Real mu = mu_u_bound(block, Real(r));
    CHECK(mu <= c1);
    for (int a = 0; a < 24; ++a) {
      for (int s = 1; s <= 4; ++s) {
        const double rr = r * s / 4, th = 2 * M_PI * a / 24;
        const Real x(rr * std::cos(th)), y(rr * std::sin(th));
        const Jet j = jet_u(block, DyadicRational::from_real(x), y);
        CHECK(abs(j.value.value) <= mu);
        CHECK(abs(j.dx.value) <= c1);
        CHECK(abs(j.dy.value) <= c1);
      }
    }
  }
}

TEST_CASE("traced zero set of u_k") {
  set_working_precision(128);
  const int k = 2;
  const Block block(k, extract_b(3));
  const BoundingBox box{0.0, -2.0, 5.0, 1.0};
  const int res = 60;
  const auto lines = trace_zero_set(block, box, res);
  REQUIRE(!lines.empty());
  const double diag = std::hypot(5.0 / res, 3.0 / res);
  const Real lip = lipschitz_bound(block, Real(1));
  bool vertical_at_4 = false;
  for (const auto& pl : lines) {
    bool all_at_4 = pl.size() > 2;
    for (const auto& [x, y] : pl) {
      CHECK(abs(eval_u(block, Real(x), Real(y)).value) <= lip * Real(diag));
      all_at_4 = all_at_4 && std::abs(x - 4.0) < 1e-9;
    }
    vertical_at_4 = vertical_at_4 || all_at_4;
  }
  CHECK(vertical_at_4);
  CHECK_THROWS_AS(trace_zero_set(block, {0, 0, 0, 1}, 10), std::invalid_argument);
  CHECK_THROWS_AS(trace_zero_set(block, box, 1), std::invalid_argument);
  CHECK(!trace_zero_set(block, box, 2).empty());
}
