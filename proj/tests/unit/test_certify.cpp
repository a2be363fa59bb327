#include "harmzero/certify.hpp"

#include <doctest.h>

using namespace harmzero;

namespace {

const Construction& small() {
  static const Construction c = build_construction({1, 2, 3}, Real("0.5"), 3, 192);
  set_working_precision(c.precision);
  return c;
}

}  // namespace

TEST_CASE("each level line carries exactly n_k certified zeros") {
  const Construction& c = small();
  for (int k = 1; k <= 3; ++k) {
    const auto certs = count_zeros_on_line(c, k);
    CHECK(certs.size() == static_cast<std::size_t>(c.n[static_cast<std::size_t>(k - 1)]));
    const Real half = ldexp2(Real(1), k - 1);
    for (const auto& z : certs) {
      CHECK(z.line_x == (1L << (k - 1)));
      CHECK(z.y_lo > -half);
      CHECK(z.y_hi < 0);
      // Independent re-evaluation of the endpoints.
      const Bounded lo = eval_g(c, Real(z.line_x), z.y_lo);
      const Bounded hi = eval_g(c, Real(z.line_x), z.y_hi);
      CHECK(lo.certified_sign() == z.sign_lo);
      CHECK(hi.certified_sign() == z.sign_hi);
      CHECK(z.sign_lo == -z.sign_hi);
      CHECK(z.refined_root >= z.y_lo);
      CHECK(z.refined_root <= z.y_hi);
      CHECK(z.regular());
    }
  }
}

TEST_CASE("certified zeros sit near the predicted ordinates") {
  const Construction& c = small();
  const auto certs = count_zeros_on_line(c, 3);
  REQUIRE(certs.size() == 3);
  for (std::size_t i = 0; i < certs.size(); ++i) {
    // Ascending y: j = 2, 3, 4.
    const XiPoint xi = xi_point(3, 2 + static_cast<int>(i));
    CHECK(abs(certs[i].refined_root - xi.y) < Real("1e-3"));
  }
}

TEST_CASE("ball counts") {
  const Construction& c = small();
  const CountReport tiny = count_zeros_ball(c, Real("0.5"));
  CHECK(tiny.total == 0);
  CHECK(tiny.degenerate_lines == std::vector<long>{0});
  const CountReport r4 = count_zeros_ball(c, Real(4));
  CHECK(r4.target == 3);
  CHECK(r4.target_asserted);
  CHECK(r4.meets_target);
  CHECK(r4.failed_brackets == 0);
  CHECK(r4.per_line.at(1) >= 1);
  CHECK(r4.per_line.at(2) >= 2);
  const CountReport r3 = count_zeros_ball(c, Real(3));
  CHECK(!r3.target_asserted);
  CHECK(r3.target == 1);
  CHECK(r3.total <= r4.total);
  CHECK_THROWS_AS(count_zeros_ball(c, Real(9)), DomainError);
  CHECK_THROWS_AS(count_zeros_ball(c, Real(-1)), std::invalid_argument);
  const auto j = to_json(r4);
  CHECK(j.at("certificates").size() == static_cast<std::size_t>(r4.total));
}

TEST_CASE("a segment without sign changes yields nothing") {
  const Construction& c = small();
  const LineScan s = scan_line(c, 1, Real("-0.1"), Real("0.5"), {});
  CHECK(s.certificates.empty());
  CHECK(s.failed_brackets == 0);
  CHECK_THROWS_AS(scan_line(c, 1, Real(1), Real(0), {}), std::invalid_argument);
}

TEST_CASE("Jacobian factorizes on integer lines") {
  const Construction& c = small();
  const Real h("1e-25");
  for (const auto& z : count_zeros_on_line(c, 2)) {
    const JacobianH jac = jacobian_h(c, z.line_x, z.refined_root);
    CHECK(jac.entry[1][1].value == 0);
    const Real y = z.refined_root;
    const Real dgdy =
        (eval_g(c, Real(z.line_x), y + h).value - eval_g(c, Real(z.line_x), y - h).value) / (2 * h);
    const Real expect = -pi() * exp(pi() * y) * dgdy;  // cos(pi x) = 1 on even x
    CHECK(abs(jac.det.value - expect) <= Real("1e-9") * abs(expect));
    CHECK(abs(jac.det.value) > jac.det.error);
  }
}

TEST_CASE("modulus budget and extension") {
  const Construction& c = small();
  std::vector<Real> radii;
  for (int i = 0; i <= 8; ++i) radii.push_back(Real(i));
  const MuReport mu = check_mu_bound(c, radii, 90);
  CHECK(mu.certified_ok());
  for (const auto& row : mu.rows) CHECK(row.sample_below_certified);
  CHECK_THROWS_AS(check_mu_bound(c, std::vector<Real>{Real(9)}), DomainError);

  const Real res = cauchy_riemann_residual(c, {Real("0.3"), Real("0.8")}, {Real("-1.1"), Real("0.4")}, Real("1e-20"));
  CHECK(res < Real("1e-12"));
  const auto rows = extension_constant(c, std::vector<Real>{Real(1), Real(2)}, 50, 90, 5);
  for (const auto& r : rows) {
    CHECK(r.ratio > 0);
    CHECK(boost::multiprecision::isfinite(r.ratio));
  }
}

TEST_CASE("restriction of f and its zeros") {
  const Construction& c = small();
  std::vector<ZeroCertificate> certs;
  for (int k = 1; k <= 3; ++k) {
    auto z = count_zeros_on_line(c, k);
    certs.insert(certs.end(), z.begin(), z.end());
  }
  const RestrictionReport r = verify_restriction(c, 50, 9, certs);
  CHECK(r.deviation_ok);
  CHECK(r.zeros_checked == 6);
  CHECK(r.zeros_vanish);
  CHECK(r.zeros_regular);
}
