#include <doctest.h>

#include <random>

#include "commutant/error.hpp"
#include "commutant/expalg.hpp"
#include "support.hpp"

using namespace commutant;
using testsupport::kI;

namespace {

std::vector<Cplx> probe_points() {
  return {Cplx(0.3, 0.0), Cplx(-0.7, 0.2), Cplx(1.1, -0.4), Cplx(0.0, 0.9), Cplx(-1.5, -0.1)};
}

}  // namespace

TEST_CASE("canonical form merges equal exponents and drops zeros") {
  ExpPoly f(std::vector<ExpTerm>{{1.0, {1.0, 2.0}}, {1.0 + 1e-14, {-1.0, 0.0, 0.0}}, {-2.0, {0.0}}});
  REQUIRE(f.terms().size() == 1);
  CHECK(f.terms()[0].poly.size() == 2);
  CHECK(std::abs(f.terms()[0].poly[1] - 2.0) < 1e-15);
  CHECK(ExpPoly(std::vector<ExpTerm>{{0.5, {0.0, 0.0}}}).empty());
}

TEST_CASE("degree cap") {
  CHECK_NOTHROW(ExpPoly::monomial(8));
  CHECK_THROWS_AS(ep_mul(ExpPoly::monomial(5), ExpPoly::monomial(4)), Error);
}

TEST_CASE("NaN input is rejected") {
  CHECK_THROWS_AS(make_cplx(std::nan(""), 0.0), Error);
  CHECK_THROWS_AS(make_cplx(1.0, INFINITY), Error);
}

TEST_CASE("hyperbolic identities hold structurally") {
  const Cplx l(0.8, -0.3);
  const ExpPoly c = ExpPoly::cosh(l), s = ExpPoly::sinh(l);
  CHECK(ep_equal(ep_sub(ep_mul(c, c), ep_mul(s, s)), ExpPoly::constant(1.0)));
  CHECK(ep_equal(ep_diff(c), ep_scale(s, l)));
  CHECK(ep_equal(ExpPoly::cos(l), ExpPoly::cosh(kI * l)));
}

TEST_CASE("arithmetic agrees with pointwise evaluation") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const ExpPoly f = testsupport::random_exppoly(rng, 3, 2), g = testsupport::random_exppoly(rng, 2, 3);
    for (Cplx y : probe_points()) {
      const Cplx fy = ep_eval(f, y), gy = ep_eval(g, y);
      const double ref = std::abs(fy) * std::abs(gy) + std::abs(fy) + std::abs(gy) + 1.0;
      CHECK(std::abs(ep_eval(ep_add(f, g), y) - (fy + gy)) < 1e-12 * ref);
      CHECK(std::abs(ep_eval(ep_mul(f, g), y) - fy * gy) < 1e-12 * ref);
      CHECK(std::abs(ep_eval(ep_translate(f, 0.4 - 0.2 * kI), y) - ep_eval(f, y + 0.4 - 0.2 * kI)) < 1e-11 * ref);
      CHECK(std::abs(ep_eval(ep_affine(f, 0.1, 0.5), y) - ep_eval(f, 0.1 + 0.5 * y)) < 1e-11 * ref);
    }
  }
}

TEST_CASE("derivative matches a complex-step style central difference") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ExpPoly f = testsupport::random_exppoly(rng, 3, 3);
    const ExpPoly df = ep_diff(f), d2f = ep_diff(f, 2);
    for (Cplx y : probe_points()) {
      // fourth-order stencil, h chosen for ~1e-9 accuracy
      const double h = 1e-3;
      const Cplx fd = (-ep_eval(f, y + 2.0 * h) + 8.0 * ep_eval(f, y + h) - 8.0 * ep_eval(f, y - h) +
                       ep_eval(f, y - 2.0 * h)) /
                      (12.0 * h);
      CHECK(std::abs(ep_eval(df, y) - fd) < 1e-8 * (1.0 + std::abs(fd)));
      CHECK(ep_equal(ep_diff(df), d2f));
    }
  }
}

TEST_CASE("conjugate, real and imaginary parts on the real line") {
  std::mt19937_64 rng(3);
  const ExpPoly f = testsupport::random_exppoly(rng, 3, 2);
  for (double t : {-0.9, -0.2, 0.35, 0.8}) {
    const Cplx v = ep_eval(f, t);
    CHECK(std::abs(ep_eval(ep_conj(f), t) - std::conj(v)) < 1e-12 * (1 + std::abs(v)));
    CHECK(std::abs(ep_eval(ep_real(f), t) - v.real()) < 1e-12 * (1 + std::abs(v)));
    CHECK(std::abs(ep_eval(ep_imag(f), t) - v.imag()) < 1e-12 * (1 + std::abs(v)));
  }
}

TEST_CASE("ratio and square root") {
  const ExpPoly a = ep_add(ExpPoly::cosh(1.3), ExpPoly::constant(-std::cosh(1.3)));
  const auto r = ep_ratio(ep_scale(a, 2.5 - kI), a);
  REQUIRE(r);
  CHECK(std::abs(*r - (2.5 - kI)) < 1e-14);
  CHECK_FALSE(ep_ratio(a, ExpPoly()).has_value());

  const ExpPoly sq = ExpPoly::polynomial({1.0, 0.0, -2.0, 0.0, 1.0});  // (1 - y^2)^2
  const auto root = ep_sqrt(sq);
  REQUIRE(root);
  CHECK(ep_equal(*root, ExpPoly::polynomial({1.0, 0.0, -1.0})));
  CHECK_FALSE(ep_sqrt(ExpPoly::polynomial({1.0, 0.0, 1.0, 1.0})).has_value());
}

TEST_CASE("constant term split") {
  const ExpPoly f = ep_add(ExpPoly::exponential(2.0, 3.0), ExpPoly::polynomial({4.0, 1.0}));
  CHECK(ep_constant_term(f) == Cplx(4.0));
  CHECK(ep_equal(ep_drop_constant(f), ep_add(ExpPoly::exponential(2.0, 3.0), ExpPoly::monomial(1))));
}
