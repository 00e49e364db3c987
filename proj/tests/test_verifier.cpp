#include <doctest.h>

#include "commutant/quadrature.hpp"
#include "commutant/verifier.hpp"
#include "support.hpp"

using namespace commutant;
using testsupport::kI;
using testsupport::kPi;

TEST_CASE("Gauss-Legendre nodes and exactness") {
  const auto r3 = gauss_legendre(3);
  CHECK(std::abs(r3.nodes[0] + std::sqrt(0.6)) < 1e-15);
  CHECK(std::abs(r3.weights[1] - 8.0 / 9.0) < 1e-15);
  const auto r = gauss_legendre(20);
  for (int d = 0; d <= 39; ++d) {
    double s = 0.0;
    for (int j = 0; j < r.size(); ++j) s += r.weights[j] * std::pow(r.nodes[j], d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    CHECK(std::abs(s - exact) < 1e-14);
  }
}

TEST_CASE("mapped rule on a shifted complex segment") {
  const Segment seg{Cplx(-1.0, 4.0), Cplx(1.0, 4.0)};
  const auto r = gauss_legendre(16, seg);
  Cplx s = 0.0;
  for (int j = 0; j < r.size(); ++j) s += r.line_weight(j) * std::exp(r.mapped[j]);
  CHECK(std::abs(s - (std::exp(seg.b) - std::exp(seg.a))) < 1e-13);
}

TEST_CASE("differentiation matrix is exact on polynomials") {
  const auto r = gauss_legendre(12);
  const auto D = differentiation_matrix(r.nodes, barycentric_weights(r));
  Eigen::VectorXd f(12), df(12);
  for (int j = 0; j < 12; ++j) {
    const double t = r.nodes[j];
    f(j) = std::pow(t, 7) - 2 * t * t;
    df(j) = 7 * std::pow(t, 6) - 4 * t;
  }
  CHECK((D * f - df).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("principal value of 1/z") {
  const KernelSpec k{ExpPoly::constant(1.0), Denominator::z(), 0.0};
  const auto r = gauss_legendre(64);
  const auto K = discretize_K(k, r, r);
  const Eigen::VectorXcd v = K.entries * Eigen::VectorXcd::Ones(64);
  double err = 0.0;
  for (int i = 0; i < 64; ++i) err = std::max(err, std::abs(v(i) - std::log((1 + r.nodes[i]) / (1 - r.nodes[i]))));
  CHECK(err <= 1e-10);
}

TEST_CASE("principal value against a polynomial density") {
  // PV int (y^2)/(x - y) dy = x^2 ln((1+x)/(1-x)) - 2x
  const KernelSpec k{ExpPoly::constant(1.0), Denominator::z(), 0.0};
  const auto r = gauss_legendre(48);
  const auto K = discretize_K(k, r, r);
  Eigen::VectorXcd u(48);
  for (int j = 0; j < 48; ++j) u(j) = r.nodes[j] * r.nodes[j];
  const Eigen::VectorXcd v = K.entries * u;
  for (int i = 0; i < 48; ++i) {
    const double x = r.nodes[i];
    CHECK(std::abs(v(i) - (x * x * std::log((1 + x) / (1 - x)) - 2 * x)) < 1e-10);
  }
}

TEST_CASE("smooth kernel integrates exactly") {
  // int e^{x - y} dy over [-1, 1] = e^x (e - 1/e)
  const KernelSpec k{ExpPoly::exponential(1.0), Denominator::one(), 0.0};
  const auto r = gauss_legendre(24);
  const Eigen::VectorXcd v = discretize_K(k, r, r).entries * Eigen::VectorXcd::Ones(24);
  for (int i = 0; i < 24; ++i) CHECK(std::abs(v(i) - std::exp(r.nodes[i]) * 2.0 * std::sinh(1.0)) < 1e-13);
}

TEST_CASE("discretized L on Legendre polynomials") {
  const DiffOp L{ExpPoly::polynomial({-1.0, 0.0, 1.0}), ExpPoly::polynomial({0.0, 2.0}), ExpPoly(), Segment{}};
  const auto r = gauss_legendre(32);
  const auto D = discretize_L(L, r, 32);
  Eigen::VectorXcd p3(32);
  for (int j = 0; j < 32; ++j) {
    const double t = r.nodes[j];
    p3(j) = 0.5 * (5 * t * t * t - 3 * t);
  }
  CHECK((D.entries * p3 - 12.0 * p3).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("commutator is small for a commuting pair and large for a broken one") {
  const CommutingPair p = build_pair(MainCase{0.0, kI, 0.5, 0.0});
  CHECK(commutator_norm(p, 64) < 1e-10);
  CommutingPair bad = build_pair_unchecked(MainCase{0.0, kI, 0.5, 0.0});
  bad.op.c = ep_scale(bad.op.c, 1.3);
  CHECK(commutator_norm(bad, 64) > 1e-3);
}

TEST_CASE("two-segment commutator") {
  // regular pair: Ku is smooth at the target ends
  const CommutingPair p = build_pair(C2Item1Case{kI * kPi / 2.0, kI * kPi / 8.0, 0.0, 1.0, 1});
  CHECK(commutator_norm(p, 64) < 1e-8);
  // generic pair: logarithmic singularities at the target ends spoil the discrete check
  const CommutingPair q = build_pair(C2Item1Case{1.0, 0.3, 1.0, 1.0, 1});
  CHECK(commutator_norm(q, 64) > 1e-3);
}

TEST_CASE("boundary term vanishes at least linearly") {
  const CommutingPair p = build_pair(MainCase{1.0, 0.5, 0.0, 1.0});
  const auto u = standard_test_functions(p.op.segment)[3];
  const PhiFit fit = phi_slope(p.kernel, p.op, u, 0.3);
  CHECK(fit.slope >= 1.0);
}

TEST_CASE("residue identity pointwise for the prolate pair") {
  const CommutingPair p = build_pair(MainCase{0.0, kI, 0.5, 0.0});
  for (Cplx y : {Cplx(-0.3), Cplx(0.8)})
    for (Cplx z : {Cplx(0.2), Cplx(-1.4), Cplx(1.9)}) CHECK(std::abs(residue_R1(p.kernel, p.op, y, z)) < 1e-12);
}
