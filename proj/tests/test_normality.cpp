#include <doctest.h>

#include <random>

#include "commutant/normality.hpp"
#include "commutant/quadrature.hpp"
#include "support.hpp"

using namespace commutant;
using testsupport::kI;
using testsupport::kPi;

namespace {

DiffOp random_op(std::mt19937_64& rng) {
  return DiffOp{testsupport::random_exppoly(rng, 1, 2), testsupport::random_exppoly(rng, 1, 2),
                testsupport::random_exppoly(rng, 1, 2), Segment{}};
}

bool same_op(const DiffOp& L, const DiffOp& M, double tol = 1e-12) {
  return ep_equal(L.a, M.a, tol) && ep_equal(L.b, M.b, tol) && ep_equal(L.c, M.c, tol);
}

// LL* - L*L coefficient by coefficient.
double direct_commutator_on_polys(const DiffOp& L) {
  const DiffOp Ls = adjoint(L);
  const auto lhs = compose(L, Ls), rhs = compose(Ls, L);
  double m = 0.0, ref = 0.0;
  for (int i = 0; i < 5; ++i) {
    m = std::max(m, testsupport::max_abs_coeff(ep_sub(lhs[i], rhs[i])));
    ref = std::max(ref, testsupport::max_abs_coeff(lhs[i]));
  }
  return m / ref;
}

}  // namespace

TEST_CASE("adjoint of a simple operator") {
  const DiffOp L{ExpPoly::polynomial({-1.0, 0.0, 1.0}), ExpPoly(), ExpPoly(), Segment{}};
  const DiffOp A = adjoint(L);
  CHECK(ep_equal(A.a, L.a));
  CHECK(ep_equal(A.b, ExpPoly::polynomial({0.0, 4.0})));
  CHECK(ep_equal(A.c, ExpPoly::constant(2.0)));
}

TEST_CASE("adjoint is an involution") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    const DiffOp L = random_op(rng);
    CHECK(same_op(adjoint(adjoint(L)), L, 1e-11));
  }
}

TEST_CASE("adjoint matches integration by parts") {
  // <L u, v> = <u, L* v> for u, v vanishing to second order at both ends
  std::mt19937_64 rng(23);
  const DiffOp L = random_op(rng);
  const DiffOp A = adjoint(L);
  const auto r = gauss_legendre(40);
  auto apply = [](const DiffOp& M, double y, const std::array<double, 3>& u) {
    return ep_eval(M.a, y) * u[2] + ep_eval(M.b, y) * u[1] + ep_eval(M.c, y) * u[0];
  };
  // u = (1 - y^2)^3, v = (1 - y^2)^3 y
  auto U = [](double y) -> std::array<double, 3> {
    const double s = 1 - y * y;
    return {s * s * s, -6 * y * s * s, -6 * s * s + 24 * y * y * s};
  };
  auto V = [](double y) -> std::array<double, 3> {
    const double s = 1 - y * y;
    return {y * s * s * s, s * s * s - 6 * y * y * s * s, -18 * y * s * s + 24 * y * y * y * s};
  };
  Cplx lhs = 0.0, rhs = 0.0;
  for (int j = 0; j < r.size(); ++j) {
    const double y = r.nodes[j], w = r.weights[j];
    lhs += w * apply(L, y, U(y)) * V(y)[0];
    rhs += w * U(y)[0] * std::conj(apply(A, y, V(y)));
  }
  CHECK(std::abs(lhs - rhs) < 1e-12 * (1 + std::abs(lhs)));
}

TEST_CASE("catalog two-segment operators are self-adjoint") {
  const std::vector<PairCase> cases = {C2Item1Case{kI * kPi / 2.0, kI * kPi / 8.0, 0.0, 1.0, 1},
                                       C2Item2Case{1.2, 1.0, kI * 0.5, 1}, C2Item3Case{kI * 0.7, 2.0},
                                       C2Item4Case{kI * 0.3, 0.0, 2.0}};
  for (const auto& c : cases) {
    const CommutingPair p = build_pair(c);
    CHECK(is_self_adjoint(p.op));
    CHECK(is_self_adjoint(*p.opTarget));
  }
}

TEST_CASE("self-adjoint operators are normal") {
  const DiffOp L{ExpPoly::polynomial({1.0, 0.0, -1.0}), ExpPoly::polynomial({0.0, -2.0}), ExpPoly::constant(3.0),
                 Segment{}};
  const auto rep = is_normal(L);
  CHECK(rep.selfAdjoint);
  CHECK(rep.normal);
  CHECK(is_normal_direct(L));
}

TEST_CASE("normal operator built from commuting parts") {
  // T = s d + s'/2 is skew-adjoint for real s vanishing at the ends; T^2 + gamma T + const is normal
  const ExpPoly s = ExpPoly::polynomial({1.0, 0.0, -1.0});
  for (double gamma : {1.0, 0.3, -2.0}) {
    CAPTURE(gamma);
    const DiffOp L = testsupport::normal_example(s, gamma, 0.7);
    const auto rep = is_normal(L);
    CHECK(rep.normal);
    CHECK_FALSE(rep.selfAdjoint);
    CHECK(rep.sqrtExact);
    for (const auto& c : rep.conditions) CHECK(c.value < 1e-12);
    CHECK(is_normal_direct(L));
    CHECK(direct_commutator_on_polys(L) < 1e-12);
    // a complex multiple of a normal operator is normal
    CHECK(is_normal(op_scale(L, Cplx(2.0, 1.0))).normal);
  }
}

TEST_CASE("random operators: both normality paths agree") {
  std::mt19937_64 rng(20261019);
  int agree = 0;
  for (int i = 0; i < 30; ++i) {
    const DiffOp L = random_op(rng);
    const bool a = is_normal(L).normal, b = is_normal_direct(L);
    if (a == b) ++agree;
    CHECK_FALSE(b);
  }
  CHECK(agree == 30);
}

TEST_CASE("commute_ops recovers the leading ratio and is symmetric in its verdict") {
  const DiffOp T{ExpPoly::polynomial({-1.0, 0.0, 1.0}), ExpPoly::polynomial({0.0, 2.0}), ExpPoly(), Segment{}};
  const DiffOp D = op_add(op_scale(T, 2.5), DiffOp{ExpPoly(), ExpPoly(), ExpPoly::constant(1.0), Segment{}});
  const auto t1 = commute_ops(T, D), t2 = commute_ops(D, T);
  CHECK(t1.commutes);
  CHECK(t2.commutes);
  REQUIRE(t1.alpha);
  CHECK(std::abs(*t1.alpha - 2.5) < 1e-12);

  std::mt19937_64 rng(2);
  for (int i = 0; i < 5; ++i) {
    const DiffOp A = random_op(rng), B = random_op(rng);
    CHECK(commute_ops(A, B).commutes == commute_ops(B, A).commutes);
    CHECK(std::abs(commutator_residual(A, B) - commutator_residual(B, A)) < 1e-12);
  }
}

TEST_CASE("composition against pointwise application") {
  std::mt19937_64 rng(31);
  const DiffOp L = random_op(rng), D = random_op(rng);
  const auto C = compose(L, D);
  // u = e^{0.3 y}: every derivative is a power of 0.3
  const double k = 0.3;
  for (double y : {-0.6, 0.1, 0.9}) {
    const Cplx u = std::exp(k * y);
    // D u = f(y) e^{ky}; derivatives by Leibniz
    const ExpPoly f = ep_add(ep_add(ep_scale(D.a, k * k), ep_scale(D.b, k)), D.c);
    const Cplx f0 = ep_eval(f, y), f1 = ep_eval(ep_diff(f), y), f2 = ep_eval(ep_diff(f, 2), y);
    const Cplx w0 = f0 * u, w1 = (f1 + k * f0) * u, w2 = (f2 + 2 * k * f1 + k * k * f0) * u;
    const Cplx direct = ep_eval(L.a, y) * w2 + ep_eval(L.b, y) * w1 + ep_eval(L.c, y) * w0;
    Cplx viaC = 0.0;
    for (int i = 0; i < 5; ++i) viaC += ep_eval(C[i], y) * std::pow(k, 4 - i) * u;
    CHECK(std::abs(direct - viaC) < 1e-11 * (1 + std::abs(direct)));
  }
}

TEST_CASE("inadmissible zeroth-order term breaks normality") {
  const DiffOp L{ExpPoly::polynomial({-1.0, 0.0, 1.0}), ExpPoly::polynomial({0.0, 2.0}),
                 ExpPoly::monomial(1, kI), Segment{}};
  CHECK_FALSE(is_normal(L).normal);
  CHECK_FALSE(is_normal_direct(L));
}

TEST_CASE("pullback to the reference variable") {
  const Segment seg{Cplx(-1.0, 2.0), Cplx(1.0, 2.0)};
  const DiffOp L{ExpPoly::cosh(0.5), ExpPoly::sinh(0.5), ExpPoly::constant(1.0), seg};
  const DiffOp P = pullback(L);
  for (double t : {-0.5, 0.2}) CHECK(std::abs(ep_eval(P.a, t) - ep_eval(L.a, seg.map(t))) < 1e-13);
}

TEST_CASE("self-adjointness survives a period shift of the segment") {
  // coefficients are 2 pi i periodic; exp(2 pi i) leaves rounding noise in the imaginary parts
  const CommutingPair p = build_pair(C2Item1Case{1.0, 0.5, 1.0, 1.0, 1});
  REQUIRE(p.opTarget);
  CHECK(std::abs(p.opTarget->segment.a.imag() - 2.0 * kPi) < 1e-12);
  CHECK(is_self_adjoint(*p.opTarget));
  DiffOp bad = *p.opTarget;
  bad.c = ep_add(bad.c, ExpPoly::constant(Cplx(0.0, 0.1)));
  CHECK_FALSE(is_self_adjoint(bad));
}

TEST_CASE("gauge predicate matches the self-adjointness check") {
  // item 2 with a complex gauge stays self-adjoint when beta = 2 alpha Re tau
  const double lambda = 1.2, alpha = 0.8;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  int kept = 0;
  for (int i = 0; i < 16; ++i) {
    const Cplx tau(i % 4 ? nd(rng) : 0.0, nd(rng));
    const double bi = nd(rng);
    const Cplx beta = i % 4 == 0 ? Cplx(0.0, bi) : i % 2 ? Cplx(2.0 * alpha * tau.real(), 0.0) : Cplx(nd(rng), bi);
    CAPTURE(tau);
    CAPTURE(beta);
    const DiffOp g = gauge_op(build_pair_unchecked(Special2Case{lambda, alpha, beta}).op, tau);
    const bool keep = gauge_keeps_self_adjoint(C2Item2Case{lambda, alpha, beta, 1}, tau);
    CHECK(keep == is_self_adjoint(g));
    kept += keep;
  }
  CHECK(kept == 12);
  const CommutingPair p = build_pair(C2Item3Case{kI * 0.7, 2.0});
  for (Cplx tau : {Cplx(0.0, 0.4), Cplx(0.2, 0.4)})
    CHECK(gauge_keeps_self_adjoint(p.kase, tau) == is_self_adjoint(gauge_op(p.op, tau)));
}
