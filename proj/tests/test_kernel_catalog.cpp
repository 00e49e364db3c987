#include <doctest.h>

#include "commutant/catalog.hpp"
#include "commutant/error.hpp"
#include "commutant/kernel.hpp"
#include "commutant/verifier.hpp"
#include "support.hpp"

using namespace commutant;
using testsupport::kI;
using testsupport::kPi;

namespace {

KernelSpec sinh_kernel(Cplx lambda, Cplx mu, Cplx a1, Cplx a2) { return build_pair(MainCase{lambda, mu, a1, a2}).kernel; }

std::vector<PairCase> sample_cases() {
  return {MainCase{1.0, 0.3, 1.0, 0.7},
          MainCase{kI * kPi / 2.0, kI * kPi / 8.0, 0.0, 1.0},
          MainCase{0.0, kI, 0.5, 0.0},
          MainCase{2.0, Cplx(0.4, 0.3), 0.2, -1.0},
          Special1Case{1, 0.3, -0.2},
          Special2Case{1.5, 1.0, 0.4},
          Special3Case{2.0, {1.0, 0.0, 0.5}},
          Special4Case{{1.0, 0.5, 0.2}, 0.3},
          C2Item1Case{kI * kPi / 2.0, kI * kPi / 8.0, 0.0, 1.0, 1},
          C2Item2Case{1.2, 1.0, kI * 0.5, 1},
          C2Item3Case{kI * 0.7, 2.0},
          C2Item4Case{kI * 0.3, 0.0, 2.0}};
}

}  // namespace

TEST_CASE("kernel jet against contour-integral derivatives") {
  const KernelSpec k = sinh_kernel(1.3, Cplx(0.2, 0.5), 0.7, -0.4);
  for (Cplx z : {Cplx(0.9, 0.1), Cplx(-1.7, 0.0), Cplx(0.05, 0.0), Cplx(-0.3, -0.2)}) {
    const double r = std::min(0.04, 0.5 * std::abs(z));
    const auto c = testsupport::cauchy_coeffs([&](Cplx w) { return testsupport::naive_kernel(k, w); }, z, r, 3);
    const auto jet = kernel_jet(k, z);
    CHECK(std::abs(jet[0] - c[0]) < 1e-11 * std::abs(c[0]));
    CHECK(std::abs(jet[1] - c[1]) < 1e-9 * (1 + std::abs(c[1])));
    CHECK(std::abs(jet[2] - 2.0 * c[2]) < 1e-7 * (1 + std::abs(c[2])));
  }
}

TEST_CASE("series path near a removable zero agrees with the closed form") {
  // alpha2 = 0: removable singularity at 0, k(0) = 2 alpha1
  const KernelSpec k = sinh_kernel(1.1, 0.6, 1.0, 0.0);
  const auto c = testsupport::cauchy_coeffs([&](Cplx w) { return testsupport::naive_kernel(k, w); }, 0.0, 0.8, 3);
  for (double z : {0.0, 1e-9, 1e-4, 0.2}) {
    const auto jet = kernel_jet(k, z);
    const Cplx expect = c[0] + c[1] * z + c[2] * z * z;
    CHECK(std::abs(jet[0] - expect) < 1e-10 + 2.0 * std::pow(z, 3));
  }
  CHECK(std::abs(kernel_eval(k, 0.0) - 2.0) < 1e-12);
  CHECK_FALSE(is_nonremovable_pole(k, 0.0));
}

TEST_CASE("pole hit is reported") {
  const KernelSpec k{ExpPoly::constant(1.0), Denominator::z(), 0.0};
  CHECK_THROWS_AS(kernel_eval(k, 0.0), Error);
  CHECK(is_nonremovable_pole(k, 0.0));
  CHECK(std::abs(kernel_residue(k, 0.0) - 1.0) < 1e-14);
}

TEST_CASE("Laurent data at 0 against the contour oracle") {
  // 1/sin(pi z/8) type kernel: simple pole at 0, next poles at +-8
  const KernelSpec k = sinh_kernel(kI * kPi / 4.0, kI * kPi / 8.0, 0.0, 1.0);
  const LaurentData ld = kernel_laurent(k, 6);
  const auto c = testsupport::cauchy_coeffs([&](Cplx w) { return w * testsupport::naive_kernel(k, w); }, 0.0, 2.0, 7);
  CHECK(std::abs(ld.pole - c[0]) < 1e-12);
  for (int j = 1; j < 7; ++j) CHECK(std::abs(ld.plain[j] - c[j]) < 1e-11);

  const KernelSpec reg = sinh_kernel(1.0, 0.5, 1.0, 0.0);
  const LaurentData lr = kernel_laurent(reg, 6);
  const auto cr = testsupport::cauchy_coeffs([&](Cplx w) { return testsupport::naive_kernel(reg, w); }, 0.0, 2.0, 7);
  CHECK(std::abs(lr.pole) < 1e-13);
  double fact = 1.0;
  for (int n = 0; n < 7; ++n) {
    if (n > 0) fact *= n;
    CHECK(std::abs(lr.factorial[n] - fact * cr[n]) < 1e-10 * fact);
  }
}

TEST_CASE("every catalog variant satisfies the residue identity") {
  for (const auto& c : sample_cases()) {
    CAPTURE(case_name(c));
    const CommutingPair p = build_pair(c);
    const GridResidual g = grid_residual(p);
    CHECK(g.relative <= 1e-10);
    CHECK(validate_pair(p).passed());
  }
}

TEST_CASE("perturbing c breaks the identity") {
  for (const auto& c : sample_cases()) {
    CAPTURE(case_name(c));
    CommutingPair p = build_pair_unchecked(c);
    auto perturb = [](DiffOp& L) { L.c = L.c.empty() ? ep_scale(L.a, 0.1) : ep_scale(L.c, 1.1); };
    perturb(p.op);
    if (p.opTarget) perturb(*p.opTarget);
    CHECK(grid_residual(p).relative > 1e-3);
  }
}

TEST_CASE("gauge transform preserves commutation") {
  for (Cplx tau : {Cplx(0.7), Cplx(-0.3, 0.4)}) {
    const CommutingPair p = build_pair(MainCase{2.0, 0.5, 1.0, 0.3}, tau);
    CHECK(grid_residual(p).relative <= 1e-10);
    CHECK(std::abs(p.kernel.tau - tau) < 1e-15);
  }
}

TEST_CASE("special items reduce to the main family at the stated parameters") {
  const double l = 1.5;
  struct Row {
    PairCase special, main;
  };
  const std::vector<Row> rows = {
      {Special1Case{0, 0.3, 0.3}, MainCase{kI * kPi, kI * kPi / 4.0, 0.0, 1.0 / kPi}},
      {Special2Case{l, 1.0, 0.0}, MainCase{l, 0.0, 0.0, 1.0 / l}},
      {Special3Case{2.0, {1.0, 0.0, 0.0}}, MainCase{0.0, 0.0, 0.25, 0.5}},
      {Special4Case{{1.0, 0.0, 0.0}, 0.0}, MainCase{0.0, 0.0, 0.0, 0.5}},
  };
  for (const auto& r : rows) {
    CAPTURE(case_name(r.special));
    const auto g = testsupport::degeneration_gap(build_pair(r.special), build_pair_unchecked(r.main));
    CHECK(g.kernel <= 1e-12);
    CHECK(g.a <= 1e-12);
    CHECK(g.b <= 1e-12);
    CHECK(g.c <= 1e-12);
  }
  // away from the stated values the extra freedom shows up
  const auto g = testsupport::degeneration_gap(build_pair(Special2Case{l, 1.0, 0.4}),
                                               build_pair_unchecked(MainCase{l, 0.0, 0.0, 1.0 / l}));
  CHECK(g.b > 1e-3);
}

TEST_CASE("imaginary lambda admissibility") {
  CHECK(imaginary_lambda_check(kI * 2.0, 0.3, 1.0).ok);
  CHECK_FALSE(imaginary_lambda_check(kI * 4.0, 0.3, 1.0).ok);
  CHECK(imaginary_lambda_check(kI * 4.0, kI * 3.0, 0.0).ok);  // mu = 3 lambda/4
  CHECK_FALSE(imaginary_lambda_check(kI * 7.0, kI * 1.75, 0.0).ok);
  CHECK_FALSE(imaginary_lambda_check(1.0, 0.3, 1.0).applies);
  CHECK_THROWS_AS(build_pair(MainCase{kI * 4.0, 0.3, 1.0, 0.0}), Error);
}

TEST_CASE("parameter domain errors") {
  CHECK_THROWS_AS(build_pair(Special3Case{0.0, {1.0, 0.0, 0.0}}), Error);
  CHECK_THROWS_AS(build_pair(Special3Case{1.0, {1.0, 0.3, 0.0}}), Error);
  CHECK_THROWS_AS(build_pair(Special1Case{0, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(build_pair(C2Item1Case{0.0, 1.0, 1.0, 0.0, 1}), Error);
}

TEST_CASE("boundary conditions at the segment ends") {
  for (const auto& c : sample_cases()) {
    CAPTURE(case_name(c));
    const CommutingPair p = build_pair(c);
    for (const auto& e : boundary_residuals(p.op)) CHECK(e.a_abs <= kBoundaryTol);
  }
}

TEST_CASE("regularity of the two-segment pairs") {
  const CommutingPair p = build_pair(C2Item1Case{kI * kPi / 2.0, kI * kPi / 8.0, 0.0, 1.0, 1});
  const auto r = classify_regularity(p);
  CHECK(r.verdict == Regularity::Regular);
  REQUIRE(r.witnesses.size() == 2);
  CHECK(std::abs(r.witnesses[0] - 3.0) < 1e-9);
  CHECK(std::abs(r.witnesses[1] - 5.0) < 1e-9);
}

TEST_CASE("zeros on a line") {
  const ExpPoly f = ep_sub(ExpPoly::cos(kPi), ExpPoly::constant(0.0));
  const auto z = zeros_on_line(f, -2.0, 2.0, 0.0, 1.0);
  REQUIRE(z.size() == 4);
  CHECK(std::abs(z[0] + 1.5) < 1e-12);
  CHECK(std::abs(z[3] - 1.5) < 1e-12);
}

TEST_CASE("catalog lists every variant") { CHECK(list_cases().size() == 9); }
