#pragma once

// Helpers shared by the unit tests and the acceptance runner.  Everything
// here is computed independently of the library paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "commutant/catalog.hpp"
#include "commutant/expalg.hpp"
#include "commutant/kernel.hpp"

namespace testsupport {

using commutant::Cplx;
inline constexpr double kPi = std::numbers::pi;
inline const Cplx kI{0.0, 1.0};

// Plain Taylor coefficients [z^n] of f about z0 by the trapezoid rule on a
// circle.  Geometric convergence as long as f is analytic on a disc a bit
// larger than the circle.
inline std::vector<Cplx> cauchy_coeffs(const std::function<Cplx(Cplx)>& f, Cplx z0, double r, int count,
                                       int M = 256) {
  std::vector<Cplx> c(count, 0.0);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * kPi * j / M;
    const Cplx w = std::polar(1.0, th);
    const Cplx fv = f(z0 + r * w);
    for (int n = 0; n < count; ++n) c[n] += fv * std::pow(std::conj(w), n);
  }
  for (int n = 0; n < count; ++n) c[n] /= static_cast<double>(M) * std::pow(r, n);
  return c;
}

// Eigenvalues chi of ((1 - t^2) u')' - c^2 t^2 u = -chi u, from the symmetric
// tridiagonal Legendre matrix, ascending.
inline std::vector<double> prolate_chi(double c, int count, int size = 80) {
  std::vector<double> out;
  for (int parity = 0; parity < 2; ++parity) {
    const int m = size;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      const double n = 2.0 * i + parity;
      T(i, i) = n * (n + 1) + c * c * (2 * n * (n + 1) - 1) / ((2 * n - 1) * (2 * n + 3));
      if (i + 1 < m) {
        const double off = c * c * (n + 1) * (n + 2) / ((2 * n + 3) * std::sqrt((2 * n + 1) * (2 * n + 5)));
        T(i, i + 1) = T(i + 1, i) = off;
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    for (int i = 0; i < m; ++i) out.push_back(es.eigenvalues()(i));
  }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

// Kernel value from scratch: e^{tau z} N(z) / D(z), no series switch.
inline Cplx naive_kernel(const commutant::KernelSpec& k, Cplx z) {
  Cplx d = 1.0;
  if (k.denom.kind == commutant::DenomKind::Z) d = z;
  if (k.denom.kind == commutant::DenomKind::SinhHalf) d = std::sinh(k.denom.lambda * z / 2.0);
  return std::exp(k.tau * z) * commutant::ep_eval(k.numerator, z) / d;
}

inline double max_abs_coeff(const commutant::ExpPoly& f) {
  double m = 0.0;
  for (const auto& t : f.terms())
    for (Cplx c : t.poly) m = std::max(m, std::abs(c));
  return m;
}

// Relative size of f - g measured structurally, against the larger operand.
inline double structural_gap(const commutant::ExpPoly& f, const commutant::ExpPoly& g) {
  const double ref = std::max({max_abs_coeff(f), max_abs_coeff(g), 1e-300});
  return max_abs_coeff(commutant::ep_sub(f, g)) / ref;
}

struct DegenerationGap {
  double kernel = 0.0;  // sampled relative difference of the kernels
  double a = 0.0, b = 0.0, c = 0.0;
  Cplx scale = 0.0;     // L_special = scale * L_main (+ constant in c)
};

// Compares a special pair with a Main pair.  The kernels must agree as
// functions; the operators must agree up to one overall factor, with c only
// determined up to an additive constant (adding a constant to L keeps the
// commutation).
inline DegenerationGap degeneration_gap(const commutant::CommutingPair& special,
                                        const commutant::CommutingPair& main) {
  using namespace commutant;
  DegenerationGap g;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Cplx z(-1.9 + 3.8 * i / 15.0, 0.13);
    const Cplx ks = naive_kernel(special.kernel, z), km = naive_kernel(main.kernel, z);
    num = std::max(num, std::abs(ks - km));
    den = std::max(den, std::abs(km));
  }
  g.kernel = num / den;
  const auto s = ep_ratio(special.op.a, main.op.a);
  g.scale = s.value_or(0.0);
  g.a = structural_gap(special.op.a, ep_scale(main.op.a, g.scale));
  g.b = structural_gap(special.op.b, ep_scale(main.op.b, g.scale));
  const ExpPoly dc = ep_sub(special.op.c, ep_scale(main.op.c, g.scale));
  const double ref = std::max({max_abs_coeff(special.op.a), max_abs_coeff(special.op.c), 1e-300});
  g.c = max_abs_coeff(ep_drop_constant(dc)) / ref;
  return g;
}

// T^2 + gamma T + shift with T = s d + s'/2.
inline commutant::DiffOp normal_example(const commutant::ExpPoly& s, double gamma, double shift) {
  using namespace commutant;
  const ExpPoly s1 = ep_diff(s), s2 = ep_diff(s, 2);
  DiffOp T2{ep_mul(s, s), ep_scale(ep_mul(s, s1), 2.0),
            ep_add(ep_scale(ep_mul(s, s2), 0.5), ep_scale(ep_mul(s1, s1), 0.25)), Segment{}};
  T2.b = ep_add(T2.b, ep_scale(s, gamma));
  T2.c = ep_add(T2.c, ep_add(ep_scale(s1, 0.5 * gamma), ExpPoly::constant(shift)));
  return T2;
}

inline commutant::ExpPoly random_exppoly(std::mt19937_64& rng, int terms, int degree, bool realOnly = false) {
  std::normal_distribution<double> nd;
  std::vector<commutant::ExpTerm> t;
  for (int j = 0; j < terms; ++j) {
    commutant::ExpTerm e;
    e.exponent = j == 0 ? Cplx(0.0) : Cplx(nd(rng), realOnly ? 0.0 : nd(rng));
    for (int d = 0; d <= degree; ++d) e.poly.push_back(Cplx(nd(rng), realOnly ? 0.0 : nd(rng)));
    t.push_back(e);
  }
  return commutant::ExpPoly(t);
}

}  // namespace testsupport
