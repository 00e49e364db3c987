#include "commutant/normality.hpp"

#include <algorithm>
#include <cmath>

namespace commutant {

namespace {

const Cplx kI(0.0, 1.0);

// Relative size of a signed sum of ExpPoly products.
struct Rel {
  ExpPoly sum;
  double scale = 0.0;
  Rel& add(const ExpPoly& f, Cplx s = 1.0) {
    sum = sum + s * f;
    scale = std::max(scale, std::abs(s) * f.max_coeff());
    return *this;
  }
  double value() const { return scale == 0.0 ? sum.max_coeff() : sum.max_coeff() / scale; }
};

ExpPoly d1(const ExpPoly& f) { return ep_diff(f); }
ExpPoly d2(const ExpPoly& f) { return ep_diff(f, 2); }

bool is_zero_rel(const ExpPoly& f, double ref, double tol) { return f.max_coeff() <= tol * std::max(ref, 1e-300); }

std::vector<double> interior_grid() {
  std::vector<double> t;
  for (int i = 0; i <= 36; ++i) t.push_back(-0.9 + 1.8 * i / 36.0);
  return t;
}

}  // namespace

DiffOp adjoint(const DiffOp& L) {
  const ExpPoly ab = ep_conj(L.a), bb = ep_conj(L.b), cb = ep_conj(L.c);
  DiffOp out;
  out.a = ab;
  out.b = 2.0 * d1(ab) - bb;
  out.c = d2(ab) - d1(bb) + cb;
  out.segment = L.segment;
  return out;
}

DiffOp pullback(const DiffOp& L) {
  const Cplx m = L.segment.midpoint(), h = L.segment.halfspan();
  DiffOp out;
  out.a = ep_scale(ep_affine(L.a, m, h), 1.0 / (h * h));
  out.b = ep_scale(ep_affine(L.b, m, h), 1.0 / h);
  out.c = ep_affine(L.c, m, h);
  out.segment = Segment{};
  return out;
}

std::array<double, 3> self_adjoint_residuals(const DiffOp& L) {
  const DiffOp P = pullback(L);
  const ExpPoly bp = d1(P.b);
  // scale by the full coefficients: the real or imaginary parts alone can be pure rounding noise
  auto rel = [](const ExpPoly& f, double scale) { return scale == 0.0 ? f.max_coeff() : f.max_coeff() / scale; };
  return {rel(ep_imag(P.a), P.a.max_coeff()),
          rel(ep_real(P.b) - d1(P.a), std::max(P.b.max_coeff(), d1(P.a).max_coeff())),
          rel(ep_imag(P.c) - 0.5 * ep_imag(bp), std::max(P.c.max_coeff(), 0.5 * bp.max_coeff()))};
}

bool is_self_adjoint(const DiffOp& L, double tol) {
  const auto r = self_adjoint_residuals(L);
  return r[0] <= tol && r[1] <= tol && r[2] <= tol;
}

DiffOp op_add(const DiffOp& L, const DiffOp& D) { return {L.a + D.a, L.b + D.b, L.c + D.c, L.segment}; }
DiffOp op_scale(const DiffOp& L, Cplx s) { return {s * L.a, s * L.b, s * L.c, L.segment}; }

std::array<ExpPoly, 5> compose(const DiffOp& L, const DiffOp& D) {
  const ExpPoly &a = L.a, &b = L.b, &c = L.c, &A = D.a, &B = D.b, &C = D.c;
  return {a * A,
          a * (2.0 * d1(A) + B) + b * A,
          a * (d2(A) + 2.0 * d1(B) + C) + b * (d1(A) + B) + c * A,
          a * (d2(B) + 2.0 * d1(C)) + b * (d1(B) + C) + c * B,
          a * d2(C) + b * d1(C) + c * C};
}

double commutator_residual(const DiffOp& L, const DiffOp& D) {
  const auto ld = compose(L, D), dl = compose(D, L);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < 5; ++i) {
    num = std::max(num, (ld[i] - dl[i]).max_coeff());
    den = std::max({den, ld[i].max_coeff(), dl[i].max_coeff()});
  }
  return den == 0.0 ? num : num / den;
}

OpPairTest commute_ops(const DiffOp& L, const DiffOp& D, double tol) {
  const ExpPoly &a = L.a, &b = L.b, &c = L.c, &A = D.a, &B = D.b, &C = D.c;
  OpPairTest t;
  t.residuals[0] = Rel{}.add(a * d1(A)).add(A * d1(a), -1.0).value();
  t.residuals[1] = Rel{}.add(a * d1(B), 2.0).add(b * d1(A)).add(A * d1(b), -2.0).add(B * d1(a), -1.0).value();
  t.residuals[2] = Rel{}
                       .add(a * d2(B))
                       .add(a * d1(C), 2.0)
                       .add(b * d1(B))
                       .add(A * d2(b), -1.0)
                       .add(A * d1(c), -2.0)
                       .add(B * d1(b), -1.0)
                       .value();
  t.residuals[3] = Rel{}.add(a * d2(C)).add(b * d1(C)).add(A * d2(c), -1.0).add(B * d1(c), -1.0).value();
  t.commutes = std::all_of(t.residuals.begin(), t.residuals.end(), [&](double r) { return r <= tol; });

  if (a.max_coeff() == 0.0) return t;
  const auto alpha = ep_ratio(A, a);
  if (!alpha || !is_zero_rel(A - *alpha * a, std::max(A.max_coeff(), a.max_coeff()), tol)) {
    t.diagnostics.push_back("leading coefficients are not proportional");
    return t;
  }
  t.alpha = *alpha;
  const ExpPoly dn = B - *alpha * b;
  const ExpPoly dn2 = dn * dn;
  const auto beta = dn2.max_coeff() <= tol * std::max(B.max_coeff(), 1e-300) ? std::optional<Cplx>(0.0)
                                                                              : ep_ratio(dn2, a);
  if (!beta || !is_zero_rel(dn2 - *beta * a, std::max(dn2.max_coeff(), a.max_coeff()), tol)) {
    t.diagnostics.push_back("(B - alpha b)^2 is not a multiple of a");
    return t;
  }
  t.beta = *beta;
  if (!t.commutes) return t;

  // Integrated form: C - alpha c - f/2 and 2 beta c - (B - alpha b) f' - f^2/2 are constant.
  const ExpPoly num = 2.0 * b - d1(a);
  const ExpPoly nump = d1(num), dnp = d1(dn);
  const bool flat = *beta == Cplx(0.0);
  double dev = 0.0, scale = 0.0;
  std::optional<Cplx> e1ref, e2ref;
  for (double s : interior_grid()) {
    const Cplx y = L.segment.map(s);
    Cplx f = 0.0, fp = 0.0;
    const Cplx dv = ep_eval(dn, y);
    if (!flat) {
      if (std::abs(dv) <= 1e-8 * std::max(1.0, ep_eval_abs(dn, y))) continue;
      const Cplx nv = ep_eval(num, y);
      f = 0.5 * *beta * nv / dv;
      fp = 0.5 * *beta * (ep_eval(nump, y) * dv - nv * ep_eval(dnp, y)) / (dv * dv);
    }
    const Cplx cv = ep_eval(c, y);
    const Cplx e1 = ep_eval(C, y) - *alpha * cv - 0.5 * f;
    const Cplx e2 = 2.0 * *beta * cv - dv * fp - 0.5 * f * f;
    if (!e1ref) {
      e1ref = e1;
      e2ref = e2;
    }
    dev = std::max({dev, std::abs(e1 - *e1ref), std::abs(e2 - *e2ref)});
    scale = std::max({scale, std::abs(ep_eval(C, y)), std::abs(*alpha * cv), std::abs(f), std::abs(*beta * cv),
                      std::abs(dv * fp), std::abs(f * f)});
  }
  t.fFormResidual = scale == 0.0 ? dev : dev / scale;
  return t;
}

bool is_normal_direct(const DiffOp& L, double tol) {
  const DiffOp P = pullback(L);
  return commutator_residual(P, adjoint(P)) <= tol;
}

NormalityReport is_normal(const DiffOp& L) {
  NormalityReport rep;
  const DiffOp P = pullback(L);
  rep.directResidual = commutator_residual(P, adjoint(P));
  rep.selfAdjoint = is_self_adjoint(L);

  // Make the leading coefficient real: Im a = alpha Re a with alpha real.
  const ExpPoly ar = ep_real(P.a), ai = ep_imag(P.a);
  const double aref = P.a.max_coeff();
  Cplx factor = 1.0;
  if (is_zero_rel(ai, aref, kSelfAdjointTol)) {
    factor = 1.0;
  } else if (is_zero_rel(ar, aref, kSelfAdjointTol)) {
    factor = -kI;
    rep.diagnostics.push_back("a purely imaginary: rescaled by -i");
  } else {
    const auto al = ep_ratio(ai, ar);
    if (al && std::abs(al->imag()) <= 1e-12 * std::max(1.0, std::abs(*al)) &&
        is_zero_rel(ai - al->real() * ar, aref, kCommuteTol)) {
      factor = Cplx(1.0, -al->real());
      rep.diagnostics.push_back("Im a = alpha Re a with alpha = " + std::to_string(al->real()) +
                                ": rescaled by (1 - i alpha)");
    } else {
      rep.diagnostics.push_back("Im a is not a real multiple of Re a");
    }
  }
  DiffOp Q = op_scale(P, factor);
  if (ep_eval(Q.a, 0.0).real() < 0.0) {
    factor = -factor;
    Q = op_scale(P, factor);
  }
  rep.rescale = factor;
  const DiffOp Qs = adjoint(Q);
  rep.L0 = op_scale(op_add(Q, Qs), 0.5);
  rep.L1 = op_scale(op_add(Q, op_scale(Qs, -1.0)), 0.5);
  rep.pairTest = commute_ops(rep.L0, rep.L1);
  rep.normal = rep.pairTest.commutes;

  const double qref = std::max({Q.a.max_coeff(), Q.b.max_coeff(), Q.c.max_coeff()});
  const bool skewZero = is_zero_rel(rep.L1.a, qref, kCommuteTol) && is_zero_rel(rep.L1.b, qref, kCommuteTol) &&
                        is_zero_rel(rep.L1.c, qref, kCommuteTol);
  if (!rep.normal || skewZero) return rep;

  const ExpPoly& a = Q.a;
  const ExpPoly &B0 = rep.L0.b, &c0 = rep.L0.c, &s = rep.L1.b, &c1 = rep.L1.c;
  rep.conditions.push_back({"Im a = 0", ep_imag(a).max_coeff() / std::max(a.max_coeff(), 1e-300)});
  rep.conditions.push_back({"Re B0 = a'", Rel{}.add(ep_real(B0)).add(d1(a), -1.0).value()});
  rep.conditions.push_back({"Im B1 = 0", ep_imag(s).max_coeff() / std::max(s.max_coeff(), 1e-300)});
  if (s.max_coeff() <= kCommuteTol * qref) {
    rep.diagnostics.push_back("skew part has no first-order term");
    return rep;
  }

  const std::vector<double> grid = interior_grid();
  std::vector<Cplx> root(grid.size());
  const auto exact = ep_sqrt(a, 0.0);
  if (exact) {
    rep.sqrtExact = true;
    const auto g = ep_ratio(s, *exact);
    rep.gamma = g ? g->real() : 0.0;
    rep.conditions.push_back({"B1 = gamma sqrt(a)", Rel{}.add(s).add(*exact, -*rep.gamma).value()});
    for (size_t i = 0; i < grid.size(); ++i) root[i] = ep_eval(*exact, grid[i]);
  } else {
    for (size_t i = 0; i < grid.size(); ++i) root[i] = std::sqrt(ep_eval(a, grid[i]));
    const Cplx g0 = ep_eval(s, 0.0) / std::sqrt(ep_eval(a, 0.0));
    rep.gamma = g0.real();
    double dev = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) dev = std::max(dev, std::abs(ep_eval(s, grid[i]) / root[i] - g0));
    rep.conditions.push_back({"B1 = gamma sqrt(a)", dev / std::max(std::abs(g0), 1e-300)});
  }

  // c1 - gamma (2 B0 - a') / (4 sqrt a) is an imaginary constant;
  // 4 c0 - [2 B0' - a'' + (a' - 2 B0)(3 a' - 2 B0) / (4 a)] is a real constant.
  const ExpPoly ap = d1(a), app = d2(a), B0p = d1(B0);
  const size_t mid = grid.size() / 2;
  double dev1 = 0.0, sc1 = 0.0, dev2 = 0.0, sc2 = 0.0;
  Cplx r1mid = 0.0, r2mid = 0.0;
  for (int pass = 0; pass < 2; ++pass) {
    for (size_t i = 0; i < grid.size(); ++i) {
      const Cplx y = grid[i];
      const Cplx av = ep_eval(a, y), apv = ep_eval(ap, y), b0 = ep_eval(B0, y);
      const Cplx term1 = *rep.gamma * (2.0 * b0 - apv) / (4.0 * root[i]);
      const Cplx r1 = ep_eval(c1, y) - term1;
      const Cplx bracket = 2.0 * ep_eval(B0p, y) - ep_eval(app, y) + (apv - 2.0 * b0) * (3.0 * apv - 2.0 * b0) / (4.0 * av);
      const Cplx r2 = 4.0 * ep_eval(c0, y) - bracket;
      if (pass == 0) {
        if (i == mid) {
          r1mid = r1;
          r2mid = r2;
        }
        continue;
      }
      dev1 = std::max({dev1, std::abs(r1.real()), std::abs(r1.imag() - r1mid.imag())});
      sc1 = std::max({sc1, std::abs(ep_eval(c1, y)), std::abs(term1)});
      dev2 = std::max({dev2, std::abs(r2.imag()), std::abs(r2.real() - r2mid.real())});
      sc2 = std::max({sc2, std::abs(4.0 * ep_eval(c0, y)), std::abs(bracket)});
    }
  }
  rep.conditions.push_back({"c1 - gamma(2B0 - a')/(4 sqrt a) in iR", dev1 / std::max(sc1, 1e-300)});
  rep.conditions.push_back({"4c0 - [2B0' - a'' + (a' - 2B0)(3a' - 2B0)/(4a)] in R", dev2 / std::max(sc2, 1e-300)});
  return rep;
}

}  // namespace commutant
