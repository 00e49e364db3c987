#include "commutant/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "commutant/error.hpp"
#include "commutant/verifier.hpp"

namespace commutant {

namespace {

constexpr double kPi = std::numbers::pi;
const Cplx kI(0.0, 1.0);
// Parameters this close to zero are treated as the exact limit.
constexpr double kLimitTol = 1e-12;
constexpr double kCertifyTol = 1e-9;

bool near_real(Cplx z) { return std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z)); }
bool near_imag(Cplx z) { return std::abs(z.real()) <= 1e-12 * std::max(1.0, std::abs(z)); }
bool near_zero(Cplx z) { return std::abs(z) <= kLimitTol; }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Parts {
  KernelSpec kernel;
  ExpPoly a, b, c;
};

const ExpPoly& y_squared_minus_one() {
  static const ExpPoly f = ExpPoly::polynomial({-1.0, 0.0, 1.0});
  return f;
}

Parts main_parts(Cplx lambda, Cplx mu, Cplx alpha1, Cplx alpha2) {
  if (near_zero(alpha1) && near_zero(alpha2)) throw Error(ErrorCode::Degenerate, "alpha1 = alpha2 = 0 gives k = 0");
  const ExpPoly s = near_zero(mu) ? ExpPoly::monomial(1) : ep_scale(ExpPoly::sinh(mu), 1.0 / mu);
  const ExpPoly inner = ep_add(ep_scale(s, alpha1), ep_scale(ExpPoly::cosh(mu), alpha2));
  Parts p;
  if (near_zero(lambda)) {
    p.kernel.numerator = ep_scale(inner, 2.0);
    p.kernel.denom = Denominator::z();
    p.a = ep_scale(y_squared_minus_one(), 0.5);
    p.c = ep_scale(p.a, -mu * mu);
  } else {
    p.kernel.numerator = ep_scale(inner, lambda);
    p.kernel.denom = Denominator::sinh_half(lambda);
    p.a = ep_scale(ep_sub(ExpPoly::cosh(lambda), ExpPoly::constant(std::cosh(lambda))), 1.0 / (lambda * lambda));
    p.c = ep_scale(p.a, lambda * lambda / 4.0 - mu * mu);
  }
  p.b = ep_diff(p.a);
  return p;
}

Parts special2_parts(Cplx lambda, Cplx alpha, Cplx beta) {
  if (near_zero(lambda)) throw Error(ErrorCode::ParameterDomain, "item 2 needs lambda != 0");
  if (near_zero(alpha) && near_zero(beta)) throw Error(ErrorCode::Degenerate, "alpha = beta = 0 gives L = 0");
  const ExpPoly a0 = ep_sub(ExpPoly::cosh(lambda), ExpPoly::constant(std::cosh(lambda)));
  const ExpPoly a0p = ep_diff(a0);
  Parts p;
  p.kernel.numerator = ExpPoly::constant(1.0);
  p.kernel.denom = Denominator::sinh_half(lambda);
  p.a = ep_scale(a0, alpha);
  p.b = ep_add(ep_scale(a0p, alpha), ep_scale(a0, beta));
  p.c = ep_add(ep_scale(a0p, beta / 2.0), ep_scale(a0, alpha * lambda * lambda / 4.0));
  return p;
}

std::vector<Cplx> quadratic(std::vector<Cplx> p) {
  if (p.size() > 3) throw Error(ErrorCode::ParameterDomain, "p must have degree at most two");
  p.resize(3, 0.0);
  return p;
}

void check_imaginary_lambda(Cplx lambda, Cplx mu, Cplx alpha1) {
  ImaginaryLambdaStatus st = imaginary_lambda_check(lambda, mu, alpha1);
  if (!st.ok) throw Error(ErrorCode::ParameterDomain, st.detail);
}

CommutingPair assemble(const PairCase& c, Parts parts, Segment target, bool twoSegments) {
  CommutingPair pair;
  pair.kase = c;
  pair.kernel = std::move(parts.kernel);
  pair.op = DiffOp{parts.a, parts.b, parts.c, Segment{}};
  if (twoSegments) pair.opTarget = DiffOp{parts.a, parts.b, parts.c, target};
  return pair;
}

}  // namespace

std::string case_name(const PairCase& c) {
  static const char* names[] = {"Main",    "Special1", "Special2", "Special3", "Special4",
                                "C2Item1", "C2Item2",  "C2Item3",  "C2Item4"};
  return names[c.index()];
}

bool is_c2_case(const PairCase& c) { return c.index() >= 5; }

std::vector<CaseInfo> list_cases() {
  return {
      {"Main", "lambda, mu, alpha1, alpha2 (complex)",
       "alpha1, alpha2 not both 0; imaginary lambda: |lambda| < pi, or pi <= |lambda| < 2pi with alpha1 = 0 and "
       "mu = lambda(2m+1)/4",
       "lambda/sinh(lambda z/2) (alpha1 sinh(mu z)/mu + alpha2 cosh(mu z))"},
      {"Special1", "m (integer), alpha, beta (complex)", "alpha, beta not both 0; lambda = pi i, mu = (2m+1)lambda/4",
       "cos(pi(2m+1)z/4)/sin(pi z/2)"},
      {"Special2", "lambda, alpha, beta (complex)", "lambda != 0, alpha1 = mu = 0; imaginary lambda: |lambda| < pi",
       "1/sinh(lambda z/2)"},
      {"Special3", "beta (complex, nonzero), p = [p0, 0, p2]", "p'(0) = 0", "1/beta + 1/z"},
      {"Special4", "p = [p0, p1, p2], beta (complex)", "p and beta not both 0", "1/z"},
      {"C2Item1", "lambda, mu, alpha1, alpha2, n (integer)",
       "lambda, mu real or imaginary, lambda != 0; target (-1 + 2 pi i n/lambda, 1 + 2 pi i n/lambda)",
       "lambda/sinh(lambda z/2) (alpha1 sinh(mu z)/mu + alpha2 cosh(mu z))"},
      {"C2Item2", "lambda, alpha, beta, n (integer)",
       "beta imaginary, alpha real, lambda real or imaginary and nonzero; target shifted by 2 pi i n/lambda",
       "1/sinh(lambda z/2)"},
      {"C2Item3", "beta, b (real)", "beta imaginary and nonzero, b > 0; target (-b, b)", "1/beta + 1/z"},
      {"C2Item4", "beta, a, b (real)", "beta imaginary, a < b; target (a, b)", "1/z"},
  };
}

ImaginaryLambdaStatus imaginary_lambda_check(Cplx lambda, Cplx mu, Cplx alpha1) {
  ImaginaryLambdaStatus st;
  if (near_zero(lambda) || !near_imag(lambda)) {
    st.detail = "lambda not purely imaginary";
    return st;
  }
  st.applies = true;
  const double r = std::abs(lambda);
  const double tol = 1e-12;
  if (r < kPi - tol) {
    st.detail = "|lambda| < pi";
    return st;
  }
  if (r < 2.0 * kPi - tol) {
    const Cplx q = (4.0 * mu / lambda - 1.0) / 2.0;
    const bool quarter = std::abs(q.imag()) <= 1e-9 && std::abs(q.real() - std::round(q.real())) <= 1e-9;
    if (near_zero(alpha1) && quarter) {
      st.detail = "pi <= |lambda| < 2pi with alpha1 = 0 and mu = lambda(2m+1)/4";
      return st;
    }
    st.ok = false;
    st.detail = "pi <= |lambda| < 2pi requires alpha1 = 0 and mu = lambda(2m+1)/4";
    return st;
  }
  st.ok = false;
  st.detail = "imaginary lambda with |lambda| >= 2pi makes k singular on [-2, 2]";
  return st;
}

CommutingPair build_pair_unchecked(const PairCase& c) {
  return std::visit(
      overloaded{
          [&](const MainCase& m) {
            check_imaginary_lambda(m.lambda, m.mu, m.alpha1);
            return assemble(c, main_parts(m.lambda, m.mu, m.alpha1, m.alpha2), {}, false);
          },
          [&](const Special1Case& s) {
            if (near_zero(s.alpha) && near_zero(s.beta)) throw Error(ErrorCode::Degenerate, "alpha = beta = 0");
            const double w = kPi * (2.0 * static_cast<double>(s.m) + 1.0) / 4.0;
            Parts p;
            p.kernel.numerator = ep_scale(ExpPoly::cos(w), kI);
            p.kernel.denom = Denominator::sinh_half(kPi * kI);
            p.a = ExpPoly(std::vector<ExpTerm>{{kPi * kI, {s.alpha}}, {-kPi * kI, {s.beta}}, {0.0, {s.alpha + s.beta}}});
            p.b = ep_diff(p.a);
            const double q = (2.0 * s.m + 1.0) * (2.0 * s.m + 1.0) / 4.0 - 1.0;
            p.c = ep_scale(p.a, kPi * kPi / 4.0 * q);
            return assemble(c, std::move(p), {}, false);
          },
          [&](const Special2Case& s) {
            check_imaginary_lambda(s.lambda, 0.0, 0.0);
            return assemble(c, special2_parts(s.lambda, s.alpha, s.beta), {}, false);
          },
          [&](const Special3Case& s) {
            if (near_zero(s.beta)) throw Error(ErrorCode::ParameterDomain, "item 3 needs beta != 0");
            const auto pc = quadratic(s.p);
            if (std::abs(pc[1]) > 1e-14 * std::max({1.0, std::abs(pc[0]), std::abs(pc[2])}))
              throw Error(ErrorCode::ParameterDomain, "item 3 needs p'(0) = 0");
            const ExpPoly p = ExpPoly::polynomial(pc);
            if (p.empty()) throw Error(ErrorCode::Degenerate, "p = 0 gives L = 0");
            Parts parts;
            parts.kernel.numerator = ExpPoly::polynomial({1.0, 1.0 / s.beta});
            parts.kernel.denom = Denominator::z();
            parts.a = ep_mul(y_squared_minus_one(), p);
            const ExpPoly p1 = ep_diff(p);
            parts.b = ep_add(ep_diff(parts.a),
                             ep_sub(ep_scale(ep_mul(ExpPoly::monomial(1), p1), s.beta), ep_scale(ep_diff(p1), s.beta)));
            parts.c = ep_scale(p1, s.beta);
            return assemble(c, std::move(parts), {}, false);
          },
          [&](const Special4Case& s) {
            const ExpPoly p = ExpPoly::polynomial(quadratic(s.p));
            if (p.empty() && near_zero(s.beta)) throw Error(ErrorCode::Degenerate, "p = 0 and beta = 0");
            Parts parts;
            parts.kernel.numerator = ExpPoly::constant(1.0);
            parts.kernel.denom = Denominator::z();
            parts.a = ep_mul(y_squared_minus_one(), p);
            parts.b = ep_add(ep_diff(parts.a), ep_scale(y_squared_minus_one(), s.beta));
            const ExpPoly y = ExpPoly::monomial(1);
            parts.c = ep_add(ep_mul(y, ep_diff(p)), ep_scale(y, s.beta));
            return assemble(c, std::move(parts), {}, false);
          },
          [&](const C2Item1Case& s) {
            if (near_zero(s.lambda)) throw Error(ErrorCode::ParameterDomain, "item 1 needs lambda != 0");
            if (!(near_real(s.lambda) || near_imag(s.lambda)) || !(near_real(s.mu) || near_imag(s.mu)))
              throw Error(ErrorCode::ParameterDomain, "item 1 needs lambda, mu real or imaginary");
            check_imaginary_lambda(s.lambda, s.mu, s.alpha1);
            const Cplx shift = 2.0 * kPi * kI * static_cast<double>(s.n) / s.lambda;
            return assemble(c, main_parts(s.lambda, s.mu, s.alpha1, s.alpha2), {-1.0 + shift, 1.0 + shift}, true);
          },
          [&](const C2Item2Case& s) {
            if (near_zero(s.lambda)) throw Error(ErrorCode::ParameterDomain, "item 2 needs lambda != 0");
            if (!(near_real(s.lambda) || near_imag(s.lambda)))
              throw Error(ErrorCode::ParameterDomain, "item 2 needs lambda real or imaginary");
            if (!near_imag(s.beta)) throw Error(ErrorCode::ParameterDomain, "item 2 needs beta imaginary");
            if (!near_real(s.alpha)) throw Error(ErrorCode::ParameterDomain, "item 2 needs alpha real");
            check_imaginary_lambda(s.lambda, 0.0, 0.0);
            const Cplx shift = 2.0 * kPi * kI * static_cast<double>(s.n) / s.lambda;
            return assemble(c, special2_parts(s.lambda, s.alpha.real(), kI * s.beta.imag()),
                            {-1.0 + shift, 1.0 + shift}, true);
          },
          [&](const C2Item3Case& s) {
            if (!near_imag(s.beta) || near_zero(s.beta))
              throw Error(ErrorCode::ParameterDomain, "item 3 needs beta imaginary and nonzero");
            if (!(s.b > 0.0) || !std::isfinite(s.b)) throw Error(ErrorCode::ParameterDomain, "item 3 needs b > 0");
            const Cplx beta = kI * s.beta.imag();
            Parts parts;
            parts.kernel.numerator = ExpPoly::polynomial({1.0, 1.0 / beta});
            parts.kernel.denom = Denominator::z();
            parts.a = ep_mul(y_squared_minus_one(), ExpPoly::polynomial({-s.b * s.b, 0.0, 1.0}));
            parts.b = ep_add(ep_diff(parts.a), ep_scale(y_squared_minus_one(), 2.0 * beta));
            parts.c = ExpPoly::monomial(1, 2.0 * beta);
            return assemble(c, std::move(parts), {-s.b, s.b}, true);
          },
          [&](const C2Item4Case& s) {
            if (!near_imag(s.beta)) throw Error(ErrorCode::ParameterDomain, "item 4 needs beta imaginary");
            if (!(s.a < s.b) || !std::isfinite(s.a) || !std::isfinite(s.b))
              throw Error(ErrorCode::ParameterDomain, "item 4 needs real a < b");
            const Cplx beta = kI * s.beta.imag();
            Parts parts;
            parts.kernel.numerator = ExpPoly::constant(1.0);
            parts.kernel.denom = Denominator::z();
            parts.a = ep_mul(y_squared_minus_one(), ExpPoly::polynomial({s.a * s.b, -(s.a + s.b), 1.0}));
            parts.b = ep_add(ep_diff(parts.a), ep_scale(y_squared_minus_one(), beta));
            parts.c = ExpPoly::polynomial({0.0, beta - s.a - s.b, 2.0});
            return assemble(c, std::move(parts), {s.a, s.b}, true);
          },
      },
      c);
}

CommutingPair build_pair(const PairCase& c, Cplx tau) {
  CommutingPair pair = build_pair_unchecked(c);
  if (tau != Cplx(0.0)) pair = gauge_transform(pair, tau);
  const GridResidual g = grid_residual(pair);
  if (!(g.relative <= kCertifyTol))
    throw Error(ErrorCode::Internal, case_name(c) + " pair failed its residue certificate: " + std::to_string(g.relative));
  return pair;
}

DiffOp gauge_op(const DiffOp& op, Cplx tau) {
  DiffOp out = op;
  out.b = ep_sub(op.b, ep_scale(op.a, 2.0 * tau));
  out.c = ep_add(ep_sub(op.c, ep_scale(op.b, tau)), ep_scale(op.a, tau * tau));
  return out;
}

bool gauge_keeps_self_adjoint(const PairCase& c, Cplx tau) {
  return std::visit(
      overloaded{
          // b - 2 tau a = alpha a0' + (beta - 2 alpha tau) a0 fixes Re beta = 2 alpha Re tau;
          // the c condition then leaves either tau imaginary or beta real
          [&](const C2Item2Case& s) {
            const double tol = kLimitTol * std::max(1.0, std::abs(s.beta) + std::abs(s.alpha * tau));
            return near_real(s.alpha) && std::abs(s.beta.real() - 2.0 * s.alpha.real() * tau.real()) <= tol &&
                   (std::abs(tau.real()) <= kLimitTol || std::abs(s.beta.imag()) <= tol);
          },
          [&](const C2Item1Case&) { return std::abs(tau.real()) <= kLimitTol; },
          [&](const C2Item3Case&) { return std::abs(tau.real()) <= kLimitTol; },
          [&](const C2Item4Case&) { return std::abs(tau.real()) <= kLimitTol; },
          [](const auto&) { return false; },
      },
      c);
}

CommutingPair gauge_transform(const CommutingPair& p, Cplx tau) {
  if (tau == Cplx(0.0)) return p;
  CommutingPair out = p;
  out.kernel.tau = p.kernel.tau + tau;
  out.op = gauge_op(p.op, tau);
  if (p.opTarget) out.opTarget = gauge_op(*p.opTarget, tau);
  return out;
}

std::vector<EndpointResidual> boundary_residuals(const DiffOp& op) {
  std::vector<EndpointResidual> out;
  const ExpPoly ap = ep_diff(op.a);
  for (Cplx e : {op.segment.a, op.segment.b}) {
    out.push_back({e, std::abs(ep_eval(op.a, e)), std::abs(ep_eval(op.b, e) - ep_eval(ap, e))});
  }
  return out;
}

ValidationReport validate_pair(const CommutingPair& p) {
  ValidationReport r;
  r.boundary = boundary_residuals(p.op);
  if (p.opTarget) {
    auto t = boundary_residuals(*p.opTarget);
    r.boundary.insert(r.boundary.end(), t.begin(), t.end());
  }
  // b = a' is needed only where the integration by parts happens (source segment)
  for (size_t i = 0; i < r.boundary.size(); ++i) {
    const auto& e = r.boundary[i];
    if (!(e.a_abs <= kBoundaryTol)) r.boundaryOk = false;
    if (i < 2 && !(e.b_abs <= kBoundaryTol)) r.boundaryOk = false;
  }

  r.imaginaryLambda = std::visit(overloaded{
                             [](const MainCase& m) { return imaginary_lambda_check(m.lambda, m.mu, m.alpha1); },
                             [](const C2Item1Case& m) { return imaginary_lambda_check(m.lambda, m.mu, m.alpha1); },
                             [](const Special1Case&) { return imaginary_lambda_check(kPi * kI, kPi * kI / 4.0, 0.0); },
                             [](const Special2Case& s) { return imaginary_lambda_check(s.lambda, 0.0, 0.0); },
                             [](const C2Item2Case& s) { return imaginary_lambda_check(s.lambda, 0.0, 0.0); },
                             [](const auto&) { return ImaginaryLambdaStatus{}; },
                         },
                         p.kase);

  const KernelSpec& k = p.kernel;
  switch (k.denom.kind) {
    case DenomKind::One: r.nontrivial = false; break;
    case DenomKind::Z: {
      // N/z is an exponential polynomial exactly when every term of N vanishes at 0
      bool divisible = true;
      const ExpPoly n = k.numerator;
      for (const auto& t : n.terms())
        if (std::abs(t.poly[0]) > 1e-14 * std::max(1.0, n.max_coeff())) divisible = false;
      r.nontrivial = !divisible;
      break;
    }
    case DenomKind::SinhHalf: {
      bool anyPole = false;
      for (long n = -16; n <= 16 && !anyPole; ++n) anyPole = is_nonremovable_pole(k, k.denom.zero(n));
      r.nontrivial = anyPole;
      break;
    }
  }
  r.poleOrderAtZero = (k.denom.kind != DenomKind::One && is_nonremovable_pole(k, 0.0)) ? 1 : 0;
  return r;
}

std::vector<Cplx> zeros_on_line(const ExpPoly& f, Cplx p0, Cplx p1, double tmin, double tmax) {
  std::vector<Cplx> out;
  if (f.empty()) return out;
  const ExpPoly fp = ep_diff(f);
  const Cplx dir = p1 - p0;
  const int samples = 800;
  std::vector<double> mag(samples + 1);
  for (int i = 0; i <= samples; ++i) mag[i] = std::abs(ep_eval(f, p0 + (tmin + (tmax - tmin) * i / samples) * dir));
  for (int i = 0; i <= samples; ++i) {
    const bool left = i == 0 || mag[i] <= mag[i - 1];
    const bool right = i == samples || mag[i] <= mag[i + 1];
    if (!(left && right)) continue;
    Cplx y = p0 + (tmin + (tmax - tmin) * i / samples) * dir;
    for (int it = 0; it < 100; ++it) {
      const Cplx d = ep_eval(fp, y);
      if (d == Cplx(0.0)) break;
      const Cplx step = ep_eval(f, y) / d;
      y -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(y))) break;
    }
    const Cplx t = (y - p0) / dir;
    if (std::abs(t.imag()) * std::abs(dir) > 1e-8) continue;
    if (t.real() < tmin - 1e-9 || t.real() > tmax + 1e-9) continue;
    if (std::abs(ep_eval(f, y)) > 1e-9 * std::max(1.0, ep_eval_abs(f, y))) continue;
    const Cplx snapped = p0 + t.real() * dir;
    if (std::none_of(out.begin(), out.end(), [&](Cplx o) { return std::abs(o - snapped) < 1e-7; }))
      out.push_back(snapped);
  }
  std::sort(out.begin(), out.end(), [](Cplx x, Cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
  return out;
}

RegularityReport classify_regularity(const CommutingPair& p) {
  if (!p.opTarget) throw Error(ErrorCode::InvalidArgument, "regularity needs a two-segment pair");
  RegularityReport r;
  const Segment& src = p.op.segment;
  const Segment& tgt = p.opTarget->segment;
  const double radius = std::max({std::abs(tgt.a), std::abs(tgt.b)}) + std::max(std::abs(src.a), std::abs(src.b)) +
                        std::abs(tgt.b - tgt.a) + 2.0;
  r.poles = kernel_poles(p.kernel, radius);
  for (Cplx z : r.poles) {
    r.logSingular.push_back(z + src.a);
    r.logSingular.push_back(z + src.b);
  }
  r.zerosOfA = zeros_on_line(p.opTarget->a, tgt.a, tgt.b, -1.0, 2.0);
  auto is_log = [&](Cplx y) {
    return std::any_of(r.logSingular.begin(), r.logSingular.end(), [&](Cplx s) { return std::abs(s - y) < 1e-8; });
  };
  for (Cplx y : r.zerosOfA)
    if (!is_log(y)) r.removable.push_back(y);
  auto in_removable = [&](Cplx e) {
    return std::any_of(r.removable.begin(), r.removable.end(), [&](Cplx s) { return std::abs(s - e) < 1e-7; });
  };
  const bool ra = in_removable(tgt.a), rb = in_removable(tgt.b);
  r.verdict = (ra && rb) ? Regularity::Regular : Regularity::Singular;
  if (r.verdict == Regularity::Regular) {
    r.witnesses = {tgt.a, tgt.b};
  } else {
    if (!ra) r.witnesses.push_back(tgt.a);
    if (!rb) r.witnesses.push_back(tgt.b);
  }
  return r;
}

}  // namespace commutant
