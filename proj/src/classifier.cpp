#include "commutant/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "commutant/error.hpp"

namespace commutant {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

double max_abs(const std::vector<Cplx>& v) {
  double m = 0.0;
  for (Cplx x : v) m = std::max(m, std::abs(x));
  return m;
}

std::string fmt(Cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)", z.real(), z.imag());
  return buf;
}

// Sum of ExpPoly terms with a running scale for relative zero tests.
struct Accum {
  ExpPoly sum;
  double scale = 0.0;
  void add(const ExpPoly& f, Cplx coef) {
    if (coef == Cplx(0.0)) return;
    sum = sum + coef * f;
    scale = std::max(scale, std::abs(coef) * f.max_coeff());
  }
};

std::vector<ExpPoly> derivatives(const ExpPoly& f, int count) {
  std::vector<ExpPoly> out{f};
  for (int i = 1; i < count; ++i) out.push_back(ep_diff(out.back()));
  return out;
}

}  // namespace

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::RegularCommuting: return "RegularCommuting";
    case Verdict::SingularCandidate: return "SingularCandidate";
    case Verdict::Trivial: return "Trivial";
    case Verdict::NoCommutant: return "NoCommutant";
  }
  return "?";
}

TaylorData to_convention(const TaylorData& d, Convention conv) {
  if (d.convention == conv) return d;
  TaylorData out = d;
  out.convention = conv;
  for (size_t j = 0; j < d.coeffs.size(); ++j) {
    const double f = factorial(static_cast<int>(j));
    out.coeffs[j] = conv == Convention::FactorialNormalized ? d.coeffs[j] * f : d.coeffs[j] / f;
  }
  return out;
}

TaylorData taylor_data(const KernelSpec& k, Convention conv, int count) {
  if (count < 1 || count > 9) throw Error(ErrorCode::InvalidArgument, "coefficient count must lie in [1, 9]");
  const LaurentData ld = kernel_laurent(k, std::max(count, 1));
  TaylorData d;
  d.convention = Convention::PlainPowers;
  d.poleCoeff = ld.pole;
  // plain[j] multiplies z^{j-1}; regular data starts at z^0.
  const int offset = ld.pole == Cplx(0.0) ? 1 : 0;
  for (int j = 0; j < count; ++j) d.coeffs.push_back(ld.plain[j + offset]);
  return to_convention(d, conv);
}

GaugeResult gauge_normalize(const TaylorData& d) {
  if (d.coeffs.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least k0 and k1");
  const double ref = max_abs(d.coeffs);
  if (!d.singular() && (ref == 0.0 || std::abs(d.coeffs[0]) <= kCoeffTol * ref))
    throw Error(ErrorCode::ZeroLeading, "k0 = 0 forces k = 0 near the origin");
  GaugeResult g;
  g.tau = -d.coeffs[1] / d.coeffs[0];
  g.data = d;
  const int n = static_cast<int>(d.coeffs.size());
  for (int i = 0; i < n; ++i) {
    Cplx acc = 0.0;
    for (int m = 0; m <= i; ++m) {
      const Cplx tp = std::pow(g.tau, m);
      acc += d.convention == Convention::FactorialNormalized ? binom(i, m) * d.coeffs[i - m] * tp
                                                              : d.coeffs[i - m] * tp / factorial(m);
    }
    g.data.coeffs[i] = acc;
  }
  g.data.coeffs[1] = 0.0;
  return g;
}

DiffOp regular_operator(Cplx lambda2, Cplx nu) {
  DiffOp L;
  if (std::abs(lambda2) <= 1e-12 * std::max(1.0, std::abs(nu))) {
    L.a = ExpPoly::polynomial({-1.0, 0.0, 1.0});
  } else {
    const Cplx lambda = std::sqrt(lambda2);
    L.a = ExpPoly::cosh(lambda) - ExpPoly::constant(std::cosh(lambda));
  }
  L.b = ep_diff(L.a);
  L.c = nu * L.a;
  return L;
}

double verify_candidate(const TaylorData& d, const DiffOp& L, int maxOrder) {
  const int size = static_cast<int>(d.coeffs.size());
  double worstAbs = 0.0, worstScale = 0.0;
  if (!d.singular()) {
    const std::vector<Cplx> k = to_convention(d, Convention::FactorialNormalized).coeffs;
    const int top = maxOrder < 0 ? size - 2 : std::min(maxOrder, size - 2);
    const auto A = derivatives(L.a, top + 3), B = derivatives(L.b, top + 2), C = derivatives(L.c, top + 2);
    for (int n = 0; n <= top; ++n) {
      Accum acc;
      acc.add(A[1], 2.0 * k[n + 1]);
      acc.add(B[1], k[n]);
      acc.add(A[2], -k[n]);
      for (int j = 0; j < n; ++j) {
        const double c = binom(n, j);
        acc.add(A[n - j], c * k[j + 2]);
        acc.add(B[n - j], c * k[j + 1]);
        acc.add(C[n - j], c * k[j]);
      }
      worstAbs = std::max(worstAbs, acc.sum.max_coeff());
      worstScale = std::max(worstScale, acc.scale);
    }
  } else {
    const std::vector<Cplx> q = to_convention(d, Convention::PlainPowers).coeffs;
    const int top = maxOrder < 0 ? size : std::min(maxOrder, size);
    const auto A = derivatives(L.a, top + 2), B = derivatives(L.b, top + 2), C = derivatives(L.c, top + 2);
    // z^3 k'' = sum (j-1)(j-2) q_j z^j, z^3 k' = sum (j-1) q_j z^{j+1}, z^3 k = sum q_j z^{j+2}
    for (int m = 0; m <= top; ++m) {
      Accum acc;
      for (int i = 1; i <= m; ++i) {
        const double fi = 1.0 / factorial(i);
        int j = m - i;
        if (j < size) acc.add(A[i], fi * static_cast<double>((j - 1) * (j - 2)) * q[j]);
        j = m - i - 1;
        if (j >= 0 && j < size) acc.add(B[i], fi * static_cast<double>(j - 1) * q[j]);
        j = m - i - 2;
        if (j >= 0 && j < size) acc.add(C[i], fi * q[j]);
      }
      if (m >= 1 && m - 1 < size) acc.add(A[1], 2.0 * static_cast<double>(m - 2) * q[m - 1]);
      if (m >= 2 && m - 2 < size) {
        acc.add(B[1], q[m - 2]);
        acc.add(A[2], -q[m - 2]);
      }
      worstAbs = std::max(worstAbs, acc.sum.max_coeff());
      worstScale = std::max(worstScale, acc.scale);
    }
  }
  if (worstScale == 0.0) return worstAbs;
  return worstAbs / worstScale;
}

ClassificationResult classify_regular(const TaylorData& input) {
  if (input.convention != Convention::FactorialNormalized)
    throw Error(ErrorCode::ConventionMismatch, "regular classification expects factorial-normalized coefficients");
  if (input.singular()) throw Error(ErrorCode::ConventionMismatch, "data has a pole; use the singular classifier");
  if (input.coeffs.size() < 5) throw Error(ErrorCode::InvalidArgument, "need k0..k4");

  ClassificationResult r;
  TaylorData d = input;
  if (d.coeffs[1] != Cplx(0.0)) {
    const GaugeResult g = gauge_normalize(d);
    d = g.data;
    r.gaugeApplied = g.tau;
  }
  const std::vector<Cplx>& k = d.coeffs;
  const double tol = kCoeffTol * max_abs(k);
  if (std::abs(k[0]) <= tol) throw Error(ErrorCode::ZeroLeading, "k0 = 0 forces k = 0 near the origin");

  r.nu = -3.0 * k[2] / k[0];
  if (std::abs(k[3]) > tol) {
    r.verdict = Verdict::NoCommutant;
    r.diagnostics.push_back("k3 = " + fmt(k[3]) + " must vanish");
    return r;
  }
  if (std::abs(k[2]) <= tol) {
    for (size_t j = 4; j < k.size(); ++j)
      if (std::abs(k[j]) > tol) {
        r.verdict = Verdict::NoCommutant;
        r.diagnostics.push_back("k2 = 0 forces k" + std::to_string(j) + " = 0");
        return r;
      }
    r.verdict = Verdict::Trivial;
    r.nu = 0.0;
    r.diagnostics.push_back("k2 = 0: all higher coefficients vanish, k is trivial");
    return r;
  }
  r.lambda2 = -(5.0 * k[0] * k[4] - 9.0 * k[2] * k[2]) / (k[0] * k[2]);
  r.mu2 = r.lambda2 / 4.0 - r.nu;
  r.diagnostics.push_back("a''' - " + fmt(r.lambda2) + " a' = 0, b = a', c = " + fmt(r.nu) + " a");

  const DiffOp L = regular_operator(r.lambda2, r.nu);
  r.consistencyResidual = verify_candidate(d, L, -1);
  if (r.consistencyResidual > kConsistencyTol) {
    r.verdict = Verdict::NoCommutant;
    r.diagnostics.push_back("higher-order relation fails for the recovered operator");
    return r;
  }
  // sinh(mu z)/sinh(lambda z/2) is an exponential polynomial when 2 mu/lambda is a
  // nonzero integer: every pole cancels and K has finite rank.
  if (std::abs(r.lambda2) > kConsistencyTol) {
    const Cplx q = 4.0 * r.mu2 / r.lambda2;
    const double n = std::round(std::sqrt(std::abs(q)));
    if (n >= 1.0 && std::abs(q - n * n) <= kConsistencyTol * n * n) {
      r.verdict = Verdict::Trivial;
      r.diagnostics.push_back("2 mu/lambda = " + std::to_string(static_cast<int>(n)) +
                              ": the kernel is an exponential polynomial");
      return r;
    }
  }
  r.verdict = Verdict::RegularCommuting;
  return r;
}

ClassificationResult classify_singular(const TaylorData& input) {
  if (input.convention != Convention::PlainPowers)
    throw Error(ErrorCode::ConventionMismatch, "singular classification expects plain-power coefficients");
  if (!input.singular()) throw Error(ErrorCode::ConventionMismatch, "data has no pole; use the regular classifier");
  if (input.coeffs.size() < 4) throw Error(ErrorCode::InvalidArgument, "need k0..k3");

  ClassificationResult r;
  const GaugeResult g = gauge_normalize(input);
  r.gaugeApplied = g.tau;
  std::vector<Cplx> k = g.data.coeffs;
  const Cplx k0 = k[0];
  for (Cplx& x : k) x /= k0;
  const double tol = kCoeffTol * max_abs(k);

  r.alpha1 = -1080.0 * k[3];
  r.verdict = Verdict::SingularCandidate;
  r.constraints.push_back("c = -a''/3 - 2*" + fmt(k[2]) + "*a + b'/2 + const");
  r.constraints.push_back("b''' = a'''' + 24*" + fmt(k[2]) + "*a'' - 72*" + fmt(k[3]) + "*a' - 24*" + fmt(k[2]) +
                          "*b'");
  if (std::abs(k[3]) <= tol) {
    r.caseAB = CaseAB::A;
    r.alpha1 = 0.0;
    r.diagnostics.push_back("a'''' + beta1 a'' + beta2 a = beta0");
  } else {
    r.caseAB = CaseAB::B;
    r.diagnostics.push_back("a^(6) + beta3 a'''' + beta1 a'' + beta2 a = beta0");
  }
  r.diagnostics.push_back("residue rescaled by 1/" + fmt(k0));
  return r;
}

ClassificationResult classify(const TaylorData& d) {
  if (d.singular()) return classify_singular(to_convention(d, Convention::PlainPowers));
  return classify_regular(to_convention(d, Convention::FactorialNormalized));
}

double fit_kernel_ode(const KernelSpec& k, Cplx lambda, Cplx nu, const std::vector<Cplx>& grid) {
  KernelEvaluator ev(k);
  const bool flat = std::abs(lambda) <= 1e-12;
  // u = k sinh(lambda z/2) (or z k) is exactly the numerator when the denominator matches.
  const bool exactU = flat ? k.denom.kind == DenomKind::Z
                           : k.denom.kind == DenomKind::SinhHalf && std::abs(k.denom.lambda - lambda) <= 1e-14;
  const ExpPoly u = k.full_numerator();
  const ExpPoly u2 = ep_diff(u, 2);
  const Cplx shift = nu - lambda * lambda / 4.0;
  double worst = 0.0;
  for (Cplx z : grid) {
    const auto j = ev.jet(z);
    Cplx r;
    double s;
    if (flat) {
      r = z * j[2] + 2.0 * j[1] + nu * z * j[0];
      s = std::abs(z * j[2]) + 2.0 * std::abs(j[1]) + std::abs(nu * z * j[0]);
    } else {
      const Cplx ct = std::cosh(lambda * z / 2.0) / std::sinh(lambda * z / 2.0);
      r = j[2] + lambda * ct * j[1] + nu * j[0];
      s = std::abs(j[2]) + std::abs(lambda * ct * j[1]) + std::abs(nu * j[0]);
    }
    worst = std::max(worst, std::abs(r) / std::max(s, 1e-300));

    Cplx uv, uvv;
    if (exactU) {
      uv = ep_eval(u, z);
      uvv = ep_eval(u2, z);
    } else if (flat) {
      uv = z * j[0];
      uvv = z * j[2] + 2.0 * j[1];
    } else {
      const Cplx sh = std::sinh(lambda * z / 2.0), ch = std::cosh(lambda * z / 2.0);
      uv = j[0] * sh;
      uvv = j[2] * sh + lambda * ch * j[1] + lambda * lambda / 4.0 * sh * j[0];
    }
    const Cplx ru = uvv + shift * uv;
    const double su = std::abs(uvv) + std::abs(shift * uv);
    worst = std::max(worst, std::abs(ru) / std::max(su, 1e-300));
  }
  return worst;
}

}  // namespace commutant
