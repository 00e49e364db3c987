#include "commutant/kernel.hpp"

#include <cmath>
#include <numbers>

#include "commutant/error.hpp"

namespace commutant {

namespace {

const Cplx kI(0.0, 1.0);

}  // namespace

Denominator Denominator::sinh_half(Cplx lambda) {
  if (std::abs(lambda) == 0.0) throw Error(ErrorCode::ParameterDomain, "sinh(lambda z/2) needs lambda != 0");
  return {DenomKind::SinhHalf, lambda};
}

ExpPoly Denominator::as_exppoly() const {
  switch (kind) {
    case DenomKind::One: return ExpPoly::constant(1.0);
    case DenomKind::Z: return ExpPoly::monomial(1);
    case DenomKind::SinhHalf: return ExpPoly::sinh(lambda / 2.0);
  }
  return {};
}

Cplx Denominator::zero(long n) const {
  if (kind == DenomKind::SinhHalf) return 2.0 * std::numbers::pi * kI * static_cast<double>(n) / lambda;
  return 0.0;
}

long Denominator::nearest_index(Cplx z) const {
  if (kind != DenomKind::SinhHalf) return 0;
  Cplx t = z * lambda / (2.0 * std::numbers::pi * kI);
  return std::lround(t.real());
}

ExpPoly KernelSpec::full_numerator() const {
  if (tau == Cplx(0.0)) return numerator;
  return ep_mul(ExpPoly::exponential(tau), numerator);
}

KernelEvaluator::KernelEvaluator(const KernelSpec& k) : k_(k) {
  g_.push_back(k.full_numerator());
  for (int j = 1; j < kSeriesTerms; ++j) g_.push_back(ep_diff(g_.back()));
  d_.push_back(k.denom.as_exppoly());
  for (int j = 1; j < 3; ++j) d_.push_back(ep_diff(d_.back()));
  if (k.denom.kind == DenomKind::SinhHalf)
    radius_ = std::min(kSeriesRadius, 0.25 * 2.0 * std::numbers::pi / std::abs(k.denom.lambda));
}

const LocalSeries& KernelEvaluator::cached_series(long n) const {
  auto it = cache_.find(n);
  if (it == cache_.end()) it = cache_.emplace(n, local_series(k_.denom.zero(n), kSeriesTerms)).first;
  return it->second;
}

std::vector<Cplx> KernelEvaluator::numerator_taylor(Cplx z0, int terms) const {
  std::vector<Cplx> g(terms);
  double fact = 1.0;
  for (int j = 0; j < terms; ++j) {
    if (j > 0) fact *= j;
    ExpPoly dj = j < static_cast<int>(g_.size()) ? g_[j] : ep_diff(g_.back(), j - static_cast<int>(g_.size()) + 1);
    g[j] = ep_eval(dj, z0) / fact;
  }
  return g;
}

// Taylor coefficients of D about its n-th zero, taken exactly.
std::vector<Cplx> KernelEvaluator::denominator_taylor(long n, int terms) const {
  std::vector<Cplx> d(terms, 0.0);
  if (k_.denom.kind == DenomKind::Z) {
    if (terms > 1) d[1] = 1.0;
    return d;
  }
  // sinh(lambda(z0+h)/2) = cosh(lambda z0/2) sinh(lambda h/2) with cosh(i pi n) = (-1)^n
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const Cplx half = k_.denom.lambda / 2.0;
  Cplx pw = 1.0;
  double fact = 1.0;
  for (int j = 0; j < terms; ++j) {
    if (j > 0) {
      pw *= half;
      fact *= j;
    }
    if (j % 2 == 1) d[j] = sign * pw / fact;
  }
  return d;
}

LocalSeries KernelEvaluator::local_series(Cplx z0, int terms) const {
  LocalSeries s;
  s.center = z0;
  const long n = k_.denom.nearest_index(z0);
  const std::vector<Cplx> g = numerator_taylor(z0, terms);
  const std::vector<Cplx> d = denominator_taylor(n, terms + 1);
  // k = G/(h E) with E_j = d_{j+1}
  std::vector<Cplx> q(terms, 0.0);
  const Cplx e0 = d[1];
  for (int j = 0; j < terms; ++j) {
    Cplx acc = g[j];
    for (int i = 1; i <= j; ++i) acc -= d[i + 1] * q[j - i];
    q[j] = acc / e0;
  }
  const double ref = std::max(ep_eval_abs(g_[0], z0), 1e-300);
  s.pole = std::abs(g[0]) > kRemovableTol * ref;
  if (!s.pole) q[0] = 0.0;
  s.q = std::move(q);
  return s;
}

std::array<Cplx, 3> KernelEvaluator::jet_direct(Cplx z) const {
  const Cplx G = ep_eval(g_[0], z), G1 = ep_eval(g_[1], z), G2 = ep_eval(g_[2], z);
  if (k_.denom.kind == DenomKind::One) return {G, G1, G2};
  const Cplx D = ep_eval(d_[0], z), D1 = ep_eval(d_[1], z), D2 = ep_eval(d_[2], z);
  if (D == Cplx(0.0)) throw Error(ErrorCode::PoleHit, "denominator vanishes");
  const Cplx k0 = G / D;
  const Cplx k1 = (G1 - k0 * D1) / D;
  const Cplx k2 = (G2 - 2.0 * k1 * D1 - k0 * D2) / D;
  return {k0, k1, k2};
}

std::array<Cplx, 3> KernelEvaluator::jet(Cplx z) const {
  if (!is_finite(z)) throw Error(ErrorCode::InvalidArgument, "non-finite kernel argument");
  if (k_.denom.kind == DenomKind::One) return jet_direct(z);
  const Cplx z0 = k_.denom.zero(k_.denom.nearest_index(z));
  const Cplx h = z - z0;
  if (std::abs(h) >= radius_) return jet_direct(z);
  const LocalSeries& s = cached_series(k_.denom.nearest_index(z));
  if (s.pole && std::abs(h) < kPoleHitRadius) throw Error(ErrorCode::PoleHit, "kernel evaluated at a pole");
  // k = sum_j q_j h^{j-1}
  Cplx k0 = 0.0, k1 = 0.0, k2 = 0.0;
  for (int j = kSeriesTerms - 1; j >= 1; --j) {
    k0 = k0 * h + s.q[j];
  }
  for (int j = kSeriesTerms - 1; j >= 2; --j) k1 = k1 * h + static_cast<double>(j - 1) * s.q[j];
  for (int j = kSeriesTerms - 1; j >= 3; --j) k2 = k2 * h + static_cast<double>((j - 1) * (j - 2)) * s.q[j];
  if (s.pole) {
    k0 += s.q[0] / h;
    k1 -= s.q[0] / (h * h);
    k2 += 2.0 * s.q[0] / (h * h * h);
  }
  return {k0, k1, k2};
}

Cplx KernelEvaluator::smooth_eval(Cplx z, Cplx z0) const {
  const Cplx h = z - z0;
  const LocalSeries& s = cached_series(k_.denom.nearest_index(z0));
  if (std::abs(h) >= radius_) return jet(z)[0] - s.q[0] / h;
  Cplx acc = 0.0;
  for (int j = kSeriesTerms - 1; j >= 1; --j) acc = acc * h + s.q[j];
  return acc;
}

std::array<Cplx, 3> kernel_jet(const KernelSpec& k, Cplx z) { return KernelEvaluator(k).jet(z); }
std::array<Cplx, 3> kernel_jet_direct(const KernelSpec& k, Cplx z) { return KernelEvaluator(k).jet_direct(z); }
Cplx kernel_eval(const KernelSpec& k, Cplx z) { return kernel_jet(k, z)[0]; }

LocalSeries kernel_local_series(const KernelSpec& k, Cplx z0, int terms) {
  return KernelEvaluator(k).local_series(z0, terms);
}

LaurentData kernel_laurent(const KernelSpec& k, int order) {
  if (order < 0 || order > 8) throw Error(ErrorCode::InvalidArgument, "Laurent order must lie in [0, 8]");
  LaurentData out;
  std::vector<Cplx> q(order + 2, 0.0);
  if (k.denom.kind == DenomKind::One) {
    const ExpPoly g = k.full_numerator();
    ExpPoly dj = g;
    double fact = 1.0;
    for (int j = 0; j <= order; ++j) {
      if (j > 0) {
        dj = ep_diff(dj);
        fact *= j;
      }
      q[j + 1] = ep_eval(dj, 0.0) / fact;
    }
  } else {
    q = KernelEvaluator(k).local_series(0.0, order + 2).q;
  }
  out.pole = q[0];
  out.plain = q;
  double fact = 1.0;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) fact *= n;
    out.factorial.push_back(fact * q[n + 1]);
  }
  return out;
}

std::vector<Cplx> kernel_poles(const KernelSpec& k, double radius) {
  std::vector<Cplx> out;
  if (k.denom.kind == DenomKind::One) return out;
  KernelEvaluator ev(k);
  if (k.denom.kind == DenomKind::Z) {
    if (ev.local_series(0.0, 2).pole) out.push_back(0.0);
    return out;
  }
  const long nmax = static_cast<long>(std::floor(radius * std::abs(k.denom.lambda) / (2.0 * std::numbers::pi)));
  for (long n = -nmax; n <= nmax; ++n) {
    const Cplx z0 = k.denom.zero(n);
    if (std::abs(z0) > radius) continue;
    if (ev.local_series(z0, 2).pole) out.push_back(z0);
  }
  return out;
}

bool is_nonremovable_pole(const KernelSpec& k, Cplx z0) {
  if (k.denom.kind == DenomKind::One) return false;
  if (std::abs(k.denom.zero(k.denom.nearest_index(z0)) - z0) > 1e-6 * std::max(1.0, std::abs(z0))) return false;
  return KernelEvaluator(k).local_series(z0, 2).pole;
}

Cplx kernel_residue(const KernelSpec& k, Cplx z0) {
  if (k.denom.kind == DenomKind::One) return 0.0;
  return KernelEvaluator(k).local_series(z0, 2).q[0];
}

Cplx kernel_smooth_eval(const KernelSpec& k, Cplx z, Cplx z0) { return KernelEvaluator(k).smooth_eval(z, z0); }

}  // namespace commutant
