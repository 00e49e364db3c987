#include "commutant/expalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "commutant/error.hpp"

namespace commutant {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParameterDomain: return "ParameterDomain";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DegreeOverflow: return "DegreeOverflow";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::ZeroLeading: return "ZeroLeading";
    case ErrorCode::ConventionMismatch: return "ConventionMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_finite(Cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Cplx make_cplx(double re, double im) {
  if (!std::isfinite(re) || !std::isfinite(im))
    throw Error(ErrorCode::ParameterDomain, "non-finite complex component");
  return {re, im};
}

namespace {

bool exponent_less(Cplx a, Cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Cplx horner(const std::vector<Cplx>& p, Cplx y) {
  Cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * y + *it;
  return acc;
}

std::vector<ExpTerm> canonical(std::vector<ExpTerm> in) {
  std::vector<ExpTerm> out;
  for (auto& t : in) {
    if (!is_finite(t.exponent)) throw Error(ErrorCode::ParameterDomain, "non-finite exponent");
    for (auto c : t.poly)
      if (!is_finite(c)) throw Error(ErrorCode::ParameterDomain, "non-finite coefficient");
    auto hit = std::find_if(out.begin(), out.end(), [&](const ExpTerm& o) {
      return std::abs(o.exponent - t.exponent) <= kMergeTol;
    });
    if (hit == out.end()) {
      out.push_back(std::move(t));
    } else {
      if (hit->poly.size() < t.poly.size()) hit->poly.resize(t.poly.size(), 0.0);
      for (size_t j = 0; j < t.poly.size(); ++j) hit->poly[j] += t.poly[j];
    }
  }
  for (auto& t : out)
    while (!t.poly.empty() && t.poly.back() == Cplx(0.0)) t.poly.pop_back();
  out.erase(std::remove_if(out.begin(), out.end(), [](const ExpTerm& t) { return t.poly.empty(); }),
            out.end());
  for (auto& t : out)
    if (static_cast<int>(t.poly.size()) - 1 > kMaxDegree)
      throw Error(ErrorCode::DegreeOverflow, "polynomial degree exceeds cap of 8");
  std::sort(out.begin(), out.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return exponent_less(a.exponent, b.exponent); });
  return out;
}

ExpPoly with_scale(ExpPoly f, double s) {
  f.set_scale(s);
  return f;
}

std::string fmt_cplx(Cplx c) {
  char buf[96];
  if (c.imag() == 0.0)
    std::snprintf(buf, sizeof buf, "%.10g", c.real());
  else
    std::snprintf(buf, sizeof buf, "(%.10g%+.10gi)", c.real(), c.imag());
  return buf;
}

}  // namespace

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) : terms_(canonical(std::move(terms))) {}

ExpPoly ExpPoly::constant(Cplx c) { return ExpPoly(std::vector<ExpTerm>{{0.0, {c}}}); }
ExpPoly ExpPoly::exponential(Cplx lambda, Cplx coeff) { return ExpPoly(std::vector<ExpTerm>{{lambda, {coeff}}}); }
ExpPoly ExpPoly::polynomial(std::vector<Cplx> coeffs) { return ExpPoly(std::vector<ExpTerm>{{0.0, std::move(coeffs)}}); }

ExpPoly ExpPoly::monomial(int degree, Cplx coeff) {
  std::vector<Cplx> p(degree + 1, 0.0);
  p[degree] = coeff;
  return polynomial(std::move(p));
}

ExpPoly ExpPoly::cosh(Cplx lambda) { return ExpPoly(std::vector<ExpTerm>{{lambda, {0.5}}, {-lambda, {0.5}}}); }
ExpPoly ExpPoly::sinh(Cplx lambda) { return ExpPoly(std::vector<ExpTerm>{{lambda, {0.5}}, {-lambda, {-0.5}}}); }
ExpPoly ExpPoly::cos(Cplx omega) { return cosh(Cplx(0, 1) * omega); }
ExpPoly ExpPoly::sin(Cplx omega) { return ep_scale(sinh(Cplx(0, 1) * omega), Cplx(0, -1)); }

double ExpPoly::max_coeff() const {
  double m = 0.0;
  for (const auto& t : terms_)
    for (auto c : t.poly) m = std::max(m, std::abs(c));
  return m;
}

double ExpPoly::reference_scale() const { return std::max(scale_, max_coeff()); }

int ExpPoly::max_degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, static_cast<int>(t.poly.size()) - 1);
  return d;
}

std::string ExpPoly::to_string(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    std::string poly;
    for (size_t j = 0; j < t.poly.size(); ++j) {
      if (t.poly[j] == Cplx(0.0)) continue;
      if (!poly.empty()) poly += " + ";
      poly += fmt_cplx(t.poly[j]);
      if (j == 1) poly += "*" + var;
      if (j > 1) poly += "*" + var + "^" + std::to_string(j);
    }
    if (t.exponent == Cplx(0.0)) {
      out += "(" + poly + ")";
    } else {
      out += "(" + poly + ")*exp(" + fmt_cplx(t.exponent) + "*" + var + ")";
    }
  }
  return out;
}

ExpPoly ep_add(const ExpPoly& f, const ExpPoly& g) {
  std::vector<ExpTerm> all = f.terms();
  all.insert(all.end(), g.terms().begin(), g.terms().end());
  return with_scale(ExpPoly(std::move(all)), std::max(f.reference_scale(), g.reference_scale()));
}

ExpPoly ep_neg(const ExpPoly& f) { return ep_scale(f, -1.0); }

ExpPoly ep_sub(const ExpPoly& f, const ExpPoly& g) {
  std::vector<ExpTerm> all = f.terms();
  for (auto t : g.terms()) {
    for (auto& c : t.poly) c = -c;
    all.push_back(std::move(t));
  }
  return with_scale(ExpPoly(std::move(all)), std::max(f.reference_scale(), g.reference_scale()));
}

ExpPoly ep_scale(const ExpPoly& f, Cplx s) {
  std::vector<ExpTerm> all = f.terms();
  for (auto& t : all)
    for (auto& c : t.poly) c *= s;
  return with_scale(ExpPoly(std::move(all)), f.reference_scale() * std::abs(s));
}

ExpPoly ep_mul(const ExpPoly& f, const ExpPoly& g) {
  std::vector<ExpTerm> all;
  for (const auto& a : f.terms())
    for (const auto& b : g.terms()) {
      std::vector<Cplx> p(a.poly.size() + b.poly.size() - 1, 0.0);
      for (size_t i = 0; i < a.poly.size(); ++i)
        for (size_t j = 0; j < b.poly.size(); ++j) p[i + j] += a.poly[i] * b.poly[j];
      all.push_back({a.exponent + b.exponent, std::move(p)});
    }
  return with_scale(ExpPoly(std::move(all)), f.reference_scale() * g.reference_scale());
}

ExpPoly ep_diff(const ExpPoly& f) {
  std::vector<ExpTerm> all;
  double growth = 1.0;
  for (const auto& t : f.terms()) {
    std::vector<Cplx> p(t.poly.size(), 0.0);
    for (size_t j = 0; j < t.poly.size(); ++j) {
      p[j] += t.exponent * t.poly[j];
      if (j > 0) p[j - 1] += static_cast<double>(j) * t.poly[j];
    }
    all.push_back({t.exponent, std::move(p)});
    growth = std::max(growth, std::abs(t.exponent) + static_cast<double>(t.poly.size() - 1));
  }
  return with_scale(ExpPoly(std::move(all)), f.reference_scale() * growth);
}

ExpPoly ep_diff(const ExpPoly& f, int times) {
  ExpPoly r = f;
  for (int i = 0; i < times; ++i) r = ep_diff(r);
  return r;
}

Cplx ep_eval(const ExpPoly& f, Cplx y) {
  Cplx acc = 0.0;
  for (const auto& t : f.terms()) acc += horner(t.poly, y) * std::exp(t.exponent * y);
  return acc;
}

double ep_eval_abs(const ExpPoly& f, Cplx y) {
  double acc = 0.0;
  double ay = std::abs(y);
  for (const auto& t : f.terms()) {
    double p = 0.0;
    for (auto it = t.poly.rbegin(); it != t.poly.rend(); ++it) p = p * ay + std::abs(*it);
    acc += p * std::exp((t.exponent * y).real());
  }
  return acc;
}

ExpPoly ep_affine(const ExpPoly& f, Cplx shift, Cplx factor) {
  std::vector<ExpTerm> all;
  double growth = 1.0;
  double reach = std::abs(shift) + std::abs(factor);
  for (const auto& t : f.terms()) {
    const int n = static_cast<int>(t.poly.size());
    std::vector<Cplx> q(n, 0.0);
    Cplx e = std::exp(t.exponent * shift);
    for (int k = 0; k < n; ++k) {
      Cplx s = 0.0;
      for (int j = n - 1; j >= k; --j) s = s * shift + binom(j, k) * t.poly[j];
      q[k] = e * s * std::pow(factor, k);
    }
    all.push_back({t.exponent * factor, std::move(q)});
    growth = std::max(growth, std::abs(e) * std::pow(1.0 + reach, n - 1));
  }
  return with_scale(ExpPoly(std::move(all)), f.reference_scale() * growth);
}

ExpPoly ep_translate(const ExpPoly& f, Cplx z) { return ep_affine(f, z, 1.0); }

ExpPoly ep_conj(const ExpPoly& f) {
  std::vector<ExpTerm> all = f.terms();
  for (auto& t : all) {
    t.exponent = std::conj(t.exponent);
    for (auto& c : t.poly) c = std::conj(c);
  }
  return with_scale(ExpPoly(std::move(all)), f.reference_scale());
}

ExpPoly ep_real(const ExpPoly& f) { return ep_scale(ep_add(f, ep_conj(f)), 0.5); }
ExpPoly ep_imag(const ExpPoly& f) { return ep_scale(ep_sub(f, ep_conj(f)), Cplx(0, -0.5)); }

double ep_zero_residual(const ExpPoly& f) {
  double ref = f.scale() > 0.0 ? f.scale() : 1.0;
  return f.max_coeff() / ref;
}

bool ep_is_zero(const ExpPoly& f, double tol) {
  if (tol < 0.0) throw Error(ErrorCode::InvalidArgument, "negative tolerance");
  return ep_zero_residual(f) <= tol;
}

bool ep_equal(const ExpPoly& f, const ExpPoly& g, double tol) { return ep_is_zero(ep_sub(f, g), tol); }

Cplx ep_constant_term(const ExpPoly& f) {
  for (const auto& t : f.terms())
    if (std::abs(t.exponent) <= kMergeTol) return t.poly[0];
  return 0.0;
}

ExpPoly ep_drop_constant(const ExpPoly& f) {
  return ep_sub(f, ExpPoly::constant(ep_constant_term(f)));
}

std::optional<Cplx> ep_ratio(const ExpPoly& g, const ExpPoly& f) {
  double den = 0.0;
  Cplx num = 0.0;
  for (const auto& tf : f.terms()) {
    const ExpTerm* tg = nullptr;
    for (const auto& t : g.terms())
      if (std::abs(t.exponent - tf.exponent) <= kMergeTol) tg = &t;
    for (size_t j = 0; j < tf.poly.size(); ++j) {
      den += std::norm(tf.poly[j]);
      if (tg && j < tg->poly.size()) num += std::conj(tf.poly[j]) * tg->poly[j];
    }
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::optional<ExpPoly> ep_sqrt(const ExpPoly& f, Cplx y0) {
  if (f.terms().size() != 1) return std::nullopt;
  const auto& t = f.terms()[0];
  const int deg = static_cast<int>(t.poly.size()) - 1;
  if (deg % 2 != 0) return std::nullopt;
  const int m = deg / 2;
  std::vector<Cplx> q(m + 1, 0.0);
  q[m] = std::sqrt(t.poly[deg]);
  for (int k = 1; k <= m; ++k) {
    // coefficient of y^{deg-k} in q^2 involves q_m..q_{m-k}
    Cplx s = t.poly[deg - k];
    for (int i = m - k + 1; i <= m - 1; ++i) {
      int j = deg - k - i;
      if (j > m - k && j <= m - 1 && j >= 0) s -= q[i] * q[j];
    }
    q[m - k] = s / (2.0 * q[m]);
  }
  ExpPoly root(std::vector<ExpTerm>{{t.exponent / 2.0, q}});
  if (!ep_equal(ep_mul(root, root), f, 1e-12)) return std::nullopt;
  if (ep_eval(root, y0).real() < 0.0) root = ep_neg(root);
  root.set_scale(0.0);
  return root;
}

}  // namespace commutant
