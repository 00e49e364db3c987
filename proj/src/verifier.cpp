#include "commutant/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "commutant/error.hpp"

namespace commutant {

namespace {

struct OpDerivs {
  ExpPoly a, a1, a2, b, b1, c;
  explicit OpDerivs(const DiffOp& L)
      : a(L.a), a1(ep_diff(L.a)), a2(ep_diff(a1)), b(L.b), b1(ep_diff(L.b)), c(L.c) {}
};

ResidueValue residue_with(const KernelEvaluator& k, const OpDerivs& L1, const OpDerivs& L2, Cplx y, Cplx z) {
  const auto jet = k.jet(z);
  const Cplx a2 = ep_eval(L2.a, y + z), a1 = ep_eval(L1.a, y), a1p = ep_eval(L1.a1, y), a1pp = ep_eval(L1.a2, y);
  const Cplx b2 = ep_eval(L2.b, y + z), b1 = ep_eval(L1.b, y), b1p = ep_eval(L1.b1, y);
  const Cplx c2 = ep_eval(L2.c, y + z), c1 = ep_eval(L1.c, y);
  ResidueValue r;
  r.value = (a2 - a1) * jet[2] + (2.0 * a1p + b2 - b1) * jet[1] + (c2 - c1 + b1p - a1pp) * jet[0];
  r.scale = (std::abs(a2) + std::abs(a1)) * std::abs(jet[2]) +
            (2.0 * std::abs(a1p) + std::abs(b2) + std::abs(b1)) * std::abs(jet[1]) +
            (std::abs(c2) + std::abs(c1) + std::abs(b1p) + std::abs(a1pp)) * std::abs(jet[0]);
  return r;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

double max_abs_endpoint(const Segment& s) { return std::max(std::abs(s.a), std::abs(s.b)); }

}  // namespace

ResidueValue residue_terms(const KernelEvaluator& k, const DiffOp& L1, const DiffOp& L2, Cplx y, Cplx z) {
  return residue_with(k, OpDerivs(L1), OpDerivs(L2), y, z);
}

Cplx residue_R1(const KernelSpec& k, const DiffOp& L, Cplx y, Cplx z) {
  return residue_terms(KernelEvaluator(k), L, L, y, z).value;
}

Cplx residue_R2(const KernelSpec& k, const DiffOp& L1, const DiffOp& L2, Cplx y, Cplx z) {
  return residue_terms(KernelEvaluator(k), L1, L2, y, z).value;
}

GridResidual grid_residual(const KernelSpec& k, const DiffOp& L1, const DiffOp& L2, bool twoSegments, int grid,
                           double exclusion) {
  const KernelEvaluator ev(k);
  const OpDerivs d1(L1), d2(L2);
  const Segment& src = L1.segment;
  const Segment& tgt = L2.segment;
  const double radius = max_abs_endpoint(src) + max_abs_endpoint(tgt) + 4.0 * std::abs(src.halfspan()) + 1.0;
  const std::vector<Cplx> poles = kernel_poles(k, radius);
  GridResidual out;
  std::vector<double> scales;
  const auto ts = linspace(-1.0, 1.0, grid);
  for (double ty : ts) {
    const Cplx y = src.map(ty);
    for (double tz : ts) {
      const Cplx z = twoSegments ? tgt.map(tz) - y : 2.0 * tz * src.halfspan();
      const bool nearPole =
          std::any_of(poles.begin(), poles.end(), [&](Cplx p) { return std::abs(z - p) < exclusion; });
      if (nearPole) {
        ++out.excluded;
        continue;
      }
      const ResidueValue r = residue_with(ev, d1, d2, y, z);
      const double a = std::abs(r.value);
      out.samples.push_back({y, z, a});
      out.maxAbs = std::max(out.maxAbs, a);
      out.scale = std::max(out.scale, r.scale);
      scales.push_back(r.scale);
    }
  }
  // Pointwise, since a global scale is dominated by the samples next to a
  // pole.  The floor keeps points where every term vanishes (a = 0 at both
  // ends) from turning rounding noise into O(1) ratios.
  const double floor = 1e-6 * out.scale;
  for (size_t i = 0; i < scales.size(); ++i) {
    const double s = std::max(scales[i], floor);
    out.relative = std::max(out.relative, s > 0.0 ? out.samples[i].absF / s : out.samples[i].absF);
  }
  return out;
}

GridResidual grid_residual(const CommutingPair& p, int grid, double exclusion) {
  return grid_residual(p.kernel, p.op, p.target_op(), p.two_segments(), grid, exclusion);
}

DenseOperator discretize_K(const KernelSpec& k, const QuadratureRule& source, const QuadratureRule& target) {
  const KernelEvaluator ev(k);
  const int ns = source.size(), nt = target.size();
  DenseOperator out;
  out.rule = source;
  out.targetRule = target;
  out.entries = Eigen::MatrixXcd::Zero(nt, ns);

  const Segment& seg = source.segment;
  const Cplx m = seg.midpoint(), h = seg.halfspan();
  const double radius = max_abs_endpoint(seg) + max_abs_endpoint(target.segment) + 1.0;
  std::vector<Cplx> poles, residues;
  for (Cplx p : kernel_poles(k, radius)) {
    poles.push_back(p);
    residues.push_back(ev.local_series(p, 2).q[0]);
  }
  const std::vector<double> bary = barycentric_weights(source);
  Eigen::MatrixXd D;

  for (int i = 0; i < nt; ++i) {
    const Cplx x = target.mapped[i];
    // poles whose shifted copy x - z_p falls strictly inside the source segment
    std::vector<int> hits;
    std::vector<double> tc;
    for (size_t p = 0; p < poles.size(); ++p) {
      const Cplx t = (x - poles[p] - m) / h;
      if (std::abs(t.imag()) <= 1e-12 && std::abs(t.real()) < 1.0 - 1e-13) {
        hits.push_back(static_cast<int>(p));
        tc.push_back(t.real());
      }
    }
    if (hits.empty()) {
      for (int j = 0; j < ns; ++j) out.entries(i, j) = source.line_weight(j) * ev.eval(x - source.mapped[j]);
      continue;
    }
    for (int j = 0; j < ns; ++j) {
      const Cplx z = x - source.mapped[j];
      Cplx ks = 0.0;
      int seriesPole = -1;
      for (size_t q = 0; q < hits.size(); ++q)
        if (std::abs(z - poles[hits[q]]) < ev.series_radius()) seriesPole = static_cast<int>(q);
      if (seriesPole >= 0) {
        ks = ev.smooth_eval(z, poles[hits[seriesPole]]);
        for (size_t q = 0; q < hits.size(); ++q)
          if (static_cast<int>(q) != seriesPole) ks -= residues[hits[q]] / (z - poles[hits[q]]);
      } else {
        ks = ev.eval(z);
        for (int hq : hits) ks -= residues[hq] / (z - poles[hq]);
      }
      out.entries(i, j) = source.line_weight(j) * ks;
    }
    for (size_t q = 0; q < hits.size(); ++q) {
      const Cplx r = residues[hits[q]];
      const double t = tc[q];
      int j0 = -1;
      for (int j = 0; j < ns; ++j)
        if (std::abs(t - source.nodes[j]) < 1e-14) j0 = j;
      double sub = 0.0;
      for (int j = 0; j < ns; ++j) {
        if (j == j0) continue;
        const double wj = source.weights[j] / (t - source.nodes[j]);
        sub += wj;
        out.entries(i, j) += r * wj;
      }
      const Cplx pv = r * (std::log((1.0 + t) / (1.0 - t)) - sub);
      if (j0 >= 0) {
        // (u_j0 - u(t))/(t - s_j0) -> -u'(t) at a coinciding node
        if (D.size() == 0) D = differentiation_matrix(source.nodes, bary);
        for (int kk = 0; kk < ns; ++kk) out.entries(i, kk) -= r * source.weights[j0] * D(j0, kk);
        out.entries(i, j0) += pv;
      } else {
        out.entries.row(i) += pv * interpolation_row(source.nodes, bary, t);
      }
    }
  }
  return out;
}

DenseOperator discretize_L(const DiffOp& L, const QuadratureRule& rule, int basisSize) {
  if (basisSize < 4) throw Error(ErrorCode::InvalidArgument, "discretize_L needs basisSize >= 4");
  if (basisSize > 200) throw Error(ErrorCode::IllConditioned, "differentiation matrices above 200 nodes");
  const QuadratureRule r = (basisSize == rule.size()) ? rule : gauss_legendre(basisSize, rule.segment);
  const int n = r.size();
  const Eigen::MatrixXd D = differentiation_matrix(r.nodes, barycentric_weights(r));
  const Eigen::MatrixXd D2 = D * D;
  const Cplx h = r.segment.halfspan();
  DenseOperator out;
  out.rule = r;
  out.targetRule = r;
  out.entries = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Cplx y = r.mapped[i];
    const Cplx a = ep_eval(L.a, y) / (h * h), b = ep_eval(L.b, y) / h, c = ep_eval(L.c, y);
    for (int j = 0; j < n; ++j) out.entries(i, j) = a * D2(i, j) + b * D(i, j);
    out.entries(i, i) += c;
  }
  return out;
}

std::vector<TestFunction> standard_test_functions(const Segment& seg) {
  const Cplx m = seg.midpoint(), h = seg.halfspan();
  auto t = [m, h](Cplx y) { return (y - m) / h; };
  std::vector<TestFunction> out;
  out.push_back({"one", [](Cplx) { return Cplx(1.0); }, [](Cplx) { return Cplx(0.0); }});
  out.push_back({"y", [t](Cplx y) { return t(y); }, [h](Cplx) { return 1.0 / h; }});
  out.push_back({"y2", [t](Cplx y) { return t(y) * t(y); }, [t, h](Cplx y) { return 2.0 * t(y) / h; }});
  out.push_back({"exp", [t](Cplx y) { return std::exp(t(y)); }, [t, h](Cplx y) { return std::exp(t(y)) / h; }});
  out.push_back({"gauss", [t](Cplx y) { return std::exp(-4.0 * t(y) * t(y)); },
                 [t, h](Cplx y) { return -8.0 * t(y) * std::exp(-4.0 * t(y) * t(y)) / h; }});
  return out;
}

double weighted_norm(const QuadratureRule& rule, const Eigen::VectorXcd& v) {
  double s = 0.0;
  for (int j = 0; j < rule.size(); ++j) s += rule.norm_weight(j) * std::norm(v(j));
  return std::sqrt(s);
}

Cplx weighted_inner(const QuadratureRule& rule, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) {
  Cplx s = 0.0;
  for (int j = 0; j < rule.size(); ++j) s += rule.norm_weight(j) * f(j) * std::conj(g(j));
  return s;
}

double commutator_norm(const KernelSpec& k, const DiffOp& L1, const DiffOp& L2, int N,
                       const std::vector<TestFunction>& testFns) {
  const QuadratureRule src = gauss_legendre(N, L1.segment);
  const QuadratureRule tgt = gauss_legendre(N, L2.segment);
  const DenseOperator K = discretize_K(k, src, tgt);
  const DenseOperator Ls = discretize_L(L1, src, N);
  const DenseOperator Lt = discretize_L(L2, tgt, N);
  double worst = 0.0;
  for (const auto& f : testFns) {
    Eigen::VectorXcd u(N);
    for (int j = 0; j < N; ++j) u(j) = f.value(src.mapped[j]);
    const double nu = weighted_norm(src, u);
    if (nu == 0.0) continue;
    const Eigen::VectorXcd r = K.entries * (Ls.entries * u) - Lt.entries * (K.entries * u);
    worst = std::max(worst, weighted_norm(tgt, r) / nu);
  }
  return worst;
}

double commutator_norm(const CommutingPair& p, int N, const std::vector<TestFunction>& testFns) {
  return commutator_norm(p.kernel, p.op, p.target_op(), N, testFns);
}

double commutator_norm(const CommutingPair& p, int N) {
  return commutator_norm(p, N, standard_test_functions(p.op.segment));
}

Cplx phi_boundary_term(const KernelSpec& k, const DiffOp& L, const TestFunction& u, double x, double eps) {
  const KernelEvaluator ev(k);
  const ExpPoly ap = ep_diff(L.a);
  const auto kp = ev.jet(eps), km = ev.jet(-eps);
  const Cplx xm = x - eps, xp = x + eps;
  const Cplx ax = ep_eval(L.a, x), bx = ep_eval(L.b, x);
  const Cplx dam = ep_eval(L.a, xm) - ax, dap = ep_eval(L.a, xp) - ax;
  const Cplx um = u.value(xm), up = u.value(xp);
  const Cplx first = kp[0] * (dam * u.deriv(xm) + (ep_eval(L.b, xm) - bx - ep_eval(ap, xm)) * um);
  const Cplx second = km[0] * (dap * u.deriv(xp) + (ep_eval(L.b, xp) - bx - ep_eval(ap, xp)) * up);
  return first - second + kp[1] * um * dam - km[1] * up * dap;
}

PhiFit phi_slope(const KernelSpec& k, const DiffOp& L, const TestFunction& u, double x,
                 const std::vector<double>& eps) {
  PhiFit fit;
  fit.eps = eps;
  bool exactZero = false;
  for (double e : eps) {
    const double v = std::abs(phi_boundary_term(k, L, u, x, e));
    fit.absPhi.push_back(v);
    if (v == 0.0) exactZero = true;
  }
  if (exactZero || eps.size() < 2) {
    fit.slope = std::numeric_limits<double>::infinity();
    return fit;
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < eps.size(); ++i) {
    mx += std::log(eps[i]);
    my += std::log(fit.absPhi[i]);
  }
  mx /= eps.size();
  my /= eps.size();
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < eps.size(); ++i) {
    const double dx = std::log(eps[i]) - mx;
    sxy += dx * (std::log(fit.absPhi[i]) - my);
    sxx += dx * dx;
  }
  fit.slope = sxy / sxx;
  return fit;
}

}  // namespace commutant
