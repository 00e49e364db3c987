#include "commutant/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commutant/error.hpp"

namespace commutant {

Eigen::MatrixXd basis_values(const QuadratureRule& rule, int count) {
  const double scale = 1.0 / std::sqrt(std::abs(rule.segment.halfspan()));
  Eigen::MatrixXd P(rule.size(), count);
  for (int q = 0; q < rule.size(); ++q) {
    const LegendreValues v = legendre_orthonormal(count, rule.nodes[q]);
    for (int n = 0; n < count; ++n) P(q, n) = v.p[n] * scale;
  }
  return P;
}

Eigen::VectorXcd mode_values(const Spectrum& s, int n, const QuadratureRule& rule) {
  return basis_values(rule, s.basisSize).cast<Cplx>() * s.eigvecs.col(n);
}

Eigen::VectorXcd project_values(const QuadratureRule& rule, const Eigen::VectorXcd& v, int count) {
  const Eigen::MatrixXd P = basis_values(rule, count);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(count);
  for (int q = 0; q < rule.size(); ++q) c += rule.norm_weight(q) * v(q) * P.row(q).transpose().cast<Cplx>();
  return c;
}

Spectrum solve_L_eigen(const DiffOp& L, int basisSize) {
  if (basisSize < 4) throw Error(ErrorCode::InvalidArgument, "basisSize must be at least 4");
  if (basisSize > kMaxBasis) throw Error(ErrorCode::IllConditioned, "basisSize above 200");
  const int B = basisSize;
  const Segment& seg = L.segment;
  const Cplx h = seg.halfspan();
  const double sh = std::sqrt(std::abs(h));
  const QuadratureRule rule = gauss_legendre(B + 64, seg);
  const int Q = rule.size();

  Eigen::MatrixXd Phi(Q, B);
  Eigen::MatrixXcd LPhi(Q, B);
  for (int q = 0; q < Q; ++q) {
    const LegendreValues v = legendre_orthonormal(B, rule.nodes[q]);
    const Cplx y = rule.mapped[q];
    const Cplx a = ep_eval(L.a, y) / (h * h), b = ep_eval(L.b, y) / h, c = ep_eval(L.c, y);
    for (int n = 0; n < B; ++n) {
      Phi(q, n) = v.p[n] / sh;
      LPhi(q, n) = (a * v.ddp[n] + b * v.dp[n] + c * v.p[n]) / sh;
    }
  }
  Eigen::VectorXd W(Q);
  for (int q = 0; q < Q; ++q) W(q) = rule.norm_weight(q);
  const Eigen::MatrixXcd A = Phi.transpose().cast<Cplx>() * W.cast<Cplx>().asDiagonal() * LPhi;
  const Eigen::MatrixXcd G = (Phi.transpose() * W.asDiagonal() * Phi).cast<Cplx>();

  Eigen::LLT<Eigen::MatrixXcd> llt(G);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "Gram matrix not positive definite");
  const auto Lg = llt.matrixL();
  const Eigen::MatrixXcd X1 = Lg.solve(A);
  const Eigen::MatrixXcd C = Lg.solve(X1.adjoint()).adjoint();

  Spectrum s;
  s.basisSize = B;
  s.segment = seg;
  s.hermitianDefect = (C - C.adjoint()).norm() / std::max(C.norm(), 1e-300);
  s.selfAdjoint = s.hermitianDefect <= 1e-10;

  Eigen::VectorXcd vals;
  Eigen::MatrixXcd vecs;
  if (s.selfAdjoint) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (C + C.adjoint()));
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver failed");
    vals = es.eigenvalues().cast<Cplx>();
    vecs = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "complex eigensolver failed");
    vals = es.eigenvalues();
    vecs = es.eigenvectors();
  }
  const Eigen::MatrixXcd X = Lg.adjoint().solve(vecs);

  // Bounded-below orientation first: the low modes are the resolved ones.
  const double orient = (ep_eval(L.a, seg.midpoint()) / (h * h)).real() > 0.0 ? -1.0 : 1.0;
  std::vector<int> order(B);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    if (s.selfAdjoint) return orient * vals(i).real() < orient * vals(j).real();
    return std::abs(vals(i)) < std::abs(vals(j));
  });

  s.eigvecs.resize(B, B);
  for (int k = 0; k < B; ++k) {
    Eigen::VectorXcd x = X.col(order[k]);
    x /= std::sqrt(std::abs((x.adjoint() * G * x)(0, 0)));
    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    x *= std::conj(x(imax)) / std::abs(x(imax));
    s.eigvecs.col(k) = x;
    s.eigenvalues.push_back(vals(order[k]));
  }

  const QuadratureRule check = gauss_legendre(std::min(B + 16, kMaxBasis), seg);
  const DenseOperator Lc = discretize_L(L, check, check.size());
  const Eigen::MatrixXcd V = basis_values(check, B).cast<Cplx>() * s.eigvecs;
  const Eigen::MatrixXcd LV = Lc.entries * V;
  for (int k = 0; k < B; ++k) {
    const Eigen::VectorXcd r = LV.col(k) - s.eigenvalues[k] * V.col(k);
    s.residuals.push_back(weighted_norm(check, r) / weighted_norm(check, V.col(k)));
  }
  return s;
}

KSpectrum k_spectrum_from_L(const KernelSpec& k, const Spectrum& spec, int N, int modes) {
  const QuadratureRule rule = gauss_legendre(N, spec.segment);
  const DenseOperator K = discretize_K(k, rule, rule);
  KSpectrum out;
  for (int n = 0; n < std::min(modes, spec.basisSize); ++n) {
    const Eigen::VectorXcd phi = mode_values(spec, n, rule);
    const Eigen::VectorXcd kphi = K.entries * phi;
    const Cplx kappa = weighted_inner(rule, kphi, phi) / weighted_inner(rule, phi, phi);
    out.kappas.push_back(kappa);
    out.residuals.push_back(weighted_norm(rule, kphi - kappa * phi) / weighted_norm(rule, phi));
  }
  return out;
}

KSpectrum k_spectrum_from_L(const CommutingPair& pair, const Spectrum& spec, int N, int modes) {
  if (pair.two_segments()) throw Error(ErrorCode::InvalidArgument, "spectrum transfer needs a single-segment pair");
  return k_spectrum_from_L(pair.kernel, spec, N, modes);
}

SvdResult svd_pipeline(const CommutingPair& pair, int basisSize, int N, int modes) {
  if (!pair.two_segments()) throw Error(ErrorCode::InvalidArgument, "SVD pipeline needs a two-segment pair");
  SvdResult out;
  const RegularityReport reg = classify_regularity(pair);
  out.regular = reg.verdict == Regularity::Regular;
  if (!out.regular)
    out.warnings.push_back("Singular: Ku is singular at a target endpoint; discreteness of the SVD is not established");

  const Spectrum spec = solve_L_eigen(pair.op, basisSize);
  const DiffOp& Lt = *pair.opTarget;
  const QuadratureRule src = gauss_legendre(N, pair.op.segment);
  const QuadratureRule tgt = gauss_legendre(N, Lt.segment);
  const DenseOperator K = discretize_K(pair.kernel, src, tgt);
  const DenseOperator Ltd = discretize_L(Lt, tgt, N);
  Eigen::VectorXd Ws(N), Wt(N);
  for (int j = 0; j < N; ++j) {
    Ws(j) = src.norm_weight(j);
    Wt(j) = tgt.norm_weight(j);
  }
  const Eigen::MatrixXcd Kstar = Ws.cwiseInverse().cast<Cplx>().asDiagonal() * K.entries.adjoint() *
                                 Wt.cast<Cplx>().asDiagonal();

  const int scan = std::min(basisSize / 2, std::max(4 * modes, 20));
  struct Candidate {
    int mode;
    double sigma;
    Eigen::VectorXcd u, ku;
  };
  std::vector<Candidate> cands;
  for (int n = 0; n < scan; ++n) {
    Eigen::VectorXcd u = mode_values(spec, n, src);
    u /= weighted_norm(src, u);
    Eigen::VectorXcd ku = K.entries * u;
    cands.push_back({n, weighted_norm(tgt, ku), std::move(u), std::move(ku)});
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.sigma > b.sigma; });
  const int take = std::min<int>(modes, static_cast<int>(cands.size()));
  for (int i = 0; i < take; ++i)
    if (cands[i].sigma < 1e-13) throw Error(ErrorCode::RankCollapse, "singular value below 1e-13");

  const int tcount = std::min(N, basisSize);
  out.rightFns.resize(basisSize, take);
  out.leftFns.resize(tcount, take);
  std::vector<Eigen::VectorXcd> us, vs;
  for (int i = 0; i < take; ++i) {
    const Candidate& c = cands[i];
    const Cplx chi = spec.eigenvalues[c.mode];
    const Eigen::VectorXcd v = c.ku / c.sigma;
    out.sigmas.push_back(c.sigma);
    out.chis.push_back(chi);
    out.lModes.push_back(c.mode);
    out.rightFns.col(i) = spec.eigvecs.col(c.mode);
    out.leftFns.col(i) = project_values(tgt, v, tcount);
    out.crossResiduals.push_back(weighted_norm(tgt, Ltd.entries * v - chi * v) /
                                 (weighted_norm(tgt, v) * std::max(1.0, std::abs(chi))));
    const Eigen::VectorXcd kk = Kstar * c.ku;
    out.kstarkResiduals.push_back(weighted_norm(src, kk - c.sigma * c.sigma * c.u) / (c.sigma * c.sigma));
    out.belowFloor.push_back(c.sigma / cands[0].sigma < 1e-12);
    us.push_back(c.u);
    vs.push_back(v);
  }
  for (int i = 0; i < take; ++i)
    for (int j = 0; j < take; ++j) {
      if (out.belowFloor[i] || out.belowFloor[j]) continue;
      const double delta = i == j ? 1.0 : 0.0;
      out.gramResidualU = std::max(out.gramResidualU, std::abs(weighted_inner(src, us[i], us[j]) - delta));
      out.gramResidualV = std::max(out.gramResidualV, std::abs(weighted_inner(tgt, vs[i], vs[j]) - delta));
    }
  return out;
}

OracleResult dense_oracle(const DenseOperator& K, bool eigen) {
  const int nt = K.targetRule.size(), ns = K.rule.size();
  if (nt > 512 || ns > 512) throw Error(ErrorCode::InvalidArgument, "dense oracle limited to N <= 512");
  Eigen::VectorXd wt(nt), ws(ns);
  for (int i = 0; i < nt; ++i) wt(i) = std::sqrt(K.targetRule.norm_weight(i));
  for (int j = 0; j < ns; ++j) ws(j) = 1.0 / std::sqrt(K.rule.norm_weight(j));
  const Eigen::MatrixXcd S = wt.cast<Cplx>().asDiagonal() * K.entries * ws.cast<Cplx>().asDiagonal();
  OracleResult out;
  if (eigen && nt == ns) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(S, false);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "oracle eigensolver failed");
    for (int i = 0; i < nt; ++i) out.eigenvalues.push_back(es.eigenvalues()(i));
    std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                     [](Cplx a, Cplx b) { return std::abs(a) > std::abs(b); });
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(S);
  for (int i = 0; i < svd.singularValues().size(); ++i) out.singularValues.push_back(svd.singularValues()(i));
  return out;
}

}  // namespace commutant
