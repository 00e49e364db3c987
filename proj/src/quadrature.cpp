#include "commutant/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "commutant/error.hpp"

namespace commutant {

QuadratureRule gauss_legendre(int n, const Segment& seg) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "quadrature needs at least one node");
  if (std::abs(seg.b - seg.a) == 0.0) throw Error(ErrorCode::InvalidArgument, "segment endpoints coincide");
  QuadratureRule r;
  r.segment = seg;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  for (double t : r.nodes) r.mapped.push_back(seg.map(t));
  return r;
}

std::vector<double> barycentric_weights(const QuadratureRule& rule) {
  std::vector<double> b(rule.size());
  for (int j = 0; j < rule.size(); ++j) {
    const double s = std::sqrt((1.0 - rule.nodes[j] * rule.nodes[j]) * rule.weights[j]);
    b[j] = (j % 2 == 0) ? s : -s;
  }
  return b;
}

Eigen::MatrixXd differentiation_matrix(const std::vector<double>& nodes, const std::vector<double>& bary) {
  const int n = static_cast<int>(nodes.size());
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      D(i, j) = (bary[j] / bary[i]) / (nodes[i] - nodes[j]);
      diag -= D(i, j);
    }
    D(i, i) = diag;
  }
  return D;
}

Eigen::RowVectorXcd interpolation_row(const std::vector<double>& nodes, const std::vector<double>& bary, Cplx t) {
  const int n = static_cast<int>(nodes.size());
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(n);
  for (int j = 0; j < n; ++j)
    if (std::abs(t - nodes[j]) < 1e-14) {
      row(j) = 1.0;
      return row;
    }
  Cplx sum = 0.0;
  for (int j = 0; j < n; ++j) {
    row(j) = bary[j] / (t - nodes[j]);
    sum += row(j);
  }
  return row / sum;
}

LegendreValues legendre_orthonormal(int count, double t) {
  LegendreValues v;
  v.p.assign(count, 0.0);
  v.dp.assign(count, 0.0);
  v.ddp.assign(count, 0.0);
  if (count == 0) return v;
  std::vector<double> p(count + 1), dp(count + 1), ddp(count + 1);
  p[0] = 1.0;
  dp[0] = ddp[0] = 0.0;
  if (count > 1) {
    p[1] = t;
    dp[1] = 1.0;
    ddp[1] = 0.0;
  }
  for (int n = 1; n + 1 < count; ++n) {
    p[n + 1] = ((2.0 * n + 1.0) * t * p[n] - n * p[n - 1]) / (n + 1.0);
    dp[n + 1] = dp[n - 1] + (2.0 * n + 1.0) * p[n];
    ddp[n + 1] = ddp[n - 1] + (2.0 * n + 1.0) * dp[n];
  }
  for (int n = 0; n < count; ++n) {
    const double s = std::sqrt(n + 0.5);
    v.p[n] = s * p[n];
    v.dp[n] = s * dp[n];
    v.ddp[n] = s * ddp[n];
  }
  return v;
}

}  // namespace commutant
