#pragma once

#include <vector>

#include <Eigen/Dense>

#include "commutant/catalog.hpp"

namespace commutant {

struct QuadratureRule {
  Segment segment;
  std::vector<double> nodes;    // reference nodes in [-1, 1], increasing
  std::vector<double> weights;  // reference weights, sum 2
  std::vector<Cplx> mapped;

  int size() const { return static_cast<int>(nodes.size()); }
  // Weights for integrals along the segment (dy = halfspan dt).
  Cplx line_weight(int j) const { return segment.halfspan() * weights[j]; }
  // Weights for the arc-length L2 inner product.
  double norm_weight(int j) const { return std::abs(segment.halfspan()) * weights[j]; }
};

QuadratureRule gauss_legendre(int n, const Segment& seg = {});

// Barycentric weights for Gauss-Legendre nodes.
std::vector<double> barycentric_weights(const QuadratureRule& rule);
// First-derivative matrix in the reference variable t.
Eigen::MatrixXd differentiation_matrix(const std::vector<double>& nodes, const std::vector<double>& bary);
// Row of interpolation weights for evaluating at t (exact when t is a node).
Eigen::RowVectorXcd interpolation_row(const std::vector<double>& nodes, const std::vector<double>& bary, Cplx t);

// Orthonormal Legendre polynomials sqrt(n + 1/2) P_n(t) with first two
// derivatives, for n = 0..count-1.
struct LegendreValues {
  std::vector<double> p, dp, ddp;
};
LegendreValues legendre_orthonormal(int count, double t);

}  // namespace commutant
