#pragma once

// Three certificates of commutation: the pointwise residue identity, the
// discretized commutator, and the principal-value boundary term.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "commutant/catalog.hpp"
#include "commutant/quadrature.hpp"

namespace commutant {

struct ResidueValue {
  Cplx value;
  double scale;  // sum of term magnitudes
};

// Left-hand side of the residue identity with L1 at y and L2 at y + z.
ResidueValue residue_terms(const KernelEvaluator& k, const DiffOp& L1, const DiffOp& L2, Cplx y, Cplx z);
Cplx residue_R1(const KernelSpec& k, const DiffOp& L, Cplx y, Cplx z);
Cplx residue_R2(const KernelSpec& k, const DiffOp& L1, const DiffOp& L2, Cplx y, Cplx z);

struct GridSample {
  Cplx y, z;
  double absF;
};

struct GridResidual {
  double maxAbs = 0.0;
  double scale = 0.0;
  double relative = 0.0;  // max over samples of |F| / (sum of term magnitudes)
  int excluded = 0;
  std::vector<GridSample> samples;
};

inline constexpr int kDefaultGrid = 20;
inline constexpr double kDefaultExclusion = 0.05;

// Single segment: y on the source, z in [-L, L] with L the source length.
// Two segments: y on the source, x on the target, z = x - y.
GridResidual grid_residual(const KernelSpec& k, const DiffOp& L1, const DiffOp& L2, bool twoSegments,
                           int grid = kDefaultGrid, double exclusion = kDefaultExclusion);
GridResidual grid_residual(const CommutingPair& p, int grid = kDefaultGrid, double exclusion = kDefaultExclusion);

struct DenseOperator {
  Eigen::MatrixXcd entries;
  QuadratureRule rule;        // source
  QuadratureRule targetRule;  // target
};

DenseOperator discretize_K(const KernelSpec& k, const QuadratureRule& source, const QuadratureRule& target);
DenseOperator discretize_L(const DiffOp& L, const QuadratureRule& rule, int basisSize);

struct TestFunction {
  std::string name;
  std::function<Cplx(Cplx)> value;
  std::function<Cplx(Cplx)> deriv;
};

// {1, y, y^2, e^y, exp(-4y^2)} written in the reference coordinate of seg.
std::vector<TestFunction> standard_test_functions(const Segment& seg);

// L2 norms over the rule with arc-length weights.
double weighted_norm(const QuadratureRule& rule, const Eigen::VectorXcd& v);
Cplx weighted_inner(const QuadratureRule& rule, const Eigen::VectorXcd& f, const Eigen::VectorXcd& g);

double commutator_norm(const KernelSpec& k, const DiffOp& L1, const DiffOp& L2, int N,
                       const std::vector<TestFunction>& testFns);
double commutator_norm(const CommutingPair& p, int N, const std::vector<TestFunction>& testFns);
double commutator_norm(const CommutingPair& p, int N);

Cplx phi_boundary_term(const KernelSpec& k, const DiffOp& L, const TestFunction& u, double x, double eps);

struct PhiFit {
  std::vector<double> eps;
  std::vector<double> absPhi;
  double slope = 0.0;
};
PhiFit phi_slope(const KernelSpec& k, const DiffOp& L, const TestFunction& u, double x,
                 const std::vector<double>& eps = {1e-2, 1e-3, 1e-4});

}  // namespace commutant
