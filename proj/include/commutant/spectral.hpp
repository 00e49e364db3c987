#pragma once

// Eigenproblem for L in an orthonormal Legendre basis, transfer of the
// spectrum to K, and the two-segment SVD pipeline.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "commutant/catalog.hpp"
#include "commutant/verifier.hpp"

namespace commutant {

struct Spectrum {
  std::vector<Cplx> eigenvalues;
  Eigen::MatrixXcd eigvecs;  // column n: coefficients of mode n
  std::vector<double> residuals;
  int basisSize = 0;
  Segment segment;
  bool selfAdjoint = false;
  double hermitianDefect = 0.0;
};

inline constexpr int kDefaultBasis = 96;
inline constexpr int kMaxBasis = 200;

// Orthonormal basis phi_n(y) = sqrt(n + 1/2) P_n(t) / sqrt|h| at the rule nodes.
Eigen::MatrixXd basis_values(const QuadratureRule& rule, int count);
// Values of mode n at the nodes of rule (rule on the spectrum's segment).
Eigen::VectorXcd mode_values(const Spectrum& s, int n, const QuadratureRule& rule);
// Orthonormal-basis coefficients of node values (projection by quadrature).
Eigen::VectorXcd project_values(const QuadratureRule& rule, const Eigen::VectorXcd& v, int count);

Spectrum solve_L_eigen(const DiffOp& L, int basisSize = kDefaultBasis);

struct KSpectrum {
  std::vector<Cplx> kappas;
  std::vector<double> residuals;
};

KSpectrum k_spectrum_from_L(const CommutingPair& pair, const Spectrum& spec, int N, int modes = 5);
KSpectrum k_spectrum_from_L(const KernelSpec& k, const Spectrum& spec, int N, int modes = 5);

struct SvdResult {
  std::vector<double> sigmas;            // descending
  std::vector<Cplx> chis;                // L eigenvalue attached to each singular pair
  std::vector<int> lModes;               // index of the L mode each pair came from
  Eigen::MatrixXcd rightFns;             // source-basis coefficients of u_n
  Eigen::MatrixXcd leftFns;              // target-basis coefficients of v_n
  std::vector<double> crossResiduals;    // target L residual of v_n
  std::vector<double> kstarkResiduals;   // |K*K u - sigma^2 u| / sigma^2
  std::vector<bool> belowFloor;          // sigma/sigma_0 < 1e-12
  double gramResidualU = 0.0;
  double gramResidualV = 0.0;
  bool regular = false;
  std::vector<std::string> warnings;
};

SvdResult svd_pipeline(const CommutingPair& pair, int basisSize = kDefaultBasis, int N = 128, int modes = 5);

struct OracleResult {
  std::vector<Cplx> eigenvalues;       // by magnitude, descending (square operators only)
  std::vector<double> singularValues;  // descending
};

OracleResult dense_oracle(const DenseOperator& K, bool eigen = true);

}  // namespace commutant
