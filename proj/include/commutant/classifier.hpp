#pragma once

// Inverse problem: from the Taylor/Laurent coefficients of a kernel at 0,
// decide whether a commuting operator can exist and recover its parameters.

#include <string>
#include <vector>

#include "commutant/catalog.hpp"

namespace commutant {

enum class Convention { FactorialNormalized, PlainPowers };

// Regular data: coeffs[n] describes z^n.  Singular data (poleCoeff != 0):
// k = z^{-1}(k0 + k1 z + ...), so coeffs[0] is the residue.
// Factorial convention stores n! times the plain coefficient.
struct TaylorData {
  Cplx poleCoeff = 0.0;
  std::vector<Cplx> coeffs;
  Convention convention = Convention::FactorialNormalized;
  bool singular() const { return poleCoeff != Cplx(0.0); }
};

inline constexpr double kCoeffTol = 1e-10;
inline constexpr double kConsistencyTol = 1e-8;

TaylorData taylor_data(const KernelSpec& k, Convention conv, int count = 8);
TaylorData to_convention(const TaylorData& d, Convention conv);

struct GaugeResult {
  TaylorData data;
  Cplx tau = 0.0;
};
// Coefficients of k(z) e^{tau z} with tau = -k1/k0.
GaugeResult gauge_normalize(const TaylorData& d);

enum class Verdict { RegularCommuting, SingularCandidate, Trivial, NoCommutant };
enum class CaseAB { None, A, B };

std::string verdict_name(Verdict v);

struct ClassificationResult {
  Verdict verdict = Verdict::NoCommutant;
  Cplx lambda2 = 0.0, mu2 = 0.0, nu = 0.0;  // RegularCommuting
  Cplx alpha1 = 0.0;                        // SingularCandidate
  CaseAB caseAB = CaseAB::None;
  std::vector<std::string> constraints;
  Cplx gaugeApplied = 0.0;
  double consistencyResidual = 0.0;
  std::vector<std::string> diagnostics;
};

ClassificationResult classify_regular(const TaylorData& d);
ClassificationResult classify_singular(const TaylorData& d);
// Dispatches on poleCoeff, converting the convention as needed.
ClassificationResult classify(const TaylorData& d);

// Relative residual of the coefficient relations for a concrete L: the n-th
// z-derivative of (R1) at 0 for n <= maxOrder (regular), or the z^m
// coefficients of z^3 (R1) for m <= maxOrder (singular).  maxOrder < 0 uses
// every order the data supports.
double verify_candidate(const TaylorData& d, const DiffOp& L, int maxOrder = 3);

// Residual of k'' + lambda coth(lambda z/2) k' + nu k = 0 (or z k'' + 2k' + nu z k
// when lambda = 0) and of the u = k sinh(lambda z/2) form, maximum of both.
double fit_kernel_ode(const KernelSpec& k, Cplx lambda, Cplx nu, const std::vector<Cplx>& grid);

// a for the recovered regular family: cosh(lambda y) - cosh(lambda), or y^2 - 1.
DiffOp regular_operator(Cplx lambda2, Cplx nu);

}  // namespace commutant
