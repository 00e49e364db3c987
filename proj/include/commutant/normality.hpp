#pragma once

// Adjoints, self-adjointness and normality of L = a d^2 + b d + c, and the
// commutation test for two second-order operators.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "commutant/catalog.hpp"

namespace commutant {

inline constexpr double kSelfAdjointTol = 1e-12;
inline constexpr double kCommuteTol = 1e-10;

// L* u = conj(a) u'' + (2 conj(a)' - conj(b)) u' + (conj(a)'' - conj(b)' + conj(c)) u
DiffOp adjoint(const DiffOp& L);

// The same operator in the real parameter t of y = mid + halfspan * t.
DiffOp pullback(const DiffOp& L);

// Residuals of Im a = 0, Re b = a', Im c = Im b'/2 (after pullback).
std::array<double, 3> self_adjoint_residuals(const DiffOp& L);
bool is_self_adjoint(const DiffOp& L, double tol = kSelfAdjointTol);

DiffOp op_add(const DiffOp& L, const DiffOp& D);
DiffOp op_scale(const DiffOp& L, Cplx s);

// Coefficients of u'''', u''', u'', u', u in L D u.
std::array<ExpPoly, 5> compose(const DiffOp& L, const DiffOp& D);
// Relative size of the coefficients of LD - DL.
double commutator_residual(const DiffOp& L, const DiffOp& D);

struct OpPairTest {
  std::array<double, 4> residuals{};  // the four coefficient relations
  bool commutes = false;
  std::optional<Cplx> alpha;          // D's leading coefficient = alpha * a
  std::optional<Cplx> beta;           // beta a = (B - alpha b)^2
  std::optional<double> fFormResidual;
  std::vector<std::string> diagnostics;
};

OpPairTest commute_ops(const DiffOp& L, const DiffOp& D, double tol = kCommuteTol);

struct NamedResidual {
  std::string name;
  double value = 0.0;
};

struct NormalityReport {
  bool normal = false;
  bool selfAdjoint = false;
  Cplx rescale = 1.0;  // factor making the leading coefficient real and positive
  DiffOp L0, L1;       // self-adjoint and skew-adjoint parts of the rescaled operator
  OpPairTest pairTest;
  std::optional<double> gamma;  // L1 = gamma (sqrt(a) d + ...)
  bool sqrtExact = false;
  std::vector<NamedResidual> conditions;  // final conditions, when normal and not self-adjoint
  double directResidual = 0.0;            // LL* - L*L via composition
  std::vector<std::string> diagnostics;
};

NormalityReport is_normal(const DiffOp& L);
bool is_normal_direct(const DiffOp& L, double tol = kCommuteTol);

}  // namespace commutant
