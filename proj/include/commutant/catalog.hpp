#pragma once

// Commuting (kernel, operator) pairs: Theorem-1 families on (-1, 1) and the
// intertwining families between (-1, 1) and a second segment.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "commutant/expalg.hpp"
#include "commutant/kernel.hpp"

namespace commutant {

struct Segment {
  Cplx a = -1.0;
  Cplx b = 1.0;
  Cplx midpoint() const { return 0.5 * (a + b); }
  Cplx halfspan() const { return 0.5 * (b - a); }
  Cplx map(double t) const { return midpoint() + t * halfspan(); }
  bool is_real() const { return a.imag() == 0.0 && b.imag() == 0.0; }
};

// L u = a u'' + b u' + c u on a segment.
struct DiffOp {
  ExpPoly a, b, c;
  Segment segment;
};

struct MainCase { Cplx lambda, mu, alpha1, alpha2; };
struct Special1Case { long m = 0; Cplx alpha, beta; };
struct Special2Case { Cplx lambda, alpha, beta; };
struct Special3Case { Cplx beta; std::vector<Cplx> p; };  // p quadratic, p'(0) = 0
struct Special4Case { std::vector<Cplx> p; Cplx beta; };
struct C2Item1Case { Cplx lambda, mu, alpha1, alpha2; long n = 0; };
struct C2Item2Case { Cplx lambda, alpha, beta; long n = 0; };
struct C2Item3Case { Cplx beta; double b = 1.0; };
struct C2Item4Case { Cplx beta; double a = 0.0, b = 1.0; };

using PairCase = std::variant<MainCase, Special1Case, Special2Case, Special3Case, Special4Case, C2Item1Case,
                              C2Item2Case, C2Item3Case, C2Item4Case>;

std::string case_name(const PairCase& c);
bool is_c2_case(const PairCase& c);

struct CaseInfo {
  std::string name;
  std::string parameters;
  std::string domain;
  std::string kernel;
};
std::vector<CaseInfo> list_cases();

struct CommutingPair {
  PairCase kase;
  KernelSpec kernel;
  DiffOp op;
  std::optional<DiffOp> opTarget;

  const DiffOp& target_op() const { return opTarget ? *opTarget : op; }
  bool two_segments() const { return opTarget.has_value(); }
};

// Builds and certifies the pair (residue grid check); tau applies a gauge.
CommutingPair build_pair(const PairCase& c, Cplx tau = 0.0);
// Construction without the residue certificate, for deliberately broken pairs.
CommutingPair build_pair_unchecked(const PairCase& c);

CommutingPair gauge_transform(const CommutingPair& p, Cplx tau);
DiffOp gauge_op(const DiffOp& op, Cplx tau);
// Whether gauging a two-segment pair by tau keeps its operators self-adjoint.
// Parameters are taken as given (item 2 may carry a complex beta here).
bool gauge_keeps_self_adjoint(const PairCase& c, Cplx tau);

struct ImaginaryLambdaStatus {
  bool applies = false;  // lambda purely imaginary
  bool ok = true;
  std::string detail;
};
// Admissibility of (lambda, mu, alpha1) when lambda is imaginary.
ImaginaryLambdaStatus imaginary_lambda_check(Cplx lambda, Cplx mu, Cplx alpha1);

struct EndpointResidual {
  Cplx point;
  double a_abs;   // |a(e)|
  double b_abs;   // |b(e) - a'(e)|
};

struct ValidationReport {
  std::vector<EndpointResidual> boundary;
  bool boundaryOk = true;
  ImaginaryLambdaStatus imaginaryLambda;
  bool nontrivial = true;
  int poleOrderAtZero = 0;
  bool passed() const { return boundaryOk && imaginaryLambda.ok && nontrivial; }
};

inline constexpr double kBoundaryTol = 1e-12;

ValidationReport validate_pair(const CommutingPair& p);
std::vector<EndpointResidual> boundary_residuals(const DiffOp& op);

enum class Regularity { Regular, Singular };

struct RegularityReport {
  Regularity verdict = Regularity::Singular;
  std::vector<Cplx> poles;         // non-removable kernel poles in the window
  std::vector<Cplx> logSingular;   // poles shifted by the source endpoints
  std::vector<Cplx> zerosOfA;      // zeros of a along the target line
  std::vector<Cplx> removable;     // zerosOfA minus logSingular
  std::vector<Cplx> witnesses;     // target endpoints that decided the verdict
};

RegularityReport classify_regularity(const CommutingPair& p);

// Zeros of f on the straight line through p0 and p1, parameter t in [tmin, tmax].
std::vector<Cplx> zeros_on_line(const ExpPoly& f, Cplx p0, Cplx p1, double tmin, double tmax);

}  // namespace commutant
