#pragma once

// Exponential polynomials: finite sums p_j(y) e^{lambda_j y} with complex data.
// Canonical form: exponents pairwise separated by more than kMergeTol, sorted
// lexicographically on (re, im), no zero polynomials, no trailing zeros.

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace commutant {

using Cplx = std::complex<double>;

inline constexpr double kMergeTol = 1e-12;
inline constexpr int kMaxDegree = 8;

// Throws ParameterDomain on NaN/Inf.
Cplx make_cplx(double re, double im = 0.0);
bool is_finite(Cplx z);

struct ExpTerm {
  Cplx exponent;
  std::vector<Cplx> poly;  // ascending degree
};

class ExpPoly {
 public:
  ExpPoly() = default;
  explicit ExpPoly(std::vector<ExpTerm> terms);

  static ExpPoly constant(Cplx c);
  static ExpPoly exponential(Cplx lambda, Cplx coeff = 1.0);
  static ExpPoly polynomial(std::vector<Cplx> coeffs);
  static ExpPoly monomial(int degree, Cplx coeff = 1.0);
  static ExpPoly cosh(Cplx lambda);  // cosh(lambda y)
  static ExpPoly sinh(Cplx lambda);  // sinh(lambda y)
  static ExpPoly cos(Cplx omega);    // cos(omega y)
  static ExpPoly sin(Cplx omega);

  const std::vector<ExpTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Magnitude of the data this value was computed from; 0 means "absent",
  // in which case zero tests are absolute.
  double scale() const { return scale_; }
  void set_scale(double s) { scale_ = s; }
  double max_coeff() const;
  double reference_scale() const;  // max(scale, max_coeff)
  int max_degree() const;

  std::string to_string(const std::string& var = "y") const;

 private:
  std::vector<ExpTerm> terms_;
  double scale_ = 0.0;
};

ExpPoly ep_add(const ExpPoly& f, const ExpPoly& g);
ExpPoly ep_sub(const ExpPoly& f, const ExpPoly& g);
ExpPoly ep_neg(const ExpPoly& f);
ExpPoly ep_scale(const ExpPoly& f, Cplx s);
ExpPoly ep_mul(const ExpPoly& f, const ExpPoly& g);
ExpPoly ep_diff(const ExpPoly& f);
ExpPoly ep_diff(const ExpPoly& f, int times);
Cplx ep_eval(const ExpPoly& f, Cplx y);
// Sum of term magnitudes at y; a cancellation-free size reference.
double ep_eval_abs(const ExpPoly& f, Cplx y);
ExpPoly ep_translate(const ExpPoly& f, Cplx z);
// f(shift + factor*t) as a function of t.
ExpPoly ep_affine(const ExpPoly& f, Cplx shift, Cplx factor);
// Complex conjugate as a function of a real variable.
ExpPoly ep_conj(const ExpPoly& f);
ExpPoly ep_real(const ExpPoly& f);
ExpPoly ep_imag(const ExpPoly& f);
bool ep_is_zero(const ExpPoly& f, double tol);
// Relative size of f against its scale metadata (absolute when absent).
double ep_zero_residual(const ExpPoly& f);
bool ep_equal(const ExpPoly& f, const ExpPoly& g, double tol = 1e-12);
// Constant part (coefficient of y^0 e^{0 y}).
Cplx ep_constant_term(const ExpPoly& f);
ExpPoly ep_drop_constant(const ExpPoly& f);
// Least-squares s with g ~ s f over aligned coefficients.
std::optional<Cplx> ep_ratio(const ExpPoly& g, const ExpPoly& f);
// Exact square root when f is a single-exponent term whose polynomial is a
// perfect square; sign chosen so the root has positive real part at y0.
std::optional<ExpPoly> ep_sqrt(const ExpPoly& f, Cplx y0 = 0.0);

inline ExpPoly operator+(const ExpPoly& f, const ExpPoly& g) { return ep_add(f, g); }
inline ExpPoly operator-(const ExpPoly& f, const ExpPoly& g) { return ep_sub(f, g); }
inline ExpPoly operator-(const ExpPoly& f) { return ep_neg(f); }
inline ExpPoly operator*(const ExpPoly& f, const ExpPoly& g) { return ep_mul(f, g); }
inline ExpPoly operator*(Cplx s, const ExpPoly& f) { return ep_scale(f, s); }
inline ExpPoly operator*(const ExpPoly& f, Cplx s) { return ep_scale(f, s); }

}  // namespace commutant
