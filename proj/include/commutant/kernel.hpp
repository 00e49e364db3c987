#pragma once

// Kernels k(z) = e^{tau z} N(z) / D(z) with D in {1, z, sinh(lambda z/2)}.

#include <array>
#include <map>
#include <vector>

#include "commutant/expalg.hpp"

namespace commutant {

enum class DenomKind { One, Z, SinhHalf };

struct Denominator {
  DenomKind kind = DenomKind::One;
  Cplx lambda = 0.0;  // SinhHalf only

  static Denominator one() { return {}; }
  static Denominator z() { return {DenomKind::Z, 0.0}; }
  static Denominator sinh_half(Cplx lambda);

  ExpPoly as_exppoly() const;
  bool has_zeros() const { return kind != DenomKind::One; }
  // n-th zero: 0 for Z, 2 pi i n / lambda for SinhHalf.
  Cplx zero(long n) const;
  long nearest_index(Cplx z) const;
};

struct KernelSpec {
  ExpPoly numerator;
  Denominator denom;
  Cplx tau = 0.0;

  // e^{tau z} N(z)
  ExpPoly full_numerator() const;
};

// Distance from a denominator zero inside which series evaluation is used
// (capped further by a quarter of the zero spacing).
inline constexpr double kSeriesRadius = 0.5;
inline constexpr int kSeriesTerms = 30;
inline constexpr double kPoleHitRadius = 1e-12;
inline constexpr double kRemovableTol = 1e-10;

// k, k', k''.  Throws PoleHit within kPoleHitRadius of a non-removable pole.
std::array<Cplx, 3> kernel_jet(const KernelSpec& k, Cplx z);
Cplx kernel_eval(const KernelSpec& k, Cplx z);
// Closed-form quotient path only (no series switch); used for consistency checks.
std::array<Cplx, 3> kernel_jet_direct(const KernelSpec& k, Cplx z);

// Laurent data at a denominator zero z0: q[0] is the residue (zeroed when
// removable), q[j] the coefficient of (z-z0)^{j-1}.
struct LocalSeries {
  Cplx center;
  bool pole = false;
  std::vector<Cplx> q;
};
LocalSeries kernel_local_series(const KernelSpec& k, Cplx z0, int terms);

struct LaurentData {
  Cplx pole = 0.0;
  std::vector<Cplx> factorial;  // n! [z^n]
  std::vector<Cplx> plain;      // plain[0] = pole, plain[j] = [z^{j-1}]
};
LaurentData kernel_laurent(const KernelSpec& k, int order = 8);

// Precomputed derivative data for repeated evaluation of one kernel.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const KernelSpec& k);
  const KernelSpec& spec() const { return k_; }
  std::array<Cplx, 3> jet(Cplx z) const;
  std::array<Cplx, 3> jet_direct(Cplx z) const;
  Cplx eval(Cplx z) const { return jet(z)[0]; }
  LocalSeries local_series(Cplx z0, int terms) const;
  Cplx smooth_eval(Cplx z, Cplx z0) const;
  double series_radius() const { return radius_; }

 private:
  std::vector<Cplx> numerator_taylor(Cplx z0, int terms) const;
  std::vector<Cplx> denominator_taylor(long n, int terms) const;

  KernelSpec k_;
  std::vector<ExpPoly> g_;  // derivatives of e^{tau z} N
  std::vector<ExpPoly> d_;  // derivatives of D (first three)
  double radius_ = kSeriesRadius;
  mutable std::map<long, LocalSeries> cache_;  // full-length series per zero index
  const LocalSeries& cached_series(long n) const;
};

// Genuine (non-removable) poles with |z| <= radius.
std::vector<Cplx> kernel_poles(const KernelSpec& k, double radius);
bool is_nonremovable_pole(const KernelSpec& k, Cplx z0);
Cplx kernel_residue(const KernelSpec& k, Cplx z0);
// k(z) - r/(z - z0) with r the residue at z0; series-safe near z0.
Cplx kernel_smooth_eval(const KernelSpec& k, Cplx z, Cplx z0);

}  // namespace commutant
