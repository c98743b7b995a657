#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "torusflow/field.hpp"
#include "torusflow/metric.hpp"

namespace torusflow {

enum class Model { SemiGeodesic, Conformal };

// Candidate polynomial integral of degree n, homogeneous in momenta.
//
// Semi-geodesic model: F = sum_k a_k(t,x) (p1/g)^(n-k) p2^k.
// Conformal model:     F = sum_k a_k(q1,q2) p1^(n-k) p2^k.
struct IntegralCoeffs {
  int n = 0;
  Model model = Model::SemiGeodesic;
  std::vector<Field> a;  // size n+1, a[0] first
  bool normalized = false;

  void validate() const;
  std::vector<double> values_at(TorusPoint p) const;
};

// Univariate polynomial in s, lowest degree first.
struct HatPoly {
  std::vector<double> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  double eval(double s) const;
  std::complex<double> eval(std::complex<double> s) const;
  HatPoly derivative() const;
  bool is_zero(double tol = 0.0) const;
};

double hamiltonian_eval(const Metric& m, TorusPoint p, double p1, double p2);

// Coefficients of {F, H} in the basis (p1/g)^(n+1-m) p2^m, m = 0..n+1.
// All-zero iff F is a first integral at the point.
std::vector<double> bracket_residual(const IntegralCoeffs& F, const SemiGeodesicMetric& metric,
                                     TorusPoint p);

// Conformal companion in the basis p1^(n+1-m) p2^m.
std::vector<double> bracket_residual_conformal(const IntegralCoeffs& F, const ConformalMetric& metric,
                                               TorusPoint p);

double max_bracket_residual(const IntegralCoeffs& F, const Metric& metric, int res1, int res2);

// Fhat(s) = sum a_k s^k and Ghat(s) = n s Fhat - (1+s^2) Fhat'.
// Roots of Ghat locate the critical points of F on an energy circle.
struct HatPair {
  HatPoly F;
  HatPoly G;
};
HatPair hat_polys(std::span<const double> a, int n);

// Removes the p2^4 coefficient: a' = (a0-a4, a1, a2-2a4, a3, 0) and the
// shift a4, so that F4 = F4' + shift * (2H)^2 pointwise on {H=1/2}.
// Leaves Ghat unchanged.
struct CanonicalQuartic {
  std::array<double, 5> a;
  double shift = 0.0;
};
CanonicalQuartic canonicalize_quartic(const std::array<double, 5>& a);

// Coefficients A_0..A_n of F written in p = p1 - i p2 and conj(p):
// F = sum A_i p^(n-i) conj(p)^i. For real F, A_{n-i} = conj(A_i).
std::vector<std::complex<double>> kolokoltsov_coeffs(std::span<const double> momentum_coeffs);

struct KolokoltsovReport {
  std::vector<std::complex<double>> A0;  // per sample point
  std::vector<std::complex<double>> An;
  double spread_A0 = 0.0;
  double spread_An = 0.0;
  bool constant = false;
};

// Evaluates A_0, A_n of a conformal-model integral across sample points
// and flags non-constancy when the spread exceeds 1e-8.
KolokoltsovReport kolokoltsov_check(const IntegralCoeffs& F, std::span<const TorusPoint> samples);

// |Ghat(i)| (complex evaluation). Values below ~1e-10 mean the fiber
// derivative is divisible by H, i.e. a reducible/invalid candidate.
double check_not_divisible_by_H(const HatPoly& G);

}  // namespace torusflow
