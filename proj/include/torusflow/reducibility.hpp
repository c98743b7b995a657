#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "torusflow/integral.hpp"
#include "torusflow/metric.hpp"

namespace torusflow {

// Travelling-wave solution of the degree-3 coefficient system: every
// coefficient is a function of xi = x - lambda*t, with
//   a1 = (3-lambda)/2 + c1 a2^2
//   a0 = a2 (1 - lambda c1) + c2 a2^3
//   lambda a0 = (c1/3) a2^3 + ((3-lambda)/2) a2 + c3
// and c3 = 0, c1 = 3(lambda-1)/(2 lambda^2), c2 = (lambda-1)/(2 lambda^3).
struct SimpleWaveSolution {
  double lambda = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  Profile a2;  // also the metric coefficient g
  Profile a1;
  Profile a0;
  Lattice lat;

  SemiGeodesicMetric metric() const;    // g(t,x) = a2(x - lambda t)
  IntegralCoeffs cubic_integral() const;  // degree-3, coefficients (a0,a1,a2,1)
  IntegralCoeffs linear_integral() const; // F1 = p1 + lambda p2
};

// Throws for lambda = 0 ("flat case; no simple wave needed") and for
// non-positive profiles.
SimpleWaveSolution simple_wave(double lambda, Profile a2, Lattice lat = {});

struct ReductionCertificate {
  int degree = 0;
  std::array<double, 3> k{};  // k1, k2 (cubic) or k1, k2, k3 (quartic)
  double residual = 0.0;
  int grid_nodes = 0;
  std::string note;
  std::string render() const;
};

// Coefficientwise check of F3 = k1 F1^3 + 2 k2 H F1 with
// k1 = c2 = (lambda-1)/(2 lambda^3) and k2 = (3-lambda)/(2 lambda),
// compared in the basis (p1/g)^(3-m) p2^m at each node.
// k_override substitutes trial constants (negative controls).
ReductionCertificate verify_cubic_identity(const SimpleWaveSolution& sol, int nodes,
                                           std::optional<std::array<double, 2>> k_override = {});

// Least-squares fit of (k1,k2,k3) in F4 = k1 F2^2 + 2 k2 H F2 + 4 k3 H^2
// over the grid, then residual evaluation. F2 must satisfy the bracket
// precondition. Throws when the basis {F2^2, HF2, H^2} is linearly
// dependent on the grid.
ReductionCertificate verify_quartic_identity(const IntegralCoeffs& F4, const IntegralCoeffs& F2,
                                             const Metric& metric, int res1, int res2,
                                             double bracket_tol = 1e-8);

struct QuarticFactorization {
  std::array<double, 3> K{};  // s-polynomial coefficients of K, lowest first
  std::array<double, 3> M{};  // quotient, lowest first
  double remainder = 0.0;     // max |remainder coefficient|
  bool k_proportional_to_H = false;
};

// Divides Fhat4(s) - r (1+s^2)^2 by K(s) = s^2 - 2 alpha s + alpha^2+beta^2.
// A remainder above 1e-8 flags a non-integral input.
QuarticFactorization factor_quartic_elliptic(const std::array<double, 5>& a, double r, double alpha,
                                             double beta);

struct ConformalResidualReport {
  double max_linear = 0.0;       // b0 (1/L)_q1 + b1 (1/L)_q2
  double max_second_order = 0.0; // B L_11 - 2A L_12 - B L_22
  double max_first_order = 0.0;  // the (b1 L) pair, when a b1 field is given
  std::array<double, 2> invariant_direction{};  // (b1, -b0) for the linear mode
};

struct LinearMode {
  double b0 = 0.0, b1 = 0.0;
};
struct QuadraticMode {
  double A = 0.0, B = 0.0;
  Field b1;  // optional
};

ConformalResidualReport conformal_residuals(const Field& lambda, const LinearMode& mode, int res1,
                                            int res2);
ConformalResidualReport conformal_residuals(const Field& lambda, const QuadraticMode& mode,
                                            int res1, int res2);

}  // namespace torusflow
