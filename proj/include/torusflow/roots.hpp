#pragma once

#include <array>
#include <complex>
#include <vector>

namespace torusflow {

// Conjugate pair alpha +/- i*beta, beta > 0.
struct ComplexPair {
  double alpha = 0.0;
  double beta = 0.0;
};

// Classified roots of a real polynomial of degree <= 4.
struct RootSet {
  int degree = 0;                        // nominal degree of the input
  std::vector<double> real_roots;        // ascending
  std::vector<int> real_mult;            // multiplicity per real root
  std::vector<ComplexPair> complex_pairs;
  bool degree_drop = false;              // leading coefficient collapsed
  double leading_ratio = 0.0;            // |c_deg| / max_k |c_k|
  double condition = 0.0;                // worst root condition estimate

  // All roots with multiplicity, pairs expanded to both members.
  std::vector<std::complex<double>> all_roots() const;
};

enum class RootClass { Hyperbolic, Elliptic, Degenerate };

// Coefficients lowest degree first. Closed form plus one Newton polish
// step per root; residual contract |p(s)| <= 1e-10 * max|c| * max(1,|s|)^deg.
RootSet solve_quadratic(const std::array<double, 3>& c);
RootSet solve_cubic(const std::array<double, 4>& c);
RootSet solve_quartic(const std::array<double, 5>& c);

// Degenerate when roots collide within tol, a pair sits within tol of the
// real axis, or the leading coefficient has collapsed (monic-normalized
// comparison). Default tol 1e-7.
RootClass classify_roots(const RootSet& rs, double tol = 1e-7);

const char* root_class_name(RootClass c);

}  // namespace torusflow
