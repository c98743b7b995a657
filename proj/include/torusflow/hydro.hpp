#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "torusflow/integral.hpp"
#include "torusflow/roots.hpp"

namespace torusflow {

// n x n matrix of the evolution system on the coefficient vector
// U = (a_0, ..., a_{n-1}): subdiagonal a_{n-1}, last column
// (k+2) a_{k+2} - (n-k) a_k.
struct SystemMatrix {
  int n = 0;
  std::array<double, 16> m{};  // row-major

  double operator()(int i, int j) const { return m[i * n + j]; }
  double& operator()(int i, int j) { return m[i * n + j]; }
};

SystemMatrix build_matrix_A(std::span<const double> a, int n);

// Max relative mismatch between eigenvalues of A (dense eigensolver) and
// {g * s_i} from the hat-polynomial roots. Expects normalized input
// (a_{n-1} = g, a_n = 1); <= 1e-9 for well-conditioned inputs.
double eigen_crosscheck(const SystemMatrix& A, double g, const RootSet& rs);

// Per-root record: s, lambda = g*s, and the critical value
// r = Fhat(s)/(1+s^2)^(n/2).
struct RiemannRecord {
  std::complex<double> s;
  std::complex<double> lambda;
  std::complex<double> r;
  // For n=3 complex pairs r is branch-ambiguous; r2 = r^2 is the
  // single-valued invariant.
  std::complex<double> r2;
  bool is_real = false;
};

struct RiemannData {
  std::vector<RiemannRecord> records;  // pairs first (+beta then -beta), reals ascending
  RootClass cls = RootClass::Degenerate;
};

// Throws if any root sits within 1e-10 of +/- i (reducible candidate).
RiemannData riemann_invariants(const HatPoly& Fhat, const RootSet& rs, double g, int n,
                               double class_tol = 1e-7);

// d s3 / d a_i for a simple root s3 of the canonicalized quartic Ghat4:
// (-4 s3, 1 - 3 s3^2, 2 s3 (1 - s3^2), s3^2 (3 - s3^2)) / Ghat4'(s3).
std::array<double, 4> root_sensitivity(const std::array<double, 4>& a, double s3);

// Jacobian (da_i / dr_j) for four distinct roots of the canonicalized
// quartic: inverse of M[i][j] = s_i^j / (1+s_i^2)^2 with rows in
// pair-first root order. Throws on (near-)singular M.
struct InvariantJacobian {
  std::vector<std::complex<double>> ordered_roots;       // pair+, pair-, reals ascending
  std::array<std::array<std::complex<double>, 4>, 4> M;  // dr_i/da_j
  std::array<std::array<std::complex<double>, 4>, 4> Minv;
};
InvariantJacobian jacobian_da_dr(const std::array<double, 4>& a, const RootSet& rs);

// Calibrated factor in the genuine-nonlinearity closed form, pinned by
// the exact-arithmetic identity check (exact::lemma2_gamma_factor).
inline constexpr double kGenuineNonlinearityFactor = 3.0;

struct NonlinearityReport {
  double s3 = 0.0;
  double S = 0.0;           // (s3-s1)(s3-s2)(s3-s4)
  double Gprime = 0.0;      // Ghat4'(s3)
  double gamma_s3 = 0.0;    // (a3+a1) s3^2 + 4 a0 s3 - (a1+a3)
  double dlam_dr = 0.0;     // closed form x calibration factor
  double oracle_dlam_dr = 0.0;  // central-difference Newton-reconstruction oracle
  bool im_r_zero_locus = false; // pair invariant is real at this point
};

// One report per real root of the canonicalized quartic, in ascending
// root order. Preconditions: elliptic root pattern, a4 = 0 implied by the
// 4-entry coefficient array, a3 > 0.
std::vector<NonlinearityReport> genuine_nonlinearity(const std::array<double, 4>& a,
                                                     const RootSet& rs);

// gamma and the degree-<=1 remainder of Ghat4 / gamma in closed form.
// Throws when a1 + a3 == 0 (gamma degenerates; separate handling).
struct RemainderGamma {
  HatPoly gamma;
  HatPoly R;
};
RemainderGamma remainder_gamma(const std::array<double, 4>& a);

// Coefficient ratios of the quartic family whose hat-derivative is
// divisible by gamma: roots {alpha +/- i beta, mu, -1/mu} and a real
// pair invariant.
struct VieteParam {
  double alpha = 0.0, beta = 0.0;
  double mu = 0.0;
  double a0_over_a3 = 0.0, a1_over_a3 = 0.0, a2_over_a3 = 0.0;
};
VieteParam viete_parametrization(double alpha, double beta);

// Plain periodic grid of doubles, row index = u1, column index = u2.
struct Grid2 {
  int n1 = 0, n2 = 0;
  std::vector<double> data;

  Grid2() = default;
  Grid2(int a, int b) : n1(a), n2(b), data(static_cast<size_t>(a) * b, 0.0) {}
  double& at(int i, int j) { return data[static_cast<size_t>((i % n1 + n1) % n1) * n2 + ((j % n2 + n2) % n2)]; }
  double at(int i, int j) const {
    return data[static_cast<size_t>((i % n1 + n1) % n1) * n2 + ((j % n2 + n2) % n2)];
  }
};

struct EllipticPdeResult {
  double max_residual = 0.0;       // second-order equation for v
  Grid2 discriminant;              // principal-symbol discriminant per node
  double max_first_order = 0.0;    // reduced first-order pair, if u given
};

// Flux-form centered differences for
//   (v_t/b)_t + ((a/b) v_x)_t + ((a/b) v_t)_x + (((a^2+b^2)/b) v_x)_x
// with a = alpha~, b = beta~; also evaluates the discriminant
// (a/b)^2 - (1/b)(a^2+b^2)/b, which is identically -1.
EllipticPdeResult elliptic_pde_residual(const std::optional<Grid2>& u, const Grid2& v,
                                        const Grid2& alpha, const Grid2& beta, double h1, double h2);

// Newton reconstruction of canonical quartic coefficients from target
// invariant values (used by the finite-difference oracle and tests).
std::array<double, 4> reconstruct_coeffs_from_invariants(
    const std::array<std::complex<double>, 4>& targets, const std::array<double, 4>& a_init,
    const std::vector<std::complex<double>>& root_order, int max_iter = 50);

}  // namespace torusflow
