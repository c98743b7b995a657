#include "torusflow/hydro.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace torusflow {

namespace {

using cplx = std::complex<double>;

std::vector<cplx> ordered_roots_pair_first(const RootSet& rs) {
  std::vector<cplx> out;
  for (const auto& p : rs.complex_pairs) {
    out.emplace_back(p.alpha, p.beta);
    out.emplace_back(p.alpha, -p.beta);
  }
  for (double r : rs.real_roots) out.emplace_back(r, 0.0);
  return out;
}

cplx invariant_value(const HatPoly& Fhat, cplx s, int n) {
  const cplx w = 1.0 + s * s;
  const cplx den = (n == 4) ? w * w : std::pow(w, 1.5);
  return Fhat.eval(s) / den;
}

}  // namespace

SystemMatrix build_matrix_A(std::span<const double> a, int n) {
  if (n != 3 && n != 4) throw std::invalid_argument("build_matrix_A: unsupported degree");
  if (static_cast<int>(a.size()) != n + 1)
    throw std::invalid_argument("build_matrix_A: need n+1 coefficient values");
  SystemMatrix A;
  A.n = n;
  A.m.fill(0.0);
  for (int i = 1; i < n; ++i) A(i, i - 1) = a[n - 1];
  for (int i = 0; i < n; ++i) {
    const double hi = (i + 1 <= n) ? (i + 1) * a[i + 1] : 0.0;
    const double lo = (i - 1 >= 0) ? (n - i + 1) * a[i - 1] : 0.0;
    A(i, n - 1) += hi - lo;
  }
  return A;
}

double eigen_crosscheck(const SystemMatrix& A, double g, const RootSet& rs) {
  const int n = A.n;
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = A(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen_crosscheck: eigensolver failed");

  std::vector<cplx> targets;
  for (cplx s : rs.all_roots()) targets.push_back(g * s);
  if (static_cast<int>(targets.size()) != n)
    throw std::invalid_argument("eigen_crosscheck: root count does not match matrix size");

  std::vector<bool> used(targets.size(), false);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const cplx ev = es.eigenvalues()(i);
    double best = 0.0;
    size_t bi = targets.size();
    for (size_t j = 0; j < targets.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(ev - targets[j]);
      if (bi == targets.size() || d < best) {
        best = d;
        bi = j;
      }
    }
    used[bi] = true;
    worst = std::max(worst, best / std::max(1.0, std::abs(targets[bi])));
  }
  return worst;
}

RiemannData riemann_invariants(const HatPoly& Fhat, const RootSet& rs, double g, int n,
                               double class_tol) {
  if (n != 3 && n != 4) throw std::invalid_argument("riemann_invariants: unsupported degree");
  for (cplx s : rs.all_roots()) {
    if (std::abs(s - cplx(0.0, 1.0)) < 1e-10 || std::abs(s + cplx(0.0, 1.0)) < 1e-10)
      throw std::domain_error("integral divisible by H (reducible candidate): root at +/- i");
  }
  RiemannData out;
  out.cls = classify_roots(rs, class_tol);
  for (cplx s : ordered_roots_pair_first(rs)) {
    RiemannRecord rec;
    rec.s = s;
    rec.lambda = g * s;
    rec.r = invariant_value(Fhat, s, n);
    rec.r2 = rec.r * rec.r;
    rec.is_real = s.imag() == 0.0;
    out.records.push_back(rec);
  }
  return out;
}

std::array<double, 4> root_sensitivity(const std::array<double, 4>& a, double s3) {
  const HatPoly G = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4).G;
  const double gp = G.derivative().eval(s3);
  double scale = 0.0;
  for (double c : G.c) scale = std::max(scale, std::fabs(c));
  if (std::fabs(gp) < 1e-12 * std::max(1.0, scale))
    throw std::domain_error("root_sensitivity: repeated root (Ghat4' vanishes)");
  const double s2 = s3 * s3;
  return {-4.0 * s3 / gp, (1.0 - 3.0 * s2) / gp, 2.0 * s3 * (1.0 - s2) / gp,
          s2 * (3.0 - s2) / gp};
}

InvariantJacobian jacobian_da_dr(const std::array<double, 4>& a, const RootSet& rs) {
  InvariantJacobian out;
  out.ordered_roots = ordered_roots_pair_first(rs);
  if (out.ordered_roots.size() != 4)
    throw std::invalid_argument("jacobian_da_dr: need four roots");
  const HatPoly G = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4).G;
  double scale = 0.0;
  for (double c : G.c) scale = std::max(scale, std::fabs(c));
  for (cplx s : out.ordered_roots) {
    const double m = std::max(1.0, std::abs(s));
    if (std::abs(G.eval(s)) > 1e-6 * scale * m * m * m * m)
      throw std::invalid_argument("jacobian_da_dr: roots do not match the coefficients");
  }
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j)
      if (std::abs(out.ordered_roots[i] - out.ordered_roots[j]) < 1e-10)
        throw std::domain_error("jacobian_da_dr: root collision");

  Eigen::Matrix4cd M;
  for (int i = 0; i < 4; ++i) {
    const cplx s = out.ordered_roots[i];
    const cplx w = 1.0 + s * s;
    cplx pw = 1.0;
    for (int j = 0; j < 4; ++j) {
      M(i, j) = pw / (w * w);
      pw *= s;
    }
  }
  Eigen::FullPivLU<Eigen::Matrix4cd> lu(M);
  if (!lu.isInvertible()) throw std::domain_error("jacobian_da_dr: singular envelope matrix");
  const Eigen::Matrix4cd Minv = lu.inverse();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      out.M[i][j] = M(i, j);
      out.Minv[i][j] = Minv(i, j);
    }
  return out;
}

std::array<double, 4> reconstruct_coeffs_from_invariants(
    const std::array<std::complex<double>, 4>& targets, const std::array<double, 4>& a_init,
    const std::vector<std::complex<double>>& root_order, int max_iter) {
  std::array<double, 4> a = a_init;
  std::vector<cplx> track = root_order;
  for (int it = 0; it < max_iter; ++it) {
    const auto hp = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4);
    std::array<double, 5> gc{};
    for (size_t k = 0; k < hp.G.c.size() && k < 5; ++k) gc[k] = hp.G.c[k];
    const RootSet rs = solve_quartic(gc);
    auto roots = rs.all_roots();
    // keep the root labelling continuous along the Newton path
    std::vector<cplx> matched(4);
    std::vector<bool> used(roots.size(), false);
    for (int i = 0; i < 4; ++i) {
      double best = 0.0;
      size_t bi = roots.size();
      for (size_t j = 0; j < roots.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(roots[j] - track[i]);
        if (bi == roots.size() || d < best) {
          best = d;
          bi = j;
        }
      }
      used[bi] = true;
      matched[i] = roots[bi];
    }
    track = matched;

    Eigen::Vector4cd res;
    Eigen::Matrix4cd M;
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
      const cplx s = matched[i];
      const cplx w = 1.0 + s * s;
      res(i) = targets[i] - hp.F.eval(s) / (w * w);
      worst = std::max(worst, std::abs(res(i)));
      cplx pw = 1.0;
      for (int j = 0; j < 4; ++j) {
        M(i, j) = pw / (w * w);
        pw *= s;
      }
    }
    if (worst < 1e-13) break;
    const Eigen::Vector4cd da = M.fullPivLu().solve(res);
    for (int j = 0; j < 4; ++j) a[j] += da(j).real();
  }
  return a;
}

std::vector<NonlinearityReport> genuine_nonlinearity(const std::array<double, 4>& a,
                                                     const RootSet& rs) {
  if (rs.complex_pairs.size() != 1 || rs.real_roots.size() != 2)
    throw std::invalid_argument("genuine_nonlinearity: needs one complex pair and two real roots");
  if (a[3] <= 0.0) throw std::invalid_argument("genuine_nonlinearity: a3 must be positive");
  if (std::fabs(rs.real_roots[1] - rs.real_roots[0]) < 1e-10)
    throw std::domain_error("genuine_nonlinearity: real roots collide");

  const auto hp = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4);
  const HatPoly Gp = hp.G.derivative();
  const ComplexPair pr = rs.complex_pairs[0];
  const std::vector<cplx> order = ordered_roots_pair_first(rs);

  const cplx rpair = invariant_value(hp.F, cplx(pr.alpha, pr.beta), 4);
  const bool im_zero = std::fabs(rpair.imag()) <= 1e-10 * std::max(1.0, std::abs(rpair));

  std::array<cplx, 4> base_r;
  for (int i = 0; i < 4; ++i) base_r[i] = invariant_value(hp.F, order[i], 4);

  std::vector<NonlinearityReport> reports;
  for (size_t k = 0; k < rs.real_roots.size(); ++k) {
    const double s3 = rs.real_roots[k];
    const double s4 = rs.real_roots[1 - k];
    NonlinearityReport rep;
    rep.s3 = s3;
    rep.S = ((s3 - pr.alpha) * (s3 - pr.alpha) + pr.beta * pr.beta) * (s3 - s4);
    rep.Gprime = Gp.eval(s3);
    rep.gamma_s3 = (a[3] + a[1]) * s3 * s3 + 4.0 * a[0] * s3 - (a[1] + a[3]);
    if (std::fabs(rep.S) < 1e-12 || std::fabs(rep.Gprime) < 1e-12)
      throw std::domain_error("genuine_nonlinearity: S or Ghat4' below 1e-12");
    const double w = 1.0 + s3 * s3;
    rep.dlam_dr = kGenuineNonlinearityFactor * w * w * rep.gamma_s3 / (rep.S * rep.Gprime);
    rep.im_r_zero_locus = im_zero;

    // central-difference oracle through the invariant chart
    const int slot = 2 + static_cast<int>(k);
    const double eps = 1e-6;
    auto lam_at = [&](double delta) {
      std::array<cplx, 4> t = base_r;
      t[slot] += delta;
      const auto ap = reconstruct_coeffs_from_invariants(t, a, order);
      const auto gp2 = hat_polys(std::array<double, 5>{ap[0], ap[1], ap[2], ap[3], 0.0}, 4);
      std::array<double, 5> gc{};
      for (size_t m = 0; m < gp2.G.c.size() && m < 5; ++m) gc[m] = gp2.G.c[m];
      const RootSet rs2 = solve_quartic(gc);
      double best = 0.0, bs = 0.0;
      bool first = true;
      for (double rr : rs2.real_roots) {
        const double d = std::fabs(rr - s3);
        if (first || d < best) {
          best = d;
          bs = rr;
          first = false;
        }
      }
      return ap[3] * bs;
    };
    rep.oracle_dlam_dr = (lam_at(eps) - lam_at(-eps)) / (2.0 * eps);
    reports.push_back(rep);
  }
  return reports;
}

RemainderGamma remainder_gamma(const std::array<double, 4>& a) {
  const double p = a[1] + a[3];
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::fabs(x));
  if (std::fabs(p) < 1e-14 * std::max(1.0, scale))
    throw std::domain_error("remainder_gamma: a1 + a3 = 0, gamma degenerates (cases 3/4)");
  RemainderGamma out;
  out.gamma.c = {-p, 4.0 * a[0], p};
  const double bracket = a[1] * a[1] * a[1] + a[1] * a[1] * a[3] -
                         a[1] * (4.0 * a[0] * a[2] + a[3] * a[3]) +
                         a[3] * (8.0 * a[0] * a[0] - 4.0 * a[0] * a[2] - a[3] * a[3]);
  const double f = 2.0 * bracket / (p * p * p);
  out.R.c = {f * p, -4.0 * a[0] * f};
  return out;
}

VieteParam viete_parametrization(double alpha, double beta) {
  if (alpha == 0.0)
    throw std::invalid_argument(
        "viete_parametrization: alpha = 0 forces beta = 1, a root at +/- i (excluded)");
  if (beta == 0.0) throw std::invalid_argument("viete_parametrization: beta must be nonzero");
  VieteParam out;
  out.alpha = alpha;
  out.beta = beta;
  const double T = alpha * alpha + beta * beta;
  const double m = (T - 1.0) / alpha;
  out.mu = (m == 0.0) ? 1.0 : 0.5 * (m + std::copysign(std::sqrt(m * m + 4.0), m));
  out.a0_over_a3 = (1.0 - T * T) / (4.0 * alpha);
  out.a1_over_a3 = T;
  out.a2_over_a3 = (1.0 - 3.0 * alpha * alpha - beta * beta) / (2.0 * alpha);
  return out;
}

EllipticPdeResult elliptic_pde_residual(const std::optional<Grid2>& u, const Grid2& v,
                                        const Grid2& alpha, const Grid2& beta, double h1,
                                        double h2) {
  const int n1 = v.n1, n2 = v.n2;
  if (alpha.n1 != n1 || alpha.n2 != n2 || beta.n1 != n1 || beta.n2 != n2)
    throw std::invalid_argument("elliptic_pde_residual: grid shapes differ");
  if (u && (u->n1 != n1 || u->n2 != n2))
    throw std::invalid_argument("elliptic_pde_residual: grid shapes differ");
  for (double b : beta.data)
    if (std::fabs(b) < 1e-8) throw std::domain_error("elliptic_pde_residual: beta~ below 1e-8");

  EllipticPdeResult out;
  out.discriminant = Grid2(n1, n2);

  auto q = [&](int i, int j) { return alpha.at(i, j) / beta.at(i, j); };        // a/b
  auto cbig = [&](int i, int j) {                                               // (a^2+b^2)/b
    const double a = alpha.at(i, j), b = beta.at(i, j);
    return (a * a + b * b) / b;
  };

  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      // (v_t / b)_t in flux form
      const double f1p = (v.at(i + 1, j) - v.at(i, j)) / h1 * 2.0 /
                         (beta.at(i + 1, j) + beta.at(i, j));
      const double f1m = (v.at(i, j) - v.at(i - 1, j)) / h1 * 2.0 /
                         (beta.at(i, j) + beta.at(i - 1, j));
      const double t1 = (f1p - f1m) / h1;
      // (((a^2+b^2)/b) v_x)_x in flux form
      const double f4p = 0.5 * (cbig(i, j + 1) + cbig(i, j)) * (v.at(i, j + 1) - v.at(i, j)) / h2;
      const double f4m = 0.5 * (cbig(i, j) + cbig(i, j - 1)) * (v.at(i, j) - v.at(i, j - 1)) / h2;
      const double t4 = (f4p - f4m) / h2;
      // ((a/b) v_x)_t and ((a/b) v_t)_x with centered nodes
      auto vx = [&](int ii, int jj) { return (v.at(ii, jj + 1) - v.at(ii, jj - 1)) / (2.0 * h2); };
      auto vt = [&](int ii, int jj) { return (v.at(ii + 1, jj) - v.at(ii - 1, jj)) / (2.0 * h1); };
      const double t2 = (q(i + 1, j) * vx(i + 1, j) - q(i - 1, j) * vx(i - 1, j)) / (2.0 * h1);
      const double t3 = (q(i, j + 1) * vt(i, j + 1) - q(i, j - 1) * vt(i, j - 1)) / (2.0 * h2);

      out.max_residual = std::max(out.max_residual, std::fabs(t1 + t2 + t3 + t4));
      out.discriminant.at(i, j) = q(i, j) * q(i, j) - cbig(i, j) / beta.at(i, j);

      if (u) {
        const double ut = (u->at(i + 1, j) - u->at(i - 1, j)) / (2.0 * h1);
        const double ux = (u->at(i, j + 1) - u->at(i, j - 1)) / (2.0 * h2);
        const double ra = ut - q(i, j) * vt(i, j) - cbig(i, j) * vx(i, j);
        const double rb = ux + vt(i, j) / beta.at(i, j) + q(i, j) * vx(i, j);
        out.max_first_order = std::max(out.max_first_order, std::max(std::fabs(ra), std::fabs(rb)));
      }
    }
  }
  return out;
}

}  // namespace torusflow
