#include <doctest.h>

#include <cmath>

#include "torusflow/hydro.hpp"
#include "torusflow/rng.hpp"

using namespace torusflow;

namespace {

RootSet solve_ghat4(const std::array<double, 4>& a) {
  const auto hp = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4);
  return solve_quartic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3], hp.G.c[4]});
}

std::array<double, 4> random_elliptic_tuple(Rng& rng, RootSet& rs_out) {
  for (;;) {
    std::array<double, 4> a{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2),
                            rng.uniform(0.5, 2.5)};
    const RootSet rs = solve_ghat4(a);
    if (classify_roots(rs, 1e-3) != RootClass::Elliptic) continue;
    if (rs.condition > 1e4) continue;
    rs_out = rs;
    return a;
  }
}

}  // namespace

TEST_CASE("matrix assembly: cubic display") {
  const SystemMatrix A = build_matrix_A(std::array<double, 4>{0, 0, 1, 1}, 3);
  const double expect[3][3] = {{0, 0, 0}, {1, 0, 2}, {0, 1, 3}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(A(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-15));
}

TEST_CASE("matrix assembly: general cubic structure") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const double a0 = rng.uniform(-2, 2), a1 = rng.uniform(-2, 2), a2 = rng.uniform(0.2, 2);
    const SystemMatrix A = build_matrix_A(std::array<double, 4>{a0, a1, a2, 1.0}, 3);
    CHECK(A(1, 0) == a2);
    CHECK(A(2, 1) == a2);
    CHECK(A(0, 2) == a1);
    CHECK(A(1, 2) == doctest::Approx(2 * a2 - 3 * a0).epsilon(1e-15));
    CHECK(A(2, 2) == doctest::Approx(3 - 2 * a1).epsilon(1e-15));
    CHECK(A(0, 0) == 0.0);
    CHECK(A(0, 1) == 0.0);
  }
}

TEST_CASE("matrix assembly: quartic flat instance") {
  const SystemMatrix A = build_matrix_A(std::array<double, 5>{0, 0, 0, 1, 1}, 4);
  const double expect[4][4] = {{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 3}, {0, 0, 1, 4}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(A(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-15));
  CHECK_THROWS_AS(static_cast<void>(build_matrix_A(std::array<double, 3>{1, 1, 1}, 2)),
                  std::invalid_argument);
}

TEST_CASE("eigenvalues match g * roots for the flat cubic") {
  const std::array<double, 4> a{0, 0, 1, 1};
  const SystemMatrix A = build_matrix_A(a, 3);
  const auto hp = hat_polys(a, 3);
  const RootSet rs = solve_cubic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3]});
  CHECK(eigen_crosscheck(A, 1.0, rs) <= 1e-12);
}

TEST_CASE("eigenvalues scale with g") {
  // same hat-roots, doubled g: eigenvalues are exactly doubled
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const double a0 = rng.uniform(-1, 1), a1 = rng.uniform(-1, 1);
    const std::array<double, 4> a{a0, a1, 2.0, 1.0};
    const SystemMatrix A = build_matrix_A(a, 3);
    const auto hp = hat_polys(a, 3);
    const RootSet rs = solve_cubic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3]});
    CHECK(eigen_crosscheck(A, 2.0, rs) <= 1e-9);
  }
}

TEST_CASE("eigenvalue/root equivalence over random normalized tuples") {
  Rng rng(2025);
  for (int t = 0; t < 500; ++t) {
    const int n = (t % 2) ? 3 : 4;
    std::vector<double> a(n + 1);
    for (int k = 0; k <= n - 2; ++k) a[k] = rng.uniform(-2, 2);
    a[n - 1] = rng.uniform(0.5, 3.0);  // g
    a[n] = 1.0;
    const auto hp = hat_polys(a, n);
    RootSet rs;
    if (n == 3)
      rs = solve_cubic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3]});
    else
      rs = solve_quartic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3], hp.G.c[4]});
    if (rs.condition > 1e6) continue;
    const SystemMatrix A = build_matrix_A(a, n);
    CHECK(eigen_crosscheck(A, a[n - 1], rs) <= 1e-9);
  }
}

TEST_CASE("riemann invariants: fiber-constant quartic gives r = 1") {
  const HatPoly F{{1, 0, 2, 0, 1}};  // (1+s^2)^2
  RootSet rs;
  rs.degree = 4;
  rs.real_roots = {-1.3, 0.4};
  rs.real_mult = {1, 1};
  rs.complex_pairs = {{0.2, 0.7}};
  rs.leading_ratio = 1.0;
  const RiemannData rd = riemann_invariants(F, rs, 1.0, 4);
  for (const auto& rec : rd.records) CHECK(std::abs(rec.r - std::complex<double>(1, 0)) <= 1e-12);
}

TEST_CASE("riemann invariants: flat cubic values") {
  const std::array<double, 4> a{0, 0, 1, 1};
  const auto hp = hat_polys(a, 3);
  const RootSet rs = solve_cubic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3]});
  const RiemannData rd = riemann_invariants(hp.F, rs, 1.0, 3);
  REQUIRE(rd.records.size() == 3);
  // records: reals ascending; middle one is s = 0 with r = 0
  CHECK(std::abs(rd.records[1].r) <= 1e-14);
  // s = (3+sqrt(17))/2: r = (s^2+s^3)/(1+s^2)^(3/2), frozen by direct evaluation
  CHECK(rd.records[2].r.real() == doctest::Approx(1.1429850280746376).epsilon(1e-12));
  CHECK(rd.records[2].lambda.real() ==
        doctest::Approx((3 + std::sqrt(17.0)) / 2).epsilon(1e-13));
}

TEST_CASE("riemann invariants reject roots at +/- i") {
  const HatPoly F{{1, 1, 1, 1}};
  RootSet rs;
  rs.degree = 3;
  rs.real_roots = {0.5};
  rs.real_mult = {1};
  rs.complex_pairs = {{0.0, 1.0}};
  rs.leading_ratio = 1.0;
  CHECK_THROWS_AS(static_cast<void>(riemann_invariants(F, rs, 1.0, 3)), std::domain_error);
}

TEST_CASE("root sensitivities at fixed points") {
  // s3 = 0: (0, 1, 0, 0)/G'(0); s3 = 1: (-4, -2, 0, 2)/G'(1)
  const std::array<double, 4> a{0.4, -0.3, 0.7, 1.2};
  const auto hp = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4);
  const HatPoly Gp = hp.G.derivative();
  {
    const auto s = root_sensitivity(a, 0.0);
    const double gp = Gp.eval(0.0);
    CHECK(s[0] == doctest::Approx(0.0).scale(1));
    CHECK(s[1] == doctest::Approx(1.0 / gp).epsilon(1e-14));
    CHECK(s[2] == doctest::Approx(0.0).scale(1));
    CHECK(s[3] == doctest::Approx(0.0).scale(1));
  }
  {
    const auto s = root_sensitivity(a, 1.0);
    const double gp = Gp.eval(1.0);
    CHECK(s[0] == doctest::Approx(-4.0 / gp).epsilon(1e-14));
    CHECK(s[1] == doctest::Approx(-2.0 / gp).epsilon(1e-14));
    CHECK(s[2] == doctest::Approx(0.0).scale(1));
    CHECK(s[3] == doctest::Approx(2.0 / gp).epsilon(1e-14));
  }
}

TEST_CASE("root sensitivities match the re-solve oracle in every component") {
  Rng rng(303);
  const double eps = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    RootSet rs;
    const auto a = random_elliptic_tuple(rng, rs);
    const double s3 = rs.real_roots[0];
    const auto sens = root_sensitivity(a, s3);
    for (int comp = 0; comp < 4; ++comp) {
      auto resolve = [&](double delta) {
        std::array<double, 4> ap = a;
        ap[comp] += delta;
        const RootSet rp = solve_ghat4(ap);
        double best = 1e300, val = 0.0;
        for (double r : rp.real_roots)
          if (std::fabs(r - s3) < best) {
            best = std::fabs(r - s3);
            val = r;
          }
        return val;
      };
      const double fd = (resolve(eps) - resolve(-eps)) / (2 * eps);
      CHECK(std::fabs(sens[comp] - fd) <= 1e-5 * std::max(1.0, std::fabs(fd)));
    }
  }
}

TEST_CASE("root sensitivity rejects repeated roots") {
  // (s^2-1)^2 has double roots; build coefficients whose hat derivative
  // has a repeated root at s = 1: use G' directly via a crafted tuple
  const std::array<double, 4> a{0.0, 1.0, 0.0, 1.0};  // G = s^4 - 2 s^2 ... (just need G'(s3) ~ 0)
  const auto hp = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4);
  const HatPoly Gp = hp.G.derivative();
  // find a stationary point of G and require the guard to fire there
  double s_crit = 0.0;
  CHECK(std::fabs(Gp.eval(s_crit)) < 1e2);  // sanity
  bool threw = false;
  try {
    // G'(0) = 4 a0 - 2 a2 = 0 for this tuple
    static_cast<void>(root_sensitivity(a, 0.0));
  } catch (const std::domain_error&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("envelope jacobian: M * Minv = I and the closed-form column") {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    RootSet rs;
    const auto a = random_elliptic_tuple(rng, rs);
    const auto J = jacobian_da_dr(a, rs);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        std::complex<double> s = 0.0;
        for (int k = 0; k < 4; ++k) s += J.M[i][k] * J.Minv[k][j];
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-10);
      }
    // column for the first real root (slot 2): da3/dr3 = (1+s3^2)^2 / S
    const double s3 = rs.real_roots[0];
    const double s4 = rs.real_roots[1];
    const auto& pr = rs.complex_pairs[0];
    const double S = ((s3 - pr.alpha) * (s3 - pr.alpha) + pr.beta * pr.beta) * (s3 - s4);
    const double w = 1 + s3 * s3;
    CHECK(std::abs(J.Minv[3][2] - std::complex<double>(w * w / S, 0)) <=
          1e-9 * std::max(1.0, std::fabs(w * w / S)));
  }
}

TEST_CASE("envelope jacobian matches the newton-reconstruction difference quotient") {
  Rng rng(505);
  RootSet rs;
  const auto a = random_elliptic_tuple(rng, rs);
  const auto J = jacobian_da_dr(a, rs);
  const auto hp = hat_polys(std::array<double, 5>{a[0], a[1], a[2], a[3], 0.0}, 4);
  std::array<std::complex<double>, 4> targets;
  for (int i = 0; i < 4; ++i) {
    const auto s = J.ordered_roots[i];
    const auto w = 1.0 + s * s;
    targets[i] = hp.F.eval(s) / (w * w);
  }
  const double eps = 1e-6;
  for (int sign = -1; sign <= 1; sign += 2) {
    auto t = targets;
    t[2] += sign * eps;
    const auto ap = reconstruct_coeffs_from_invariants(t, a, J.ordered_roots);
    for (int k = 0; k < 4; ++k) {
      const double expect = a[k] + sign * eps * J.Minv[k][2].real();
      CHECK(std::fabs(ap[k] - expect) <= 1e-5 * std::max(1.0, std::fabs(a[k])));
    }
  }
}

TEST_CASE("jacobian_da_dr rejects mismatched roots") {
  Rng rng(42);
  RootSet rs;
  const auto a = random_elliptic_tuple(rng, rs);
  RootSet other = rs;
  other.real_roots[0] += 0.5;
  CHECK_THROWS_AS(static_cast<void>(jacobian_da_dr(a, other)), std::invalid_argument);
}

TEST_CASE("genuine nonlinearity: closed form against the oracle") {
  Rng rng(606);
  for (int trial = 0; trial < 10; ++trial) {
    RootSet rs;
    const auto a = random_elliptic_tuple(rng, rs);
    const auto reports = genuine_nonlinearity(a, rs);
    REQUIRE(reports.size() == 2);
    for (const auto& rep : reports) {
      CHECK(std::fabs(rep.dlam_dr - rep.oracle_dlam_dr) <=
            1e-6 * std::max(1.0, std::fabs(rep.oracle_dlam_dr)));
    }
  }
}

TEST_CASE("genuine nonlinearity on the reference tuple (1,1,1,2)") {
  const std::array<double, 4> a{1, 1, 1, 2};
  const RootSet rs = solve_ghat4(a);
  REQUIRE(classify_roots(rs) == RootClass::Elliptic);
  const auto reports = genuine_nonlinearity(a, rs);
  REQUIRE(reports.size() == 2);
  // frozen from the reconstruction oracle
  CHECK(reports[0].s3 == doctest::Approx(-2.0367230677868404).epsilon(1e-10));
  CHECK(reports[0].dlam_dr == doctest::Approx(0.25443903953608489).epsilon(1e-8));
  CHECK(reports[1].s3 == doctest::Approx(0.67069766400240149).epsilon(1e-10));
  CHECK(reports[1].dlam_dr == doctest::Approx(1.3649313339569327).epsilon(1e-8));
  for (const auto& rep : reports) CHECK_FALSE(rep.im_r_zero_locus);
}

TEST_CASE("genuine nonlinearity vanishes exactly on the viete locus") {
  const VieteParam vp = viete_parametrization(1.0, 1.0);
  const std::array<double, 4> a{vp.a0_over_a3, vp.a1_over_a3, vp.a2_over_a3, 1.0};
  const RootSet rs = solve_ghat4(a);
  REQUIRE(classify_roots(rs) == RootClass::Elliptic);
  const auto reports = genuine_nonlinearity(a, rs);
  for (const auto& rep : reports) {
    CHECK(std::fabs(rep.gamma_s3) <= 1e-12);
    CHECK(std::fabs(rep.dlam_dr) <= 1e-11);
    CHECK(rep.im_r_zero_locus);
  }
}

TEST_CASE("viete sums hold for the quartic roots") {
  Rng rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    RootSet rs;
    const auto a = random_elliptic_tuple(rng, rs);
    std::complex<double> sum = 0.0, prod = 1.0;
    for (auto s : rs.all_roots()) {
      sum += s;
      prod *= s;
    }
    CHECK(std::abs(sum - std::complex<double>(-2 * a[2] / a[3], 0)) <= 1e-9);
    CHECK(std::abs(prod - std::complex<double>(-a[1] / a[3], 0)) <= 1e-9);
  }
}

TEST_CASE("remainder and gamma closed forms") {
  const auto rg = remainder_gamma({1, 1, 1, 2});
  REQUIRE(rg.gamma.c.size() == 3);
  CHECK(rg.gamma.c[0] == doctest::Approx(-3.0));
  CHECK(rg.gamma.c[1] == doctest::Approx(4.0));
  CHECK(rg.gamma.c[2] == doctest::Approx(3.0));
  REQUIRE(rg.R.c.size() == 2);
  CHECK(rg.R.c[0] == doctest::Approx(-30.0 / 27).epsilon(1e-15));
  CHECK(rg.R.c[1] == doctest::Approx(40.0 / 27).epsilon(1e-15));
}

TEST_CASE("remainder at a0 = 0 is the constant 2(a1 - a3)") {
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    std::array<double, 4> a{0.0, rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (std::fabs(a[1] + a[3]) < 0.1) continue;
    const auto rg = remainder_gamma(a);
    CHECK(std::fabs(rg.R.c[1]) <= 1e-14);
    CHECK(rg.R.c[0] == doctest::Approx(2 * (a[1] - a[3])).epsilon(1e-10));
    // gamma = (a1+a3)(s^2 - 1)
    CHECK(rg.gamma.c[1] == 0.0);
    CHECK(rg.gamma.c[0] == doctest::Approx(-(a[1] + a[3])).epsilon(1e-15));
    CHECK(rg.gamma.c[2] == doctest::Approx(a[1] + a[3]).epsilon(1e-15));
  }
}

TEST_CASE("remainder_gamma rejects the degenerate direction") {
  CHECK_THROWS_AS(static_cast<void>(remainder_gamma({0.5, 1.0, 0.3, -1.0})), std::domain_error);
}

TEST_CASE("viete parametrization at (1,1)") {
  const VieteParam vp = viete_parametrization(1.0, 1.0);
  CHECK(vp.mu == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
  CHECK(vp.a0_over_a3 == doctest::Approx(-0.75).epsilon(1e-15));
  CHECK(vp.a1_over_a3 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(vp.a2_over_a3 == doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("viete parametrization: relation, reality, and root recovery") {
  Rng rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    const double alpha = rng.uniform(0.1, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const double beta = rng.uniform(0.1, 1.5);
    const VieteParam vp = viete_parametrization(alpha, beta);
    // mu - 1/mu relation
    CHECK(std::fabs(alpha * alpha + beta * beta - 1 - alpha * (vp.mu - 1 / vp.mu)) <= 1e-12);
    // pair invariant is real
    const std::complex<double> s(alpha, beta);
    const std::complex<double> w = 1.0 + s * s;
    const std::complex<double> r =
        (vp.a0_over_a3 + vp.a1_over_a3 * s + vp.a2_over_a3 * s * s + s * s * s) / (w * w);
    CHECK(std::fabs(r.imag()) <= 1e-12);
    // quartic roots are {alpha +/- i beta, mu, -1/mu}
    const std::array<double, 4> a{vp.a0_over_a3, vp.a1_over_a3, vp.a2_over_a3, 1.0};
    const RootSet rs = solve_ghat4(a);
    REQUIRE(rs.complex_pairs.size() == 1);
    CHECK(std::fabs(rs.complex_pairs[0].alpha - alpha) <= 1e-8 * std::max(1.0, std::fabs(alpha)));
    CHECK(std::fabs(rs.complex_pairs[0].beta - beta) <= 1e-8 * std::max(1.0, beta));
    REQUIRE(rs.real_roots.size() == 2);
    const double lo = std::min(vp.mu, -1 / vp.mu), hi = std::max(vp.mu, -1 / vp.mu);
    CHECK(std::fabs(rs.real_roots[0] - lo) <= 1e-8 * std::max(1.0, std::fabs(lo)));
    CHECK(std::fabs(rs.real_roots[1] - hi) <= 1e-8 * std::max(1.0, std::fabs(hi)));
  }
}

TEST_CASE("viete parametrization rejects alpha = 0") {
  CHECK_THROWS_AS(static_cast<void>(viete_parametrization(0.0, 0.5)), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(viete_parametrization(1.0, 0.0)), std::invalid_argument);
}

TEST_CASE("elliptic pde residual: constant v, exact discriminant") {
  const int n = 32;
  Grid2 v(n, n), alpha(n, n), beta(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      v.at(i, j) = 2.5;
      alpha.at(i, j) = 0.3 + 0.1 * std::cos(2 * M_PI * i / n);
      beta.at(i, j) = 1.0 + 0.2 * std::sin(2 * M_PI * j / n);
    }
  const auto res = elliptic_pde_residual(std::nullopt, v, alpha, beta, 1.0 / n, 1.0 / n);
  CHECK(res.max_residual <= 1e-14);
  for (double d : res.discriminant.data) CHECK(std::fabs(d + 1.0) <= 1e-14);
}

TEST_CASE("elliptic pde residual: laplace coefficients against the analytic operator") {
  // alpha = 0, beta = 1 reduces the operator to v_tt + v_xx
  auto run = [&](int n) {
    Grid2 v(n, n), alpha(n, n), beta(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double t = static_cast<double>(i) / n, x = static_cast<double>(j) / n;
        v.at(i, j) = std::sin(2 * M_PI * t) * std::sin(2 * M_PI * x);
        alpha.at(i, j) = 0.0;
        beta.at(i, j) = 1.0;
      }
    const auto res = elliptic_pde_residual(std::nullopt, v, alpha, beta, 1.0 / n, 1.0 / n);
    // exact operator value is -8 pi^2 v; measure the discretization error
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // recompute the stencil result indirectly: max_residual only gives
        // the max of |Lv|; compare max |Lv| against max |analytic|
        (void)i;
        (void)j;
      }
    worst = std::fabs(res.max_residual - 8 * M_PI * M_PI);
    return worst;
  };
  const double e1 = run(32);
  const double e2 = run(64);
  CHECK(e1 <= 1.0);
  CHECK(e2 <= 0.3);
  CHECK(e1 / e2 > 3.0);  // second-order stencils
}

TEST_CASE("elliptic pde residual: beta floor enforced") {
  Grid2 v(8, 8), alpha(8, 8), beta(8, 8);
  CHECK_THROWS_AS(
      static_cast<void>(elliptic_pde_residual(std::nullopt, v, alpha, beta, 0.1, 0.1)),
      std::domain_error);
}

TEST_CASE("elliptic pde residual: first-order pair for a constructed solution") {
  // constant u, v solve the reduced system trivially
  const int n = 16;
  Grid2 u(n, n), v(n, n), alpha(n, n), beta(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      u.at(i, j) = 1.7;
      v.at(i, j) = -0.4;
      alpha.at(i, j) = 0.5;
      beta.at(i, j) = 1.2;
    }
  const auto res = elliptic_pde_residual(u, v, alpha, beta, 1.0 / n, 1.0 / n);
  CHECK(res.max_first_order <= 1e-14);
  CHECK(res.max_residual <= 1e-14);
}
