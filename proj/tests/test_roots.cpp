#include <doctest.h>

#include <cmath>

#include "torusflow/rng.hpp"
#include "torusflow/roots.hpp"

using namespace torusflow;

namespace {

double residual_bound(const std::vector<double>& c, double s) {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::fabs(x));
  return 1e-10 * m * std::pow(std::max(1.0, std::fabs(s)), static_cast<double>(c.size() - 1));
}

double eval_poly_abs(const std::vector<double>& c, std::complex<double> s) {
  std::complex<double> r = 0.0;
  for (size_t k = c.size(); k-- > 0;) r = r * s + c[k];
  return std::abs(r);
}

}  // namespace

TEST_CASE("cubic: s^3 - s") {
  const RootSet rs = solve_cubic({0, -1, 0, 1});
  REQUIRE(rs.real_roots.size() == 3);
  CHECK(rs.real_roots[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(rs.real_roots[1] == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  CHECK(rs.real_roots[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rs.complex_pairs.empty());
}

TEST_CASE("cubic: s^3 + s") {
  const RootSet rs = solve_cubic({0, 1, 0, 1});
  REQUIRE(rs.real_roots.size() == 1);
  REQUIRE(rs.complex_pairs.size() == 1);
  CHECK(std::fabs(rs.real_roots[0]) <= 1e-14);
  CHECK(rs.complex_pairs[0].alpha == doctest::Approx(0.0).scale(1).epsilon(1e-14));
  CHECK(rs.complex_pairs[0].beta == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cubic: s^3 - 3s^2 - 2s") {
  const RootSet rs = solve_cubic({0, -2, -3, 1});
  REQUIRE(rs.real_roots.size() == 3);
  const double lo = (3 - std::sqrt(17.0)) / 2;
  const double hi = (3 + std::sqrt(17.0)) / 2;
  CHECK(rs.real_roots[0] == doctest::Approx(lo).epsilon(1e-13));
  CHECK(std::fabs(rs.real_roots[1]) <= 1e-14);
  CHECK(rs.real_roots[2] == doctest::Approx(hi).epsilon(1e-13));
}

TEST_CASE("quartic: (s^2+1)(s^2-4)") {
  const RootSet rs = solve_quartic({-4, 0, -3, 0, 1});
  REQUIRE(rs.real_roots.size() == 2);
  REQUIRE(rs.complex_pairs.size() == 1);
  CHECK(rs.real_roots[0] == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(rs.real_roots[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(rs.complex_pairs[0].alpha == doctest::Approx(0.0).scale(1).epsilon(1e-13));
  CHECK(rs.complex_pairs[0].beta == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("quartic: s^4 - 1") {
  const RootSet rs = solve_quartic({-1, 0, 0, 0, 1});
  REQUIRE(rs.real_roots.size() == 2);
  REQUIRE(rs.complex_pairs.size() == 1);
  CHECK(rs.real_roots[0] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(rs.real_roots[1] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(rs.complex_pairs[0].beta == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("quartic: s^4 + 2s^3 - 6s^2 - 2s - 1 root pattern") {
  // the Sturm oracle (exact module) counts 2 distinct real roots here
  const RootSet rs = solve_quartic({-1, -2, -6, 2, 1});
  CHECK(rs.real_roots.size() == 2);
  CHECK(rs.complex_pairs.size() == 1);
  for (double s : rs.real_roots)
    CHECK(eval_poly_abs({-1, -2, -6, 2, 1}, {s, 0.0}) <= residual_bound({-1, -2, -6, 2, 1}, s));
}

TEST_CASE("solver residual contract on random polynomials") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    std::array<double, 5> c4;
    for (auto& x : c4) x = rng.uniform(-2, 2);
    if (std::fabs(c4[4]) < 0.05) c4[4] = std::copysign(0.05, c4[4]);
    const RootSet rs = solve_quartic(c4);
    const std::vector<double> cv(c4.begin(), c4.end());
    for (auto s : rs.all_roots())
      CHECK(eval_poly_abs(cv, s) <= residual_bound(cv, std::abs(s)));

    std::array<double, 4> c3;
    for (auto& x : c3) x = rng.uniform(-2, 2);
    if (std::fabs(c3[3]) < 0.05) c3[3] = std::copysign(0.05, c3[3]);
    const RootSet rc = solve_cubic(c3);
    const std::vector<double> cv3(c3.begin(), c3.end());
    for (auto s : rc.all_roots())
      CHECK(eval_poly_abs(cv3, s) <= residual_bound(cv3, std::abs(s)));
  }
}

TEST_CASE("reconstruction: expanding the root set reproduces the monic input") {
  Rng rng(99);
  int tested = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 5> c;
    for (auto& x : c) x = rng.uniform(-2, 2);
    if (std::fabs(c[4]) < 0.2) continue;
    const RootSet rs = solve_quartic(c);
    if (rs.condition >= 1e6) continue;
    ++tested;
    // expand prod (s - root)
    std::vector<std::complex<double>> poly{1.0};
    for (auto r : rs.all_roots()) {
      std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
      for (size_t k = 0; k < poly.size(); ++k) {
        next[k + 1] += poly[k];
        next[k] -= r * poly[k];
      }
      poly = next;
    }
    for (int k = 0; k <= 4; ++k) {
      const double monic = c[k] / c[4];
      CHECK(std::abs(poly[k] - monic) <= 1e-8 * std::max(1.0, std::fabs(monic)));
    }
  }
  CHECK(tested > 300);
}

TEST_CASE("conjugate closure: pairs always store beta > 0") {
  Rng rng(31337);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 5> c;
    for (auto& x : c) x = rng.uniform(-1, 1);
    if (std::fabs(c[4]) < 0.05) c[4] = 0.5;
    const RootSet rs = solve_quartic(c);
    size_t count = rs.real_roots.size() + 2 * rs.complex_pairs.size();
    CHECK(count == 4);
    for (const auto& p : rs.complex_pairs) CHECK(p.beta > 0.0);
  }
}

TEST_CASE("classification examples") {
  CHECK(classify_roots(solve_quartic({-4, 0, -3, 0, 1})) == RootClass::Elliptic);
  CHECK(classify_roots(solve_cubic({0, -1, 0, 1})) == RootClass::Hyperbolic);

  // {1, 1+eps} collide below tol
  const double eps = 1e-9;
  RootSet rs;
  rs.degree = 2;
  rs.real_roots = {1.0, 1.0 + eps};
  rs.real_mult = {1, 1};
  rs.leading_ratio = 1.0;
  CHECK(classify_roots(rs, 1e-7) == RootClass::Degenerate);
  CHECK(classify_roots(rs, 1e-10) == RootClass::Hyperbolic);
}

TEST_CASE("degree drop classifies as degenerate") {
  const RootSet rs = solve_cubic({1.0, -2.0, 1.0, 1e-16});
  CHECK(rs.degree_drop);
  CHECK(classify_roots(rs) == RootClass::Degenerate);
}

TEST_CASE("all-zero input throws") {
  CHECK_THROWS_AS(static_cast<void>(solve_cubic({0, 0, 0, 0})), std::invalid_argument);
  CHECK_THROWS_AS(static_cast<void>(solve_quartic({0, 0, 0, 0, 0})), std::invalid_argument);
}
