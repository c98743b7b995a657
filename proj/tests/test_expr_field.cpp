#include <doctest.h>

#include <cmath>

#include "torusflow/expr.hpp"
#include "torusflow/field.hpp"
#include "torusflow/rng.hpp"

using namespace torusflow;

namespace {

// Central-difference check of every analytic partial of a field.
void check_partials(const Field& f, TorusPoint p, double h = 1e-5, double tol = 1e-6) {
  const Jet2 j = f->eval(p);
  auto v = [&](double du1, double du2) { return f->value({p.u1 + du1, p.u2 + du2}); };
  const double d1 = (v(h, 0) - v(-h, 0)) / (2 * h);
  const double d2 = (v(0, h) - v(0, -h)) / (2 * h);
  CHECK(std::fabs(j.d1 - d1) <= tol * std::max(1.0, std::fabs(d1)));
  CHECK(std::fabs(j.d2 - d2) <= tol * std::max(1.0, std::fabs(d2)));
  auto j1 = [&](double du1, double du2) { return f->eval({p.u1 + du1, p.u2 + du2}); };
  const double d11 = (j1(h, 0).d1 - j1(-h, 0).d1) / (2 * h);
  const double d12 = (j1(0, h).d1 - j1(0, -h).d1) / (2 * h);
  const double d22 = (j1(0, h).d2 - j1(0, -h).d2) / (2 * h);
  CHECK(std::fabs(j.d11 - d11) <= tol * std::max(1.0, std::fabs(d11)));
  CHECK(std::fabs(j.d12 - d12) <= tol * std::max(1.0, std::fabs(d12)));
  CHECK(std::fabs(j.d22 - d22) <= tol * std::max(1.0, std::fabs(d22)));
}

}  // namespace

TEST_CASE("expression parser evaluates and differentiates") {
  const Expr e = Expr::parse("2 + cos(2*pi*q1) * q2^2 - exp(q2/4)");
  std::map<std::string, Jet2> vars;
  vars["q1"] = Jet2::var1(0.3);
  vars["q2"] = Jet2::var2(0.7);
  const Jet2 j = e.eval2(vars);
  const double q1 = 0.3, q2 = 0.7;
  CHECK(j.v == doctest::Approx(2 + std::cos(2 * M_PI * q1) * q2 * q2 - std::exp(q2 / 4)).epsilon(1e-14));
  CHECK(j.d1 ==
        doctest::Approx(-2 * M_PI * std::sin(2 * M_PI * q1) * q2 * q2).epsilon(1e-12));
  CHECK(j.d2 ==
        doctest::Approx(2 * std::cos(2 * M_PI * q1) * q2 - std::exp(q2 / 4) / 4).epsilon(1e-12));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(Expr::parse("2 +"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("sin 3"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("(1 + 2"), std::invalid_argument);
  CHECK_THROWS_AS(Expr::parse("q1 ^ q2"), std::invalid_argument);  // non-constant exponent
  const Expr e = Expr::parse("y + 1");
  CHECK_THROWS_AS(e.eval({{"x", 1.0}}), std::invalid_argument);
}

TEST_CASE("fields are periodic by construction") {
  const Field f = make_expr_field("sin(2*pi*x)*cos(2*pi*t)", {1.0, 1.0});
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const TorusPoint p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const double base = f->value(p);
    CHECK(std::fabs(f->value({p.u1 + 1.0, p.u2}) - base) <= 1e-12);
    CHECK(std::fabs(f->value({p.u1, p.u2 + 1.0}) - base) <= 1e-12);
  }
}

TEST_CASE("analytic partials agree with central differences") {
  const Field f = make_expr_field("2 + cos(2*pi*(q1+q2)) + sin(2*pi*(q1-q2))/3", {1.0, 1.0});
  Rng rng(5);
  for (int i = 0; i < 100; ++i) check_partials(f, {rng.uniform(0, 1), rng.uniform(0, 1)});
}

TEST_CASE("linear pulled profile uses the chain rule") {
  const Profile prof = make_expr_profile("2 + cos(2*pi*xi)");
  const Field f = make_linear_pulled_field(prof, -2.0, 1.0, {1.0, 1.0});
  Rng rng(17);
  for (int i = 0; i < 50; ++i) check_partials(f, {rng.uniform(0, 1), rng.uniform(0, 1)});
}

TEST_CASE("sampled field: constant grid") {
  std::vector<std::vector<double>> grid(16, std::vector<double>(16, 5.0));
  const Field f = make_sampled_field(grid, {1.0, 1.0});
  const Jet2 j = f->eval({0.37, 0.81});
  CHECK(j.v == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(std::fabs(j.d1) <= 1e-12);
  CHECK(std::fabs(j.d2) <= 1e-12);
  CHECK(std::fabs(j.d11) <= 1e-12);
}

TEST_CASE("sampled field: sine grid derivative accuracy") {
  const int n = 64;
  std::vector<std::vector<double>> grid(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) grid[i][j] = std::sin(2 * M_PI * j / n);
  const Field f = make_sampled_field(grid, {1.0, 1.0});
  for (int j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / n;
    const Jet2 v = f->eval({0.0, x});
    CHECK(std::fabs(v.d2 - 2 * M_PI * std::cos(2 * M_PI * x)) <= 1e-6);
    CHECK(std::fabs(v.d22 + 4 * M_PI * M_PI * std::sin(2 * M_PI * x)) <= 1e-5);
    CHECK(std::fabs(v.d1) <= 1e-12);
  }
}

TEST_CASE("sampled field: too-small and non-finite grids rejected") {
  std::vector<std::vector<double>> tiny(4, std::vector<double>(4, 1.0));
  CHECK_THROWS_WITH_AS(static_cast<void>(make_sampled_field(tiny, {1.0, 1.0})), "grid too small",
                       std::invalid_argument);
  std::vector<std::vector<double>> bad(8, std::vector<double>(8, 1.0));
  bad[3][5] = std::nan("");
  CHECK_THROWS_AS(static_cast<void>(make_sampled_field(bad, {1.0, 1.0})), std::invalid_argument);
}
