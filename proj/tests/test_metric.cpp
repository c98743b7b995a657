#include <doctest.h>

#include <cmath>

#include "torusflow/metric.hpp"
#include "torusflow/rng.hpp"

using namespace torusflow;

namespace {

LiouvilleSpec standard_spec() {
  LiouvilleSpec spec;
  spec.f1 = make_expr_profile("2 + cos(2*pi*xi)");
  spec.f2 = make_expr_profile("2 + sin(2*pi*xi)");
  spec.m1 = 1;
  spec.n1 = 1;
  spec.m2 = 1;
  spec.n2 = -1;
  return spec;
}

}  // namespace

TEST_CASE("liouville: constant profiles give a constant factor") {
  LiouvilleSpec spec;
  spec.f1 = make_expr_profile("1");
  spec.f2 = make_expr_profile("2");
  const ConformalMetric m = liouville_conformal_factor(spec);
  Rng rng(3);
  for (int i = 0; i < 20; ++i)
    CHECK(m.lambda->value({rng.uniform(0, 1), rng.uniform(0, 1)}) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("liouville: single-profile evaluation at the symmetric point") {
  LiouvilleSpec spec = standard_spec();
  spec.f2 = make_expr_profile("0");
  // f2 = 0 makes the factor 2 + cos(2 pi (q1+q2)) which stays positive
  const ConformalMetric m = liouville_conformal_factor(spec);
  const Jet2 j = m.lambda->eval({0.0, 0.0});
  CHECK(j.v == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(std::fabs(j.d2) <= 1e-12);
}

TEST_CASE("liouville: first partial matches finite differences") {
  const ConformalMetric m = liouville_conformal_factor(standard_spec());
  Rng rng(7);
  const double h = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const TorusPoint p{rng.uniform(0, 1), rng.uniform(0, 1)};
    const Jet2 j = m.lambda->eval(p);
    const double fd =
        (m.lambda->value({p.u1 + h, p.u2}) - m.lambda->value({p.u1 - h, p.u2})) / (2 * h);
    CHECK(std::fabs(j.d1 - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
  }
}

TEST_CASE("liouville: direction swap yields the same field") {
  const ConformalMetric a = liouville_conformal_factor(standard_spec());
  LiouvilleSpec swapped = standard_spec();
  std::swap(swapped.f1, swapped.f2);
  std::swap(swapped.m1, swapped.m2);
  std::swap(swapped.n1, swapped.n2);
  const ConformalMetric b = liouville_conformal_factor(swapped);
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const TorusPoint p{rng.uniform(0, 1), rng.uniform(0, 1)};
    CHECK(std::fabs(a.lambda->value(p) - b.lambda->value(p)) <= 1e-14);
  }
}

TEST_CASE("liouville: invalid direction product rejected") {
  LiouvilleSpec spec = standard_spec();
  spec.n2 = 1.0;  // m1 m2/(n1 n2) = +1
  CHECK_THROWS_AS(static_cast<void>(liouville_conformal_factor(spec)), std::invalid_argument);
}

TEST_CASE("liouville: non-positive factor rejected") {
  LiouvilleSpec spec = standard_spec();
  spec.f1 = make_expr_profile("sin(2*pi*xi)");
  spec.f2 = make_expr_profile("0");
  CHECK_THROWS_AS(static_cast<void>(liouville_conformal_factor(spec)), std::invalid_argument);
}

TEST_CASE("positivity scan: constant field passes") {
  const auto rep = metric_positivity_scan(make_constant_field(3.0), 16, 16);
  CHECK(rep.pass);
  CHECK(rep.min_value == doctest::Approx(3.0));
}

TEST_CASE("positivity scan: sine dips below zero") {
  const auto rep = metric_positivity_scan(make_expr_field("1 + 2*sin(2*pi*x)"), 64, 64);
  CHECK_FALSE(rep.pass);
  CHECK(rep.min_value < 0.0);
}

TEST_CASE("positivity scan: liouville example minimum by dense scan") {
  const ConformalMetric m = liouville_conformal_factor(standard_spec());
  const auto rep = metric_positivity_scan(m.lambda, 1024, 1024);
  CHECK(rep.pass);
  // both profiles reach their minimum 1 simultaneously on the unit torus
  // (q1+q2 = 1/2, q1-q2 = 3/4 mod 1), so the scan bottoms out at 2
  CHECK(rep.min_value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("positivity scan: resolution precondition") {
  CHECK_THROWS_AS(static_cast<void>(metric_positivity_scan(make_constant_field(1.0), 1, 16)),
                  std::invalid_argument);
}
