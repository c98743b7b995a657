#include "torusflow/metric.hpp"

#include <cmath>
#include <stdexcept>

namespace torusflow {

ConformalMetric liouville_conformal_factor(const LiouvilleSpec& spec) {
  if (spec.n1 == 0.0 || spec.n2 == 0.0)
    throw std::invalid_argument("liouville: direction coefficients n1, n2 must be nonzero");
  if (spec.m1 * spec.m2 / (spec.n1 * spec.n2) != -1.0)
    throw std::invalid_argument("liouville: direction constraint m1*m2/(n1*n2) = -1 violated");

  Field a = make_linear_pulled_field(spec.f1, spec.m1, spec.n1, spec.lat);
  Field b = make_linear_pulled_field(spec.f2, spec.m2, spec.n2, spec.lat);
  Field lambda = make_sum_field(std::move(a), std::move(b));

  const auto probe = metric_positivity_scan(lambda, 64, 64);
  if (!probe.pass)
    throw std::invalid_argument("liouville: non-positive conformal factor, min " +
                                std::to_string(probe.min_value));
  return {lambda};
}

PositivityReport metric_positivity_scan(const Field& f, int res1, int res2) {
  if (res1 < 2 || res2 < 2) throw std::invalid_argument("positivity scan: resolution must be >= 2");
  const Lattice lat = f->lattice();
  PositivityReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < res1; ++i) {
    for (int j = 0; j < res2; ++j) {
      const TorusPoint p{i * lat.L1 / res1, j * lat.L2 / res2};
      const double v = f->value(p);
      if (v < rep.min_value) {
        rep.min_value = v;
        rep.argmin = p;
      }
    }
  }
  rep.pass = rep.min_value > 0.0;
  return rep;
}

Lattice metric_lattice(const Metric& m) { return metric_field(m)->lattice(); }

const Field& metric_field(const Metric& m) {
  if (const auto* c = std::get_if<ConformalMetric>(&m)) return c->lambda;
  return std::get<SemiGeodesicMetric>(m).g;
}

}  // namespace torusflow
