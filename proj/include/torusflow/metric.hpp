#pragma once

#include <string>
#include <variant>

#include "torusflow/field.hpp"

namespace torusflow {

// ds^2 = Lambda(q1,q2) (dq1^2 + dq2^2), Lambda > 0.
struct ConformalMetric {
  Field lambda;
};

// ds^2 = g^2(t,x) dt^2 + dx^2, g > 0.
struct SemiGeodesicMetric {
  Field g;
};

using Metric = std::variant<ConformalMetric, SemiGeodesicMetric>;

// Conformal factor built from two one-variable profiles along
// transversal directions: Lambda = f1(m1 q1 + n1 q2) + f2(m2 q1 + n2 q2),
// subject to m1*m2/(n1*n2) == -1.
struct LiouvilleSpec {
  Profile f1;
  Profile f2;
  double m1 = 1.0, n1 = 1.0;
  double m2 = 1.0, n2 = -1.0;
  Lattice lat;
};

// Throws if the direction constraint fails or the factor is not positive
// on a coarse probe grid.
ConformalMetric liouville_conformal_factor(const LiouvilleSpec& spec);

struct PositivityReport {
  double min_value = 0.0;
  TorusPoint argmin;
  bool pass = false;
};

// Dense sampling of the field minimum; report-only.
PositivityReport metric_positivity_scan(const Field& f, int res1, int res2);

Lattice metric_lattice(const Metric& m);
const Field& metric_field(const Metric& m);

}  // namespace torusflow
