#pragma once

#include <vector>

#include "torusflow/integral.hpp"
#include "torusflow/metric.hpp"

namespace torusflow {

struct PhaseState {
  TorusPoint q;
  double p1 = 0.0, p2 = 0.0;
  double time = 0.0;
};

struct TrajectorySample {
  double time = 0.0;
  double u1 = 0.0, u2 = 0.0;
  double p1 = 0.0, p2 = 0.0;
  double H = 0.0;
  std::vector<double> monitors;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

struct IntegratorOptions {
  double dt = 1e-3;
  int output_stride = 1;     // record every k-th step
  int order = 2;             // 2 = implicit midpoint, 4 = symmetric composition
  double fixed_point_tol = 1e-13;
  int max_inner_iter = 100;
};

// Hamiltonian flow of the metric's H. The base step is the implicit
// midpoint rule (symplectic, symmetric; H is non-separable in both
// models); order 4 composes three midpoint substeps.
Trajectory integrate(const Metric& metric, PhaseState initial, double T,
                     const IntegratorOptions& opts,
                     const std::vector<IntegralCoeffs>& monitors = {});

// Evaluate a monitored integral at a phase point.
double evaluate_integral(const IntegralCoeffs& F, const Metric& metric, TorusPoint q, double p1,
                         double p2);

struct DriftReport {
  double H_max_drift = 0.0;
  double H_rel_drift = 0.0;
  std::vector<double> monitor_max_drift;
  std::vector<double> monitor_rel_drift;
};

DriftReport conservation_report(const Trajectory& traj);

}  // namespace torusflow
