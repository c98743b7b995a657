#include "torusflow/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace torusflow {

namespace {

struct Deriv {
  double du1, du2, dp1, dp2;
};

Deriv hamiltonian_rhs(const Metric& metric, const double z[4]) {
  const TorusPoint p{z[0], z[1]};
  if (const auto* c = std::get_if<ConformalMetric>(&metric)) {
    const Jet2 L = c->lambda->eval(p);
    if (L.v <= 0.0) throw std::domain_error("integrate: conformal factor not positive");
    const double s = (z[2] * z[2] + z[3] * z[3]) / (2.0 * L.v * L.v);
    return {z[2] / L.v, z[3] / L.v, s * L.d1, s * L.d2};
  }
  const Jet2 g = std::get<SemiGeodesicMetric>(metric).g->eval(p);
  if (g.v <= 0.0) throw std::domain_error("integrate: metric coefficient not positive");
  const double w = z[2] * z[2] / (g.v * g.v * g.v);
  return {z[2] / (g.v * g.v), z[3], w * g.d1, w * g.d2};
}

void midpoint_step(const Metric& metric, double z[4], double dt, double tol, int max_iter) {
  double zm[4] = {z[0], z[1], z[2], z[3]};
  Deriv f = hamiltonian_rhs(metric, zm);
  // fixed-point iteration for the midpoint stage
  for (int it = 0; it < max_iter; ++it) {
    const double next[4] = {z[0] + 0.5 * dt * f.du1, z[1] + 0.5 * dt * f.du2,
                            z[2] + 0.5 * dt * f.dp1, z[3] + 0.5 * dt * f.dp2};
    double delta = 0.0;
    for (int k = 0; k < 4; ++k) delta = std::max(delta, std::fabs(next[k] - zm[k]));
    for (int k = 0; k < 4; ++k) zm[k] = next[k];
    f = hamiltonian_rhs(metric, zm);
    if (delta < tol) break;
    if (it + 1 == max_iter)
      throw std::runtime_error("integrate: midpoint fixed-point iteration did not converge");
  }
  for (int k = 0; k < 4; ++k) z[k] = 2.0 * zm[k] - z[k];
}

void composed_step(const Metric& metric, double z[4], double dt, const IntegratorOptions& o) {
  if (o.order == 2) {
    midpoint_step(metric, z, dt, o.fixed_point_tol, o.max_inner_iter);
    return;
  }
  // triple-jump composition; raises the symmetric base step to order 4
  static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  static const double w0 = 1.0 - 2.0 * w1;
  midpoint_step(metric, z, w1 * dt, o.fixed_point_tol, o.max_inner_iter);
  midpoint_step(metric, z, w0 * dt, o.fixed_point_tol, o.max_inner_iter);
  midpoint_step(metric, z, w1 * dt, o.fixed_point_tol, o.max_inner_iter);
}

}  // namespace

double evaluate_integral(const IntegralCoeffs& F, const Metric& metric, TorusPoint q, double p1,
                         double p2) {
  const auto vals = F.values_at(q);
  double base1 = p1;  // conformal: plain p1
  if (F.model == Model::SemiGeodesic) {
    const double g = std::get<SemiGeodesicMetric>(metric).g->value(q);
    base1 = p1 / g;
  }
  double out = 0.0;
  for (int k = 0; k <= F.n; ++k)
    out += vals[k] * std::pow(base1, F.n - k) * std::pow(p2, k);
  return out;
}

Trajectory integrate(const Metric& metric, PhaseState initial, double T,
                     const IntegratorOptions& opts, const std::vector<IntegralCoeffs>& monitors) {
  if (opts.dt <= 0.0 || T <= 0.0) throw std::invalid_argument("integrate: dt and T must be positive");
  if (opts.order != 2 && opts.order != 4)
    throw std::invalid_argument("integrate: order must be 2 or 4");
  for (const auto& m : monitors) m.validate();

  const long nsteps = std::lround(T / opts.dt);
  double z[4] = {initial.q.u1, initial.q.u2, initial.p1, initial.p2};

  Trajectory traj;
  auto record = [&](double time) {
    TrajectorySample s;
    s.time = time;
    s.u1 = z[0];
    s.u2 = z[1];
    s.p1 = z[2];
    s.p2 = z[3];
    s.H = hamiltonian_eval(metric, {z[0], z[1]}, z[2], z[3]);
    for (const auto& m : monitors)
      s.monitors.push_back(evaluate_integral(m, metric, {z[0], z[1]}, z[2], z[3]));
    traj.samples.push_back(std::move(s));
  };

  record(initial.time);
  for (long i = 1; i <= nsteps; ++i) {
    composed_step(metric, z, opts.dt, opts);
    if (i % opts.output_stride == 0 || i == nsteps) record(initial.time + i * opts.dt);
  }
  return traj;
}

DriftReport conservation_report(const Trajectory& traj) {
  if (traj.samples.empty()) throw std::invalid_argument("conservation_report: empty trajectory");
  DriftReport rep;
  const auto& first = traj.samples.front();
  rep.monitor_max_drift.assign(first.monitors.size(), 0.0);
  rep.monitor_rel_drift.assign(first.monitors.size(), 0.0);
  for (const auto& s : traj.samples) {
    rep.H_max_drift = std::max(rep.H_max_drift, std::fabs(s.H - first.H));
    for (size_t m = 0; m < first.monitors.size(); ++m)
      rep.monitor_max_drift[m] =
          std::max(rep.monitor_max_drift[m], std::fabs(s.monitors[m] - first.monitors[m]));
  }
  rep.H_rel_drift = rep.H_max_drift / std::max(1e-300, std::fabs(first.H));
  for (size_t m = 0; m < first.monitors.size(); ++m)
    rep.monitor_rel_drift[m] =
        rep.monitor_max_drift[m] / std::max(1e-300, std::fabs(first.monitors[m]));
  return rep;
}

}  // namespace torusflow
