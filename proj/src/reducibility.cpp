#include "torusflow/reducibility.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "torusflow/io.hpp"

namespace torusflow {

SemiGeodesicMetric SimpleWaveSolution::metric() const {
  return {make_linear_pulled_field(a2, -lambda, 1.0, lat)};
}

IntegralCoeffs SimpleWaveSolution::cubic_integral() const {
  IntegralCoeffs F;
  F.n = 3;
  F.model = Model::SemiGeodesic;
  F.a = {make_linear_pulled_field(a0, -lambda, 1.0, lat),
         make_linear_pulled_field(a1, -lambda, 1.0, lat),
         make_linear_pulled_field(a2, -lambda, 1.0, lat), make_constant_field(1.0, lat)};
  F.normalized = true;
  return F;
}

IntegralCoeffs SimpleWaveSolution::linear_integral() const {
  // F1 = p1 + lambda p2 = g * (p1/g) + lambda * p2
  IntegralCoeffs F;
  F.n = 1;
  F.model = Model::SemiGeodesic;
  F.a = {make_linear_pulled_field(a2, -lambda, 1.0, lat), make_constant_field(lambda, lat)};
  return F;
}

SimpleWaveSolution simple_wave(double lambda, Profile a2, Lattice lat) {
  if (lambda == 0.0) throw std::invalid_argument("flat case; no simple wave needed");
  if (!a2) throw std::invalid_argument("simple_wave: missing profile");
  for (int i = 0; i < 256; ++i) {
    const double v = a2->eval(i / 256.0).v;
    if (!(v > 0.0)) throw std::invalid_argument("simple_wave: profile must be positive");
  }
  SimpleWaveSolution sol;
  sol.lambda = lambda;
  sol.c1 = 3.0 * (lambda - 1.0) / (2.0 * lambda * lambda);
  sol.c2 = (lambda - 1.0) / (2.0 * lambda * lambda * lambda);
  sol.c3 = 0.0;
  sol.a2 = a2;
  sol.lat = lat;

  const double c1 = sol.c1, c2 = sol.c2, lam = lambda;
  sol.a1 = make_callable_profile([a2, c1, lam](double xi) {
    const Jet1 g = a2->eval(xi);
    return Jet1::constant((3.0 - lam) / 2.0) + c1 * (g * g);
  });
  sol.a0 = make_callable_profile([a2, c1, c2, lam](double xi) {
    const Jet1 g = a2->eval(xi);
    return (1.0 - lam * c1) * g + c2 * (g * g * g);
  });
  return sol;
}

std::string ReductionCertificate::render() const {
  std::ostringstream os;
  os << "reduction certificate (degree " << degree << ")\n";
  os << "constants:";
  const int nk = degree == 3 ? 2 : 3;
  for (int i = 0; i < nk; ++i) os << " k" << (i + 1) << " = " << format_g(k[i]);
  os << "\n";
  os << "max coefficient residual: " << format_g(residual) << "\n";
  os << "grid nodes: " << grid_nodes << "\n";
  if (!note.empty()) os << "note: " << note << "\n";
  return os.str();
}

ReductionCertificate verify_cubic_identity(const SimpleWaveSolution& sol, int nodes,
                                           std::optional<std::array<double, 2>> k_override) {
  if (nodes < 2) throw std::invalid_argument("verify_cubic_identity: need at least 2 nodes");
  const double lam = sol.lambda;
  const double k1 = k_override ? (*k_override)[0] : sol.c2;
  const double k2 = k_override ? (*k_override)[1] : (3.0 - lam) / (2.0 * lam);

  // Compare in the basis (p1/g)^(3-m) p2^m; the cubic has coefficients
  // (a0, a1, a2, 1) there, and with P = p1/g:
  //   F1 = g P + lambda p2,  2H = P^2 + p2^2.
  double worst = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double xi = static_cast<double>(i) / nodes;
    const double g = sol.a2->eval(xi).v;
    const double a1 = sol.a1->eval(xi).v;
    const double a0 = sol.a0->eval(xi).v;
    const double lhs[4] = {a0, a1, g, 1.0};
    const double rhs[4] = {k1 * g * g * g + k2 * g, 3.0 * k1 * g * g * lam + k2 * lam,
                           3.0 * k1 * g * lam * lam + k2 * g, k1 * lam * lam * lam + k2 * lam};
    for (int m = 0; m < 4; ++m) worst = std::max(worst, std::fabs(lhs[m] - rhs[m]));
  }
  ReductionCertificate cert;
  cert.degree = 3;
  cert.k = {k1, k2, 0.0};
  cert.residual = worst;
  cert.grid_nodes = nodes;
  if (k_override) cert.note = "constants overridden";
  return cert;
}

namespace {

// Convolution of homogeneous momentum polynomials (coefficient vectors
// over x^(d-k) y^k).
std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

}  // namespace

ReductionCertificate verify_quartic_identity(const IntegralCoeffs& F4, const IntegralCoeffs& F2,
                                             const Metric& metric, int res1, int res2,
                                             double bracket_tol) {
  F4.validate();
  F2.validate();
  if (F4.n != 4 || F2.n != 2)
    throw std::invalid_argument("verify_quartic_identity: degrees must be 4 and 2");
  if (F4.model != F2.model)
    throw std::invalid_argument("verify_quartic_identity: mixed coefficient models");
  const double br = max_bracket_residual(F2, metric, res1, res2);
  if (br > bracket_tol)
    throw std::invalid_argument("verify_quartic_identity: F2 bracket residual " + format_g(br) +
                                " exceeds " + format_g(bracket_tol));

  const Lattice lat = metric_lattice(metric);
  Eigen::Matrix3d N = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  std::vector<std::array<std::vector<double>, 4>> rows;  // B1,B2,B3,T per node

  for (int i = 0; i < res1; ++i) {
    for (int j = 0; j < res2; ++j) {
      const TorusPoint p{i * lat.L1 / res1, j * lat.L2 / res2};
      const auto b = F2.values_at(p);
      const auto t = F4.values_at(p);
      // 2H in matching basis: (1,0,1) for P-basis, (1,0,1)/Lambda conformal
      std::vector<double> twoH = {1.0, 0.0, 1.0};
      if (F4.model == Model::Conformal) {
        const double L = std::get<ConformalMetric>(metric).lambda->value(p);
        twoH = {1.0 / L, 0.0, 1.0 / L};
      }
      const std::vector<double> B1 = conv(b, b);
      const std::vector<double> B2 = conv(twoH, b);
      const std::vector<double> B3 = conv(twoH, twoH);
      rows.push_back({B1, B2, B3, std::vector<double>(t.begin(), t.end())});
      for (int m = 0; m < 5; ++m) {
        const Eigen::Vector3d v(B1[m], B2[m], B3[m]);
        N += v * v.transpose();
        rhs += v * t[m];
      }
    }
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(N);
  lu.setThreshold(1e-10);
  if (!lu.isInvertible())
    throw std::domain_error(
        "verify_quartic_identity: F2^2, H*F2, H^2 linearly dependent (degenerate family)");
  const Eigen::Vector3d k = lu.solve(rhs);

  double worst = 0.0;
  for (const auto& row : rows)
    for (int m = 0; m < 5; ++m)
      worst = std::max(worst, std::fabs(row[3][m] - k(0) * row[0][m] - k(1) * row[1][m] -
                                        k(2) * row[2][m]));
  ReductionCertificate cert;
  cert.degree = 4;
  cert.k = {k(0), k(1), k(2)};
  cert.residual = worst;
  cert.grid_nodes = res1 * res2;
  return cert;
}

QuarticFactorization factor_quartic_elliptic(const std::array<double, 5>& a, double r, double alpha,
                                             double beta) {
  QuarticFactorization out;
  const double t = alpha * alpha + beta * beta;
  out.K = {t, -2.0 * alpha, 1.0};
  out.k_proportional_to_H = std::fabs(alpha) <= 1e-9 && std::fabs(beta - 1.0) <= 1e-9;

  // numerator Fhat4(s) - r (1+s^2)^2, divided by the monic K
  double num[5] = {a[0] - r, a[1], a[2] - 2.0 * r, a[3], a[4] - r};
  double q[3] = {0.0, 0.0, 0.0};
  for (int k = 4; k >= 2; --k) {
    const double f = num[k];
    q[k - 2] = f;
    num[k] = 0.0;
    num[k - 1] -= f * out.K[1];
    num[k - 2] -= f * out.K[0];
  }
  out.M = {q[0], q[1], q[2]};
  out.remainder = std::max(std::fabs(num[0]), std::fabs(num[1]));
  return out;
}

namespace {

ConformalResidualReport scan_conformal(const Field& lambda, int res1, int res2,
                                       const std::function<void(TorusPoint, const Jet2&,
                                                                ConformalResidualReport&)>& fn) {
  const Lattice lat = lambda->lattice();
  ConformalResidualReport rep;
  for (int i = 0; i < res1; ++i) {
    for (int j = 0; j < res2; ++j) {
      const TorusPoint p{i * lat.L1 / res1, j * lat.L2 / res2};
      const Jet2 L = lambda->eval(p);
      if (L.v <= 0.0) throw std::domain_error("conformal factor not positive");
      fn(p, L, rep);
    }
  }
  return rep;
}

}  // namespace

ConformalResidualReport conformal_residuals(const Field& lambda, const LinearMode& mode, int res1,
                                            int res2) {
  auto rep = scan_conformal(lambda, res1, res2,
                            [&](TorusPoint, const Jet2& L, ConformalResidualReport& r) {
                              const double inv2 = 1.0 / (L.v * L.v);
                              const double res =
                                  -mode.b0 * L.d1 * inv2 - mode.b1 * L.d2 * inv2;
                              r.max_linear = std::max(r.max_linear, std::fabs(res));
                            });
  rep.invariant_direction = {mode.b1, -mode.b0};
  return rep;
}

ConformalResidualReport conformal_residuals(const Field& lambda, const QuadraticMode& mode,
                                            int res1, int res2) {
  return scan_conformal(
      lambda, res1, res2, [&](TorusPoint p, const Jet2& L, ConformalResidualReport& r) {
        const double second = mode.B * L.d11 - 2.0 * mode.A * L.d12 - mode.B * L.d22;
        r.max_second_order = std::max(r.max_second_order, std::fabs(second));
        if (mode.b1) {
          const Jet2 b = mode.b1->eval(p);
          const double e1 = b.d1 * L.v + b.v * L.d1 + 2.0 * mode.A * L.d1 + 2.0 * mode.B * L.d2;
          const double e2 = b.d2 * L.v + b.v * L.d2 + 2.0 * mode.B * L.d1 - 2.0 * mode.A * L.d2;
          r.max_first_order =
              std::max(r.max_first_order, std::max(std::fabs(e1), std::fabs(e2)));
        }
      });
}

}  // namespace torusflow
