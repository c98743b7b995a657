#include "torusflow/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torusflow {

namespace {

using cplx = std::complex<double>;

double max_abs_coeff(const double* c, int n) {
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::fabs(c[i]));
  return m;
}

cplx horner(const double* c, int n, cplx s) {
  cplx r = c[n];
  for (int k = n - 1; k >= 0; --k) r = r * s + c[k];
  return r;
}

cplx horner_deriv(const double* c, int n, cplx s) {
  cplx r = static_cast<double>(n) * c[n];
  for (int k = n - 1; k >= 1; --k) r = r * s + static_cast<double>(k) * c[k];
  return r;
}

// One guarded Newton step on the original polynomial; removes closed-form
// cancellation error.
cplx polish(const double* c, int n, cplx s) {
  const cplx d = horner_deriv(c, n, s);
  if (std::abs(d) < 1e-300) return s;
  const cplx step = horner(c, n, s) / d;
  if (std::abs(step) > 0.5 * (1.0 + std::abs(s))) return s;  // near-multiple root, keep seed
  return s - step;
}

double root_condition(const double* c, int n, cplx s) {
  double num = 0.0;
  double pw = 1.0;
  const double as = std::abs(s);
  for (int k = 0; k <= n; ++k) {
    num += std::fabs(c[k]) * pw;
    pw *= std::max(1.0, as);
  }
  const double dp = std::abs(horner_deriv(c, n, s));
  return num / (std::max(dp, 1e-300) * std::max(1.0, as));
}

// Collect polished roots into a RootSet, re-pairing conjugates.
RootSet assemble(const double* c, int n, const std::vector<cplx>& roots, double leading_ratio,
                 bool degree_drop) {
  RootSet rs;
  rs.degree = n;
  rs.degree_drop = degree_drop;
  rs.leading_ratio = leading_ratio;
  double cond = 0.0;

  std::vector<cplx> pending;
  for (cplx s : roots) {
    cond = std::max(cond, root_condition(c, n, s));
    // Imaginary parts at rounding level come from complex polish of a
    // real root.
    if (std::fabs(s.imag()) <= 1e-12 * std::max(1.0, std::abs(s))) {
      rs.real_roots.push_back(s.real());
    } else {
      pending.push_back(s);
    }
  }
  // Pair each positive-imaginary root with its conjugate partner.
  std::vector<bool> used(pending.size(), false);
  for (size_t i = 0; i < pending.size(); ++i) {
    if (used[i] || pending[i].imag() < 0.0) continue;
    size_t best = pending.size();
    double bd = 0.0;
    for (size_t j = 0; j < pending.size(); ++j) {
      if (j == i || used[j] || pending[j].imag() > 0.0) continue;
      const double d = std::abs(pending[j] - std::conj(pending[i]));
      if (best == pending.size() || d < bd) {
        best = j;
        bd = d;
      }
    }
    if (best == pending.size()) {
      // Unpaired complex root should not happen for real input; fold
      // onto the axis rather than return an asymmetric set.
      rs.real_roots.push_back(pending[i].real());
      used[i] = true;
      continue;
    }
    used[i] = used[best] = true;
    const double alpha = 0.5 * (pending[i].real() + pending[best].real());
    const double beta = 0.5 * (pending[i].imag() - pending[best].imag());
    rs.complex_pairs.push_back({alpha, std::fabs(beta)});
  }
  for (size_t i = 0; i < pending.size(); ++i)
    if (!used[i] && pending[i].imag() < 0.0) rs.real_roots.push_back(pending[i].real());

  std::sort(rs.real_roots.begin(), rs.real_roots.end());
  rs.real_mult.assign(rs.real_roots.size(), 1);
  for (size_t i = 0; i + 1 < rs.real_roots.size(); ++i) {
    const double mult_tol = 1e-8 * std::max(1.0, std::fabs(rs.real_roots[i]));
    if (std::fabs(rs.real_roots[i + 1] - rs.real_roots[i]) < mult_tol) {
      rs.real_mult[i]++;
      rs.real_mult[i + 1]++;
    }
  }
  rs.condition = cond;
  return rs;
}

std::vector<cplx> quadratic_roots(double c0, double c1, double c2) {
  // Citardauq form avoids cancellation between -c1 and the radical.
  const double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
    double r1 = q / c2;
    double r2 = (q != 0.0) ? c0 / q : -c1 / c2 - r1;
    return {cplx(r1, 0.0), cplx(r2, 0.0)};
  }
  const double re = -c1 / (2.0 * c2);
  const double im = std::sqrt(-disc) / (2.0 * std::fabs(c2));
  return {cplx(re, im), cplx(re, -im)};
}

std::vector<cplx> cubic_roots_monic(double a, double b, double c) {
  // x^3 + a x^2 + b x + c, shifted to t^3 + p t + q.
  const double p = b - a * a / 3.0;
  const double q = c + a * (2.0 * a * a - 9.0 * b) / 27.0;
  const double shift = -a / 3.0;
  const double half_q = 0.5 * q;
  const double disc = half_q * half_q + p * p * p / 27.0;
  std::vector<cplx> out;
  if (disc <= 0.0) {
    // three real roots, trigonometric form
    const double m = std::sqrt(-p / 3.0);
    double arg = (m > 0.0) ? -half_q / (m * m * m) : 0.0;
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      out.emplace_back(2.0 * m * std::cos(theta - 2.0 * M_PI * k / 3.0) + shift, 0.0);
  } else {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-half_q - (half_q >= 0.0 ? sq : -sq));
    const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
    const double t1 = u + v;
    out.emplace_back(t1 + shift, 0.0);
    const double re = -0.5 * t1 + shift;
    const double im = 0.5 * std::sqrt(3.0) * std::fabs(u - v);
    out.emplace_back(re, im);
    out.emplace_back(re, -im);
  }
  return out;
}

std::vector<cplx> quartic_roots_monic(double a, double b, double c, double d) {
  // x = y - a/4 gives y^4 + p y^2 + q y + r.
  const double shift = -a / 4.0;
  const double a2 = a * a;
  const double p = b - 3.0 * a2 / 8.0;
  const double q = c - 0.5 * a * b + a2 * a / 8.0;
  const double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

  std::vector<cplx> ys;
  const double scale = 1.0 + std::fabs(p) + std::fabs(r);
  double m = 0.0;
  if (std::fabs(q) > 1e-12 * scale) {
    // positive root m of 8m^3 + 8pm^2 + (2p^2 - 8r)m - q^2 = 0 splits the
    // quartic into two real quadratics
    auto ms = cubic_roots_monic(p, 0.25 * p * p - r, -q * q / 8.0);
    for (cplx z : ms)
      if (std::fabs(z.imag()) < 1e-9 * (1.0 + std::fabs(z.real()))) m = std::max(m, z.real());
    for (int it = 0; it < 2; ++it) {  // polish m; the split divides by it
      const double R = ((8.0 * m + 8.0 * p) * m + (2.0 * p * p - 8.0 * r)) * m - q * q;
      const double dR = (24.0 * m + 16.0 * p) * m + (2.0 * p * p - 8.0 * r);
      if (std::fabs(dR) < 1e-300) break;
      m -= R / dR;
    }
  }
  if (m > 1e-12 * scale) {
    const double s2m = std::sqrt(2.0 * m);
    const double base = 0.5 * p + m;
    const double off = s2m * q / (4.0 * m);
    for (cplx z : quadratic_roots(base + off, -s2m, 1.0)) ys.push_back(z);
    for (cplx z : quadratic_roots(base - off, s2m, 1.0)) ys.push_back(z);
  } else {
    // q numerically negligible: biquadratic; Newton polish on the full
    // quartic recovers the dropped linear term
    for (cplx z : quadratic_roots(r, p, 1.0)) {
      const cplx w = std::sqrt(z);
      ys.push_back(w);
      ys.push_back(-w);
    }
  }
  for (auto& y : ys) y += shift;
  return ys;
}

}  // namespace

std::vector<std::complex<double>> RootSet::all_roots() const {
  std::vector<cplx> out;
  for (double r : real_roots) out.emplace_back(r, 0.0);
  for (const auto& p : complex_pairs) {
    out.emplace_back(p.alpha, p.beta);
    out.emplace_back(p.alpha, -p.beta);
  }
  return out;
}

RootSet solve_quadratic(const std::array<double, 3>& c) {
  const double scale = max_abs_coeff(c.data(), 2);
  if (scale == 0.0) throw std::invalid_argument("solve_quadratic: all coefficients are zero");
  const double lead = std::fabs(c[2]) / scale;
  if (lead < 1e-14) {
    std::vector<cplx> roots;
    if (std::fabs(c[1]) / scale > 1e-14) roots.emplace_back(-c[0] / c[1], 0.0);
    return assemble(c.data(), 2, roots, lead, true);
  }
  auto roots = quadratic_roots(c[0], c[1], c[2]);
  for (auto& s : roots) s = polish(c.data(), 2, s);
  return assemble(c.data(), 2, roots, lead, false);
}

RootSet solve_cubic(const std::array<double, 4>& c) {
  const double scale = max_abs_coeff(c.data(), 3);
  if (scale == 0.0) throw std::invalid_argument("solve_cubic: all coefficients are zero");
  const double lead = std::fabs(c[3]) / scale;
  if (lead < 1e-14) {
    RootSet rs = solve_quadratic({c[0], c[1], c[2]});
    rs.degree = 3;
    rs.degree_drop = true;
    rs.leading_ratio = lead;
    return rs;
  }
  auto roots = cubic_roots_monic(c[2] / c[3], c[1] / c[3], c[0] / c[3]);
  for (auto& s : roots) s = polish(c.data(), 3, s);
  return assemble(c.data(), 3, roots, lead, false);
}

RootSet solve_quartic(const std::array<double, 5>& c) {
  const double scale = max_abs_coeff(c.data(), 4);
  if (scale == 0.0) throw std::invalid_argument("solve_quartic: all coefficients are zero");
  const double lead = std::fabs(c[4]) / scale;
  if (lead < 1e-14) {
    RootSet rs = solve_cubic({c[0], c[1], c[2], c[3]});
    rs.degree = 4;
    rs.degree_drop = true;
    rs.leading_ratio = lead;
    return rs;
  }
  auto roots = quartic_roots_monic(c[3] / c[4], c[2] / c[4], c[1] / c[4], c[0] / c[4]);
  for (auto& s : roots) s = polish(c.data(), 4, s);
  return assemble(c.data(), 4, roots, lead, false);
}

RootClass classify_roots(const RootSet& rs, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("classify_roots: tol must be positive");
  if (rs.degree_drop || rs.leading_ratio < tol) return RootClass::Degenerate;
  for (int m : rs.real_mult)
    if (m > 1) return RootClass::Degenerate;
  for (const auto& p : rs.complex_pairs)
    if (p.beta < tol) return RootClass::Degenerate;
  const auto all = rs.all_roots();
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all[i] - all[j]) < tol) return RootClass::Degenerate;
  if (rs.complex_pairs.size() == 1) return RootClass::Elliptic;
  if (rs.complex_pairs.empty()) return RootClass::Hyperbolic;
  return RootClass::Degenerate;
}

const char* root_class_name(RootClass c) {
  switch (c) {
    case RootClass::Hyperbolic: return "hyperbolic";
    case RootClass::Elliptic: return "elliptic";
    case RootClass::Degenerate: return "degenerate";
  }
  return "?";
}

}  // namespace torusflow
