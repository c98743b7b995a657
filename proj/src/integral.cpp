#include "torusflow/integral.hpp"

#include <cmath>
#include <stdexcept>

namespace torusflow {

void IntegralCoeffs::validate() const {
  if (n < 1 || n > 4) throw std::invalid_argument("integral degree must be in 1..4");
  if (static_cast<int>(a.size()) != n + 1)
    throw std::invalid_argument("integral needs n+1 coefficient fields");
  for (const auto& f : a)
    if (!f) throw std::invalid_argument("null coefficient field");
}

std::vector<double> IntegralCoeffs::values_at(TorusPoint p) const {
  std::vector<double> out(a.size());
  for (size_t k = 0; k < a.size(); ++k) out[k] = a[k]->value(p);
  return out;
}

double HatPoly::eval(double s) const {
  double r = 0.0;
  for (size_t k = c.size(); k-- > 0;) r = r * s + c[k];
  return r;
}

std::complex<double> HatPoly::eval(std::complex<double> s) const {
  std::complex<double> r = 0.0;
  for (size_t k = c.size(); k-- > 0;) r = r * s + c[k];
  return r;
}

HatPoly HatPoly::derivative() const {
  HatPoly d;
  for (size_t k = 1; k < c.size(); ++k) d.c.push_back(static_cast<double>(k) * c[k]);
  if (d.c.empty()) d.c.push_back(0.0);
  return d;
}

bool HatPoly::is_zero(double tol) const {
  for (double x : c)
    if (std::fabs(x) > tol) return false;
  return true;
}

double hamiltonian_eval(const Metric& m, TorusPoint p, double p1, double p2) {
  if (const auto* c = std::get_if<ConformalMetric>(&m)) {
    const double L = c->lambda->value(p);
    if (L <= 0.0) throw std::domain_error("conformal factor not positive at point");
    return (p1 * p1 + p2 * p2) / (2.0 * L);
  }
  const double g = std::get<SemiGeodesicMetric>(m).g->value(p);
  if (g <= 0.0) throw std::domain_error("metric coefficient g not positive at point");
  return 0.5 * (p1 * p1 / (g * g) + p2 * p2);
}

std::vector<double> bracket_residual(const IntegralCoeffs& F, const SemiGeodesicMetric& metric,
                                     TorusPoint p) {
  F.validate();
  if (F.model != Model::SemiGeodesic)
    throw std::invalid_argument("bracket_residual expects a semi-geodesic integral");
  const int n = F.n;
  const Jet2 gj = metric.g->eval(p);
  const double g = gj.v;
  if (g <= 0.0) throw std::domain_error("metric coefficient g not positive at point");

  std::vector<Jet2> aj(F.a.size());
  for (size_t k = 0; k < F.a.size(); ++k) aj[k] = F.a[k]->eval(p);

  // rho_m = (a_m)_t / g + (a_{m-1})_x - (n-m+1) a_{m-1} g_x/g
  //         + (m+1) a_{m+1} g_x/g
  std::vector<double> rho(n + 2, 0.0);
  const double gxg = gj.d2 / g;
  for (int m = 0; m <= n + 1; ++m) {
    double r = 0.0;
    if (m <= n) r += aj[m].d1 / g;
    if (m - 1 >= 0 && m - 1 <= n) r += aj[m - 1].d2 - (n - m + 1) * aj[m - 1].v * gxg;
    if (m + 1 <= n) r += (m + 1) * aj[m + 1].v * gxg;
    rho[m] = r;
  }
  return rho;
}

std::vector<double> bracket_residual_conformal(const IntegralCoeffs& F, const ConformalMetric& metric,
                                               TorusPoint p) {
  F.validate();
  if (F.model != Model::Conformal)
    throw std::invalid_argument("bracket_residual_conformal expects a conformal integral");
  const int n = F.n;
  const Jet2 lj = metric.lambda->eval(p);
  const double L = lj.v;
  if (L <= 0.0) throw std::domain_error("conformal factor not positive at point");

  std::vector<Jet2> cj(F.a.size());
  for (size_t k = 0; k < F.a.size(); ++k) cj[k] = F.a[k]->eval(p);
  auto val = [&](int k) { return (k >= 0 && k <= n) ? cj[k].v : 0.0; };

  std::vector<double> rho(n + 2, 0.0);
  const double w = 1.0 / (2.0 * L * L);
  for (int m = 0; m <= n + 1; ++m) {
    double r = 0.0;
    if (m <= n) r += cj[m].d1 / L;
    if (m - 1 >= 0 && m - 1 <= n) r += cj[m - 1].d2 / L;
    r += lj.d1 * w * ((n - m) * val(m) + (n - m + 2) * val(m - 2));
    r += lj.d2 * w * ((m + 1) * val(m + 1) + (m - 1) * val(m - 1));
    rho[m] = r;
  }
  return rho;
}

double max_bracket_residual(const IntegralCoeffs& F, const Metric& metric, int res1, int res2) {
  const Lattice lat = metric_lattice(metric);
  double worst = 0.0;
  for (int i = 0; i < res1; ++i) {
    for (int j = 0; j < res2; ++j) {
      const TorusPoint p{i * lat.L1 / res1, j * lat.L2 / res2};
      std::vector<double> rho;
      if (const auto* sm = std::get_if<SemiGeodesicMetric>(&metric))
        rho = bracket_residual(F, *sm, p);
      else
        rho = bracket_residual_conformal(F, std::get<ConformalMetric>(metric), p);
      for (double x : rho) worst = std::max(worst, std::fabs(x));
    }
  }
  return worst;
}

HatPair hat_polys(std::span<const double> a, int n) {
  if (n != 3 && n != 4) throw std::invalid_argument("hat_polys: unsupported degree");
  if (static_cast<int>(a.size()) != n + 1) throw std::invalid_argument("hat_polys: need n+1 values");

  HatPair out;
  out.F.c.assign(a.begin(), a.end());

  // G = n s F - (1+s^2) F'; the two degree-(n+1) terms cancel, leaving
  // degree n with leading coefficient a_{n-1}.
  std::vector<double> g(n + 2, 0.0);
  for (int k = 0; k <= n; ++k) g[k + 1] += n * a[k];
  for (int k = 1; k <= n; ++k) {
    g[k - 1] -= k * a[k];
    g[k + 1] -= k * a[k];
  }
  g.resize(n + 1);  // exact cancellation of the s^(n+1) term
  out.G.c = std::move(g);
  return out;
}

CanonicalQuartic canonicalize_quartic(const std::array<double, 5>& a) {
  CanonicalQuartic out;
  out.shift = a[4];
  out.a = {a[0] - a[4], a[1], a[2] - 2.0 * a[4], a[3], 0.0};
  return out;
}

std::vector<std::complex<double>> kolokoltsov_coeffs(std::span<const double> momentum_coeffs) {
  const int n = static_cast<int>(momentum_coeffs.size()) - 1;
  if (n < 0) throw std::invalid_argument("kolokoltsov_coeffs: empty coefficient list");
  using cplx = std::complex<double>;
  // p1 = (p + pbar)/2, p2 = i (p - pbar)/2; expand each monomial
  // p1^(n-k) p2^k over p^(n-i) pbar^i with binomial sums.
  std::vector<cplx> A(n + 1, 0.0);
  std::vector<double> binom((n + 1) * (n + 1), 0.0);
  auto C = [&](int r, int c) -> double& { return binom[r * (n + 1) + c]; };
  for (int r = 0; r <= n; ++r) {
    C(r, 0) = 1.0;
    for (int c = 1; c <= r; ++c) C(r, c) = C(r - 1, c - 1) + (c <= r - 1 ? C(r - 1, c) : 0.0);
  }
  auto ipow = [](cplx b, int e) {
    cplx r(1.0, 0.0);
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  const cplx ihalf(0.0, 0.5);
  for (int k = 0; k <= n; ++k) {
    const double ck = momentum_coeffs[k];
    if (ck == 0.0) continue;
    const int m = n - k;  // power of p1
    // p1^m = sum_j C(m,j) (p/2)^j (pbar/2)^(m-j)
    // p2^k = sum_l C(k,l) (i p/2)^l (-i pbar/2)^(k-l)
    const double scale = std::ldexp(ck, -m);
    for (int j = 0; j <= m; ++j) {
      for (int l = 0; l <= k; ++l) {
        cplx coef = scale * C(m, j) * C(k, l) * ipow(ihalf, l) * ipow(-ihalf, k - l);
        const int ppow = j + l;  // power of p
        A[n - ppow] += coef;
      }
    }
  }
  return A;
}

KolokoltsovReport kolokoltsov_check(const IntegralCoeffs& F, std::span<const TorusPoint> samples) {
  F.validate();
  if (F.model != Model::Conformal)
    throw std::invalid_argument("kolokoltsov_check expects a conformal integral");
  KolokoltsovReport rep;
  for (const TorusPoint& p : samples) {
    const auto vals = F.values_at(p);
    const auto A = kolokoltsov_coeffs(vals);
    rep.A0.push_back(A.front());
    rep.An.push_back(A.back());
  }
  auto spread = [](const std::vector<std::complex<double>>& v) {
    double s = 0.0;
    for (size_t i = 1; i < v.size(); ++i) s = std::max(s, std::abs(v[i] - v[0]));
    return s;
  };
  rep.spread_A0 = spread(rep.A0);
  rep.spread_An = spread(rep.An);
  rep.constant = rep.spread_A0 <= 1e-8 && rep.spread_An <= 1e-8;
  return rep;
}

double check_not_divisible_by_H(const HatPoly& G) {
  if (G.is_zero()) throw std::invalid_argument("check_not_divisible_by_H: zero polynomial");
  return std::abs(G.eval(std::complex<double>(0.0, 1.0)));
}

}  // namespace torusflow
