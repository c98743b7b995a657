#pragma once

#include <cmath>
#include <stdexcept>

namespace torusflow {

// Second-order Taylor data of a function of one variable: (v, v', v'').
struct Jet1 {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  static Jet1 constant(double c) { return {c, 0.0, 0.0}; }
  static Jet1 variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet1 operator+(const Jet1& a, const Jet1& b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Jet1 operator-(const Jet1& a, const Jet1& b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Jet1 operator-(const Jet1& a) { return {-a.v, -a.d, -a.dd}; }

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}

inline Jet1 operator*(double c, const Jet1& a) { return {c * a.v, c * a.d, c * a.dd}; }

// Composition with a scalar function given u(f), u'(f), u''(f).
inline Jet1 compose(const Jet1& f, double u, double du, double ddu) {
  return {u, du * f.d, ddu * f.d * f.d + du * f.dd};
}

inline Jet1 operator/(const Jet1& a, const Jet1& b) {
  const double w = 1.0 / b.v;
  const Jet1 inv = compose(b, w, -w * w, 2.0 * w * w * w);
  return a * inv;
}

inline Jet1 sin(const Jet1& f) { return compose(f, std::sin(f.v), std::cos(f.v), -std::sin(f.v)); }
inline Jet1 cos(const Jet1& f) { return compose(f, std::cos(f.v), -std::sin(f.v), -std::cos(f.v)); }
inline Jet1 exp(const Jet1& f) { const double e = std::exp(f.v); return compose(f, e, e, e); }

inline Jet1 pow(const Jet1& f, double e) {
  if (e == std::floor(e) && std::fabs(e) <= 64.0) {
    long n = static_cast<long>(e);
    if (n == 0) return Jet1::constant(1.0);
    Jet1 r = Jet1::constant(1.0);
    Jet1 base = f;
    long m = n < 0 ? -n : n;
    for (long i = 0; i < m; ++i) r = r * base;
    if (n < 0) return Jet1::constant(1.0) / r;
    return r;
  }
  if (f.v <= 0.0) throw std::domain_error("pow: non-integer exponent on non-positive base");
  const double u = std::pow(f.v, e);
  return compose(f, u, e * u / f.v, e * (e - 1.0) * u / (f.v * f.v));
}

// Second-order Taylor data of a function of two variables.
struct Jet2 {
  double v = 0.0;
  double d1 = 0.0, d2 = 0.0;
  double d11 = 0.0, d12 = 0.0, d22 = 0.0;

  static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
  static Jet2 var1(double x) { return {x, 1, 0, 0, 0, 0}; }
  static Jet2 var2(double y) { return {y, 0, 1, 0, 0, 0}; }
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d11 + b.d11, a.d12 + b.d12, a.d22 + b.d22};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d11 - b.d11, a.d12 - b.d12, a.d22 - b.d22};
}
inline Jet2 operator-(const Jet2& a) { return {-a.v, -a.d1, -a.d2, -a.d11, -a.d12, -a.d22}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.v = a.v * b.v;
  r.d1 = a.d1 * b.v + a.v * b.d1;
  r.d2 = a.d2 * b.v + a.v * b.d2;
  r.d11 = a.d11 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d11;
  r.d22 = a.d22 * b.v + 2.0 * a.d2 * b.d2 + a.v * b.d22;
  r.d12 = a.d12 * b.v + a.d1 * b.d2 + a.d2 * b.d1 + a.v * b.d12;
  return r;
}

inline Jet2 operator*(double c, const Jet2& a) {
  return {c * a.v, c * a.d1, c * a.d2, c * a.d11, c * a.d12, c * a.d22};
}

inline Jet2 compose(const Jet2& f, double u, double du, double ddu) {
  Jet2 r;
  r.v = u;
  r.d1 = du * f.d1;
  r.d2 = du * f.d2;
  r.d11 = ddu * f.d1 * f.d1 + du * f.d11;
  r.d22 = ddu * f.d2 * f.d2 + du * f.d22;
  r.d12 = ddu * f.d1 * f.d2 + du * f.d12;
  return r;
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double w = 1.0 / b.v;
  const Jet2 inv = compose(b, w, -w * w, 2.0 * w * w * w);
  return a * inv;
}

inline Jet2 sin(const Jet2& f) { return compose(f, std::sin(f.v), std::cos(f.v), -std::sin(f.v)); }
inline Jet2 cos(const Jet2& f) { return compose(f, std::cos(f.v), -std::sin(f.v), -std::cos(f.v)); }
inline Jet2 exp(const Jet2& f) { const double e = std::exp(f.v); return compose(f, e, e, e); }

inline Jet2 pow(const Jet2& f, double e) {
  if (e == std::floor(e) && std::fabs(e) <= 64.0) {
    long n = static_cast<long>(e);
    if (n == 0) return Jet2::constant(1.0);
    Jet2 r = Jet2::constant(1.0);
    long m = n < 0 ? -n : n;
    for (long i = 0; i < m; ++i) r = r * f;
    if (n < 0) return Jet2::constant(1.0) / r;
    return r;
  }
  if (f.v <= 0.0) throw std::domain_error("pow: non-integer exponent on non-positive base");
  const double u = std::pow(f.v, e);
  return compose(f, u, e * u / f.v, e * (e - 1.0) * u / (f.v * f.v));
}

// Lift a 1-variable jet through a linear phase xi = c1*u1 + c2*u2.
inline Jet2 pullback_linear(const Jet1& f, double c1, double c2) {
  Jet2 r;
  r.v = f.v;
  r.d1 = f.d * c1;
  r.d2 = f.d * c2;
  r.d11 = f.dd * c1 * c1;
  r.d12 = f.dd * c1 * c2;
  r.d22 = f.dd * c2 * c2;
  return r;
}

}  // namespace torusflow
