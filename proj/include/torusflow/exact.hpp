#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace torusflow::exact {

// Arbitrary-precision rational; canonical form has denominator > 0 and
// gcd(num, den) = 1.
using Rational = mpq_class;

// mpq_class(num, den) does not reduce; always build fractions through
// this helper.
inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Univariate polynomial over the rationals, lowest degree first,
// trailing coefficient nonzero unless the zero polynomial.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> coeffs);
  static RationalPoly zero() { return RationalPoly(); }
  static RationalPoly constant(const Rational& c);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int k) const;
  Rational eval(const Rational& x) const;
  Rational leading() const;

  RationalPoly derivative() const;
  std::string str(const std::string& var = "s") const;

  friend RationalPoly operator+(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator-(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b);
  friend RationalPoly operator*(const Rational& c, const RationalPoly& a);
  friend bool operator==(const RationalPoly& a, const RationalPoly& b);

 private:
  std::vector<Rational> c_;
  void trim();
};

// Exact division with remainder: num = q * den + r, deg r < deg den.
std::pair<RationalPoly, RationalPoly> poly_divmod(const RationalPoly& num, const RationalPoly& den);

RationalPoly poly_gcd(RationalPoly a, RationalPoly b);  // monic gcd
RationalPoly squarefree_part(const RationalPoly& p);

// Exact count of distinct real roots via Sturm chains; whole line by
// default, half-open interval (lo, hi] otherwise. Expects squarefree p.
int sturm_real_root_count(const RationalPoly& p);
int sturm_real_root_count(const RationalPoly& p, const Rational& lo, const Rational& hi);

// Builders for the quartic analysis polynomials over exact coefficients
// (canonical form, a4 = 0).
RationalPoly ghat4(const std::array<Rational, 4>& a);
RationalPoly gamma_poly(const std::array<Rational, 4>& a);
RationalPoly remainder_closed_form(const std::array<Rational, 4>& a);
// Quartic subtracted inside the nonlinearity derivation:
// 2 a3 s^4 + 4 a2 s^3 + 3(a1-3a3) s^2 - 4(a0+a2) s + (a1+3a3).
RationalPoly q_poly(const std::array<Rational, 4>& a);

struct IdentityReport {
  int trials = 0;
  bool remainder_ok = false;        // divmod remainder == closed form, exactly
  bool gamma_factor_ok = false;     // 2*Ghat4 - Q == c * gamma, one c for all tuples
  std::optional<Rational> gamma_factor;  // the constant c
  bool case1_ok = false;            // Ghat4(+/-1) == 2(a1 - a3) when a0 = 0
  std::vector<std::pair<long, int>> case3_counts;          // printed family, k -> #real roots
  std::vector<std::pair<long, int>> case3_counts_corrected;  // +1 constant-term variant
  std::vector<long> case3_mismatch_k;  // k where the printed family is not 4-real-rooted
  std::vector<std::string> witnesses;  // falsifying tuples, if any
  std::string render() const;
};

// Randomized exact verification of the displayed quartic identities.
// All checks are exact; any mismatch is recorded with its witness tuple.
IdentityReport verify_displayed_identities(int trials, std::uint64_t seed);

}  // namespace torusflow::exact
