#include "torusflow/exact.hpp"

#include <sstream>
#include <stdexcept>

#include "torusflow/rng.hpp"

namespace torusflow::exact {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RationalPoly RationalPoly::constant(const Rational& c) {
  RationalPoly p;
  if (c != 0) p.c_ = {c};
  return p;
}

void RationalPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RationalPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return 0;
  return c_[k];
}

Rational RationalPoly::eval(const Rational& x) const {
  Rational r = 0;
  for (size_t k = c_.size(); k-- > 0;) r = r * x + c_[k];
  return r;
}

Rational RationalPoly::leading() const {
  if (is_zero()) throw std::domain_error("leading coefficient of zero polynomial");
  return c_.back();
}

RationalPoly RationalPoly::derivative() const {
  std::vector<Rational> d;
  for (size_t k = 1; k < c_.size(); ++k) d.push_back(Rational(static_cast<long>(k)) * c_[k]);
  return RationalPoly(std::move(d));
}

std::string RationalPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& a = c_[k];
    if (a == 0) continue;
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    first = false;
    Rational mag = abs(a);
    if (mag != 1 || k == 0) os << mag.get_str();
    if (k > 0) {
      if (mag != 1) os << "*";
      os << var;
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

RationalPoly operator+(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return RationalPoly(std::move(c));
}

RationalPoly operator-(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) c[k] -= b.c_[k];
  return RationalPoly(std::move(c));
}

RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
  if (a.is_zero() || b.is_zero()) return RationalPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return RationalPoly(std::move(c));
}

RationalPoly operator*(const Rational& c, const RationalPoly& a) {
  std::vector<Rational> out(a.c_.size());
  for (size_t k = 0; k < a.c_.size(); ++k) out[k] = c * a.c_[k];
  return RationalPoly(std::move(out));
}

bool operator==(const RationalPoly& a, const RationalPoly& b) { return a.c_ == b.c_; }

std::pair<RationalPoly, RationalPoly> poly_divmod(const RationalPoly& num, const RationalPoly& den) {
  if (den.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
  std::vector<Rational> r(num.coeffs());
  const int dn = den.degree();
  const Rational lead = den.leading();
  if (num.degree() < dn) return {RationalPoly(), num};
  std::vector<Rational> q(num.degree() - dn + 1, Rational(0));
  for (int k = num.degree(); k >= dn; --k) {
    const Rational f = r[k] / lead;
    if (f == 0) continue;
    q[k - dn] = f;
    for (int j = 0; j <= dn; ++j) r[k - dn + j] -= f * den.coeff(j);
  }
  return {RationalPoly(std::move(q)), RationalPoly(std::move(r))};
}

RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    RationalPoly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  return (Rational(1) / a.leading()) * a;
}

RationalPoly squarefree_part(const RationalPoly& p) {
  if (p.is_zero() || p.degree() == 0) return p;
  const RationalPoly g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return p;
  return poly_divmod(p, g).first;
}

namespace {

int sign_of(const Rational& x) { return sgn(x); }

// Sign changes of the Sturm chain at x; at_infinity: +1 for +inf, -1 for -inf.
int sign_changes(const std::vector<RationalPoly>& chain, const Rational& x) {
  int changes = 0, prev = 0;
  for (const auto& p : chain) {
    const int s = sign_of(p.eval(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

int sign_changes_inf(const std::vector<RationalPoly>& chain, int dir) {
  int changes = 0, prev = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    int s = sign_of(p.leading());
    if (dir < 0 && p.degree() % 2 == 1) s = -s;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

std::vector<RationalPoly> sturm_chain(const RationalPoly& p) {
  std::vector<RationalPoly> chain;
  chain.push_back(p);
  chain.push_back(p.derivative());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    RationalPoly rem = poly_divmod(chain[chain.size() - 2], chain.back()).second;
    chain.push_back(Rational(-1) * rem);
  }
  if (chain.back().is_zero()) chain.pop_back();
  return chain;
}

}  // namespace

int sturm_real_root_count(const RationalPoly& p) {
  if (p.is_zero()) throw std::domain_error("sturm: zero polynomial");
  if (p.degree() == 0) return 0;
  const auto chain = sturm_chain(p);
  return sign_changes_inf(chain, -1) - sign_changes_inf(chain, +1);
}

int sturm_real_root_count(const RationalPoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw std::domain_error("sturm: zero polynomial");
  if (p.degree() == 0) return 0;
  const auto chain = sturm_chain(p);
  return sign_changes(chain, lo) - sign_changes(chain, hi);
}

RationalPoly ghat4(const std::array<Rational, 4>& a) {
  return RationalPoly({-a[1], 4 * a[0] - 2 * a[2], 3 * (a[1] - a[3]), 2 * a[2], a[3]});
}

RationalPoly gamma_poly(const std::array<Rational, 4>& a) {
  return RationalPoly({-(a[1] + a[3]), 4 * a[0], a[1] + a[3]});
}

RationalPoly remainder_closed_form(const std::array<Rational, 4>& a) {
  const Rational p = a[1] + a[3];
  if (p == 0) throw std::domain_error("remainder_closed_form: a1 + a3 = 0");
  const Rational bracket = a[1] * a[1] * a[1] + a[1] * a[1] * a[3] -
                           a[1] * (4 * a[0] * a[2] + a[3] * a[3]) +
                           a[3] * (8 * a[0] * a[0] - 4 * a[0] * a[2] - a[3] * a[3]);
  const Rational f = 2 * bracket / (p * p * p);
  return RationalPoly({f * p, -4 * a[0] * f});
}

RationalPoly q_poly(const std::array<Rational, 4>& a) {
  return RationalPoly({a[1] + 3 * a[3], -4 * (a[0] + a[2]), 3 * (a[1] - 3 * a[3]), 4 * a[2],
                       2 * a[3]});
}

IdentityReport verify_displayed_identities(int trials, std::uint64_t seed) {
  IdentityReport rep;
  rep.trials = trials;
  Rng rng(seed);

  auto random_rational = [&rng]() {
    const long num = static_cast<long>(rng.uniform_int(41)) - 20;  // [-20, 20]
    const long den = static_cast<long>(rng.uniform_int(9)) + 1;    // [1, 9]
    return make_rational(num, den);
  };

  bool remainder_ok = true;
  bool factor_ok = true;
  std::optional<Rational> factor;

  for (int t = 0; t < trials; ++t) {
    std::array<Rational, 4> a;
    do {
      for (auto& x : a) x = random_rational();
    } while (a[1] + a[3] == 0 || a[3] == 0);

    const RationalPoly G = ghat4(a);
    const RationalPoly gam = gamma_poly(a);

    // (i) long-division remainder against the closed form
    const RationalPoly rem = poly_divmod(G, gam).second;
    if (!(rem == remainder_closed_form(a))) {
      remainder_ok = false;
      rep.witnesses.push_back("remainder mismatch at a = (" + a[0].get_str() + ", " +
                              a[1].get_str() + ", " + a[2].get_str() + ", " + a[3].get_str() + ")");
    }

    // (ii) 2*Ghat4 - Q must be a fixed rational multiple of gamma
    const RationalPoly diff = Rational(2) * G - q_poly(a);
    bool this_ok = diff.degree() <= 2;
    Rational c_here;
    bool have_c = false;
    for (int k = 0; k <= 2 && this_ok; ++k) {
      const Rational gk = gam.coeff(k);
      const Rational dk = diff.coeff(k);
      if (gk == 0) {
        if (dk != 0) this_ok = false;
        continue;
      }
      const Rational c = dk / gk;
      if (!have_c) {
        c_here = c;
        have_c = true;
      } else if (c != c_here) {
        this_ok = false;
      }
    }
    if (!this_ok || !have_c) {
      factor_ok = false;
      rep.witnesses.push_back("gamma-factor mismatch at a = (" + a[0].get_str() + ", " +
                              a[1].get_str() + ", " + a[2].get_str() + ", " + a[3].get_str() + ")");
    } else if (!factor) {
      factor = c_here;
    } else if (*factor != c_here) {
      factor_ok = false;
      rep.witnesses.push_back("gamma factor varies across tuples");
    }
  }
  rep.remainder_ok = remainder_ok;
  rep.gamma_factor_ok = factor_ok && factor.has_value();
  rep.gamma_factor = factor;

  // (iii) a0 = 0: Ghat4(+1) = Ghat4(-1) = 2 (a1 - a3)
  bool case1_ok = true;
  for (int t = 0; t < trials; ++t) {
    std::array<Rational, 4> a{Rational(0), random_rational(), random_rational(), random_rational()};
    const RationalPoly G = ghat4(a);
    const Rational expect = 2 * (a[1] - a[3]);
    if (G.eval(Rational(1)) != expect || G.eval(Rational(-1)) != expect) {
      case1_ok = false;
      rep.witnesses.push_back("case-1 evaluation mismatch at a = (0, " + a[1].get_str() + ", " +
                              a[2].get_str() + ", " + a[3].get_str() + ")");
    }
  }
  rep.case1_ok = case1_ok;

  // (iv) real-root counts of the gamma-degenerate quartic family
  for (long k = -10; k <= 10; ++k) {
    const RationalPoly printed({Rational(-1), Rational(-2 * k), Rational(-6), Rational(2 * k),
                                Rational(1)});
    const RationalPoly corrected({Rational(1), Rational(-2 * k), Rational(-6), Rational(2 * k),
                                  Rational(1)});
    const int np = sturm_real_root_count(squarefree_part(printed));
    const int nc = sturm_real_root_count(squarefree_part(corrected));
    rep.case3_counts.emplace_back(k, np);
    rep.case3_counts_corrected.emplace_back(k, nc);
    if (np != 4) rep.case3_mismatch_k.push_back(k);
  }
  return rep;
}

std::string IdentityReport::render() const {
  std::ostringstream os;
  os << "exact identity report\n";
  os << "trials: " << trials << "\n";
  os << "remainder-closed-form: " << (remainder_ok ? "ok (exact match)" : "FALSIFIED") << "\n";
  os << "gamma-factor: " << (gamma_factor_ok ? "ok" : "FALSIFIED");
  if (gamma_factor) os << ", c = " << gamma_factor->get_str();
  os << "\n";
  os << "case1-evaluation: " << (case1_ok ? "ok (exact match)" : "FALSIFIED") << "\n";
  os << "case3 family s^4 + 2k s^3 - 6 s^2 - 2k s - 1 (distinct real roots by k):\n";
  for (const auto& [k, n] : case3_counts) os << "  k = " << k << ": " << n << "\n";
  os << "case3 sign-corrected family s^4 + 2k s^3 - 6 s^2 - 2k s + 1:\n";
  for (const auto& [k, n] : case3_counts_corrected) os << "  k = " << k << ": " << n << "\n";
  if (!case3_mismatch_k.empty()) {
    os << "finding: the first family does not have 4 real roots for k in {";
    for (size_t i = 0; i < case3_mismatch_k.size(); ++i)
      os << (i ? ", " : "") << case3_mismatch_k[i];
    os << "}; the sign-corrected family does.\n";
  }
  for (const auto& w : witnesses) os << "witness: " << w << "\n";
  return os.str();
}

}  // namespace torusflow::exact
