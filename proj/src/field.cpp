#include "torusflow/field.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace torusflow {

namespace {

double reduce_mod(double u, double L) {
  double m = std::fmod(u, L);
  if (m < 0.0) m += L;
  if (m >= L) m = 0.0;  // guards fmod rounding at the seam
  return m;
}

}  // namespace

double Lattice::reduce1(double u) const { return reduce_mod(u, L1); }
double Lattice::reduce2(double u) const { return reduce_mod(u, L2); }

namespace {

class ConstantField final : public ScalarField2 {
 public:
  ConstantField(double c, Lattice lat) : c_(c), lat_(lat) {}
  Jet2 eval(TorusPoint) const override { return Jet2::constant(c_); }
  Lattice lattice() const override { return lat_; }

 private:
  double c_;
  Lattice lat_;
};

class ExprField final : public ScalarField2 {
 public:
  ExprField(Expr e, Lattice lat) : expr_(std::move(e)), lat_(lat) {
    for (const auto& v : expr_.variables()) {
      if (v != "q1" && v != "q2" && v != "t" && v != "x" && v != "u1" && v != "u2")
        throw std::invalid_argument("field expression uses unknown variable: " + v);
    }
  }

  Jet2 eval(TorusPoint p) const override {
    p = lat_.reduce(p);
    std::map<std::string, Jet2> vars;
    const Jet2 a = Jet2::var1(p.u1);
    const Jet2 b = Jet2::var2(p.u2);
    vars["q1"] = vars["t"] = vars["u1"] = a;
    vars["q2"] = vars["x"] = vars["u2"] = b;
    return expr_.eval2(vars);
  }

  Lattice lattice() const override { return lat_; }

 private:
  Expr expr_;
  Lattice lat_;
};

class ExprProfile final : public Profile1 {
 public:
  explicit ExprProfile(Expr e) : expr_(std::move(e)) {
    for (const auto& v : expr_.variables()) {
      if (v != "xi" && v != "x" && v != "u")
        throw std::invalid_argument("profile expression uses unknown variable: " + v);
    }
  }

  Jet1 eval(double xi) const override {
    std::map<std::string, Jet1> vars;
    vars["xi"] = vars["x"] = vars["u"] = Jet1::variable(xi);
    return expr_.eval1(vars);
  }

 private:
  Expr expr_;
};

class CallableProfile final : public Profile1 {
 public:
  explicit CallableProfile(std::function<Jet1(double)> fn) : fn_(std::move(fn)) {}
  Jet1 eval(double xi) const override { return fn_(xi); }

 private:
  std::function<Jet1(double)> fn_;
};

class LinearPulledField final : public ScalarField2 {
 public:
  LinearPulledField(Profile f, double c1, double c2, Lattice lat)
      : f_(std::move(f)), c1_(c1), c2_(c2), lat_(lat) {}

  Jet2 eval(TorusPoint p) const override {
    p = lat_.reduce(p);
    return pullback_linear(f_->eval(c1_ * p.u1 + c2_ * p.u2), c1_, c2_);
  }

  Lattice lattice() const override { return lat_; }

 private:
  Profile f_;
  double c1_, c2_;
  Lattice lat_;
};

class SumField final : public ScalarField2 {
 public:
  SumField(Field a, Field b) : a_(std::move(a)), b_(std::move(b)) {}
  Jet2 eval(TorusPoint p) const override { return a_->eval(p) + b_->eval(p); }
  Lattice lattice() const override { return a_->lattice(); }

 private:
  Field a_, b_;
};

class ScaledField final : public ScalarField2 {
 public:
  ScaledField(double c, Field a) : c_(c), a_(std::move(a)) {}
  Jet2 eval(TorusPoint p) const override { return c_ * a_->eval(p); }
  Lattice lattice() const override { return a_->lattice(); }

 private:
  double c_;
  Field a_;
};

// 6th-order periodic central stencils.
constexpr std::array<double, 7> kD1 = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr std::array<double, 7> kD2 = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};

class SampledField final : public ScalarField2 {
 public:
  SampledField(const std::vector<std::vector<double>>& values, Lattice lat) : lat_(lat) {
    n1_ = static_cast<int>(values.size());
    n2_ = n1_ > 0 ? static_cast<int>(values[0].size()) : 0;
    if (n1_ < 8 || n2_ < 8) throw std::invalid_argument("grid too small");
    v_.resize(static_cast<size_t>(n1_) * n2_);
    for (int i = 0; i < n1_; ++i) {
      if (static_cast<int>(values[i].size()) != n2_)
        throw std::invalid_argument("ragged sample grid");
      for (int j = 0; j < n2_; ++j) {
        if (!std::isfinite(values[i][j])) throw std::invalid_argument("non-finite sample value");
        at(v_, i, j) = values[i][j];
      }
    }
    const double h1 = lat_.L1 / n1_;
    const double h2 = lat_.L2 / n2_;
    g1_ = stencil1(v_, h1);
    g2_ = stencil2(v_, h2);
    g11_ = stencil1(g1_, h1);
    g12_ = stencil2(g1_, h2);
    g22_ = stencil2(g2_, h2);
  }

  Jet2 eval(TorusPoint p) const override {
    p = lat_.reduce(p);
    Jet2 r;
    r.v = interp(v_, p);
    r.d1 = interp(g1_, p);
    r.d2 = interp(g2_, p);
    r.d11 = interp(g11_, p);
    r.d12 = interp(g12_, p);
    r.d22 = interp(g22_, p);
    return r;
  }

  Lattice lattice() const override { return lat_; }

 private:
  int n1_ = 0, n2_ = 0;
  Lattice lat_;
  std::vector<double> v_, g1_, g2_, g11_, g12_, g22_;

  double& at(std::vector<double>& g, int i, int j) const { return g[static_cast<size_t>(i) * n2_ + j]; }
  double at(const std::vector<double>& g, int i, int j) const {
    return g[static_cast<size_t>(i) * n2_ + j];
  }

  int wrap1(int i) const { return ((i % n1_) + n1_) % n1_; }
  int wrap2(int j) const { return ((j % n2_) + n2_) % n2_; }

  std::vector<double> stencil1(const std::vector<double>& g, double h) const {
    std::vector<double> out(g.size());
    for (int i = 0; i < n1_; ++i)
      for (int j = 0; j < n2_; ++j) {
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) s += kD1[k + 3] * at(g, wrap1(i + k), j);
        out[static_cast<size_t>(i) * n2_ + j] = s / h;
      }
    return out;
  }

  std::vector<double> stencil2(const std::vector<double>& g, double h) const {
    std::vector<double> out(g.size());
    for (int i = 0; i < n1_; ++i)
      for (int j = 0; j < n2_; ++j) {
        double s = 0.0;
        for (int k = -3; k <= 3; ++k) s += kD1[k + 3] * at(g, i, wrap2(j + k));
        out[static_cast<size_t>(i) * n2_ + j] = s / h;
      }
    return out;
  }

  static std::array<double, 4> cubic_weights(double t) {
    const double t2 = t * t, t3 = t2 * t;
    return {(-t3 + 2 * t2 - t) / 2, (3 * t3 - 5 * t2 + 2) / 2, (-3 * t3 + 4 * t2 + t) / 2,
            (t3 - t2) / 2};
  }

  double interp(const std::vector<double>& g, TorusPoint p) const {
    const double f1 = p.u1 / (lat_.L1 / n1_);
    const double f2 = p.u2 / (lat_.L2 / n2_);
    const int i0 = static_cast<int>(std::floor(f1));
    const int j0 = static_cast<int>(std::floor(f2));
    const auto w1 = cubic_weights(f1 - i0);
    const auto w2 = cubic_weights(f2 - j0);
    double s = 0.0;
    for (int a = -1; a <= 2; ++a) {
      const int i = wrap1(i0 + a);
      double row = 0.0;
      for (int b = -1; b <= 2; ++b) row += w2[b + 1] * at(g, i, wrap2(j0 + b));
      s += w1[a + 1] * row;
    }
    return s;
  }
};

}  // namespace

Field make_constant_field(double c, Lattice lat) { return std::make_shared<ConstantField>(c, lat); }

Field make_expr_field(const std::string& expr, Lattice lat) {
  return std::make_shared<ExprField>(Expr::parse(expr), lat);
}

Field make_expr_field(const Expr& expr, Lattice lat) {
  return std::make_shared<ExprField>(expr, lat);
}

Profile make_expr_profile(const std::string& expr) {
  return std::make_shared<ExprProfile>(Expr::parse(expr));
}

Profile make_callable_profile(std::function<Jet1(double)> fn) {
  return std::make_shared<CallableProfile>(std::move(fn));
}

Field make_linear_pulled_field(Profile f, double c1, double c2, Lattice lat) {
  return std::make_shared<LinearPulledField>(std::move(f), c1, c2, lat);
}

Field make_sum_field(Field a, Field b) { return std::make_shared<SumField>(std::move(a), std::move(b)); }

Field make_scaled_field(double c, Field a) { return std::make_shared<ScaledField>(c, std::move(a)); }

Field make_sampled_field(const std::vector<std::vector<double>>& values, Lattice lat) {
  return std::make_shared<SampledField>(values, lat);
}

}  // namespace torusflow
