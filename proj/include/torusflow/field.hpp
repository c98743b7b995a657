#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "torusflow/expr.hpp"
#include "torusflow/jet.hpp"

namespace torusflow {

// Point on the torus. u1 is q1 (conformal) or t (semi-geodesic),
// u2 is q2 or x.
struct TorusPoint {
  double u1 = 0.0;
  double u2 = 0.0;
};

// Rectangular period lattice.
struct Lattice {
  double L1 = 1.0;
  double L2 = 1.0;

  double reduce1(double u) const;
  double reduce2(double u) const;
  TorusPoint reduce(TorusPoint p) const { return {reduce1(p.u1), reduce2(p.u2)}; }
};

// Periodic scalar field with first and second partial derivatives.
// Implementations are immutable after construction; eval() is pure and
// safe to call concurrently.
class ScalarField2 {
 public:
  virtual ~ScalarField2() = default;
  virtual Jet2 eval(TorusPoint p) const = 0;
  virtual Lattice lattice() const = 0;

  double value(TorusPoint p) const { return eval(p).v; }
};

using Field = std::shared_ptr<const ScalarField2>;

// One-variable periodic profile with two derivatives (period 1 in xi
// unless stated otherwise by its use site).
class Profile1 {
 public:
  virtual ~Profile1() = default;
  virtual Jet1 eval(double xi) const = 0;
};

using Profile = std::shared_ptr<const Profile1>;

Field make_constant_field(double c, Lattice lat = {});

// Field from an expression in the variables q1/t/u1 and q2/x/u2.
Field make_expr_field(const std::string& expr, Lattice lat = {});
Field make_expr_field(const Expr& expr, Lattice lat = {});

Profile make_expr_profile(const std::string& expr);  // variable: xi (or x, u)
Profile make_callable_profile(std::function<Jet1(double)> fn);

// f(c1*u1 + c2*u2) with chain-rule partials.
Field make_linear_pulled_field(Profile f, double c1, double c2, Lattice lat = {});

Field make_sum_field(Field a, Field b);
Field make_scaled_field(double c, Field a);

// Tabulated field: periodic 6th-order central differences build the
// derivative grids, bicubic (Catmull-Rom) interpolation evaluates off
// the nodes. values[i][j] samples the point (i*L1/n1, j*L2/n2).
Field make_sampled_field(const std::vector<std::vector<double>>& values, Lattice lat);

}  // namespace torusflow
