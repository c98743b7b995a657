#pragma once

#include <string>
#include <vector>

#include "torusflow/hydro.hpp"
#include "torusflow/integral.hpp"
#include "torusflow/metric.hpp"

namespace torusflow {

struct RegionNode {
  RootClass cls = RootClass::Degenerate;
  double g = 0.0;
  std::vector<double> real_roots;    // ascending
  std::vector<double> real_invariants;  // r at each real root, same order
  bool has_pair = false;
  double alpha = 0.0, beta = 0.0;    // complex pair of Ghat, if any
  // Single-valued pair invariant: r for n=4, r^2 for n=3.
  double pair_u = 0.0, pair_v = 0.0;
};

struct RegionMap {
  int n1 = 0, n2 = 0;   // grid nodes along u1 (t) and u2 (x)
  Lattice lat;
  int degree = 0;
  double class_tol = 1e-7;
  std::vector<RegionNode> nodes;  // row-major, index = i*n2 + j

  const RegionNode& at(int i, int j) const {
    return nodes[static_cast<size_t>((i % n1 + n1) % n1) * n2 + ((j % n2 + n2) % n2)];
  }
};

// Classifies every grid node: evaluate coefficients, canonicalize for
// n = 4, build hat polynomials, solve, classify, evaluate invariants.
RegionMap scan_torus(const IntegralCoeffs& F, const SemiGeodesicMetric& metric, int res1, int res2,
                     double class_tol = 1e-7, int threads = 1);

struct Component {
  std::vector<std::pair<int, int>> nodes;
  bool touches_boundary = false;  // some node has a non-elliptic neighbor
};

struct ComponentSet {
  std::vector<Component> components;  // elliptic components, periodic 4-adjacency
};

ComponentSet connected_components(const RegionMap& map);

struct TheoremCheckReport {
  bool applicable = false;         // bracket residual precondition met
  double bracket_residual = 0.0;
  std::string message;
  // Per elliptic component: deviation of the pair invariant from its mean.
  struct ComponentStat {
    size_t size = 0;
    bool touches_boundary = false;
    double max_dev_u = 0.0;
    double max_dev_v = 0.0;
    double max_abs_v = 0.0;  // relevant when the component has a boundary
  };
  std::vector<ComponentStat> component_stats;
  // Transport residual |(r_i)_t + lambda_i (r_i)_x| over real invariants,
  // centered differences on same-class neighborhoods.
  double max_transport_residual = 0.0;
};

TheoremCheckReport constancy_and_transport_check(const RegionMap& map,
                                                 const SemiGeodesicMetric& metric,
                                                 const IntegralCoeffs& F,
                                                 double bracket_tol = 1e-8);

// PGM (binary P5): hyperbolic 255, elliptic 128, degenerate 0.
void write_region_pgm(const RegionMap& map, const std::string& path,
                      const std::vector<std::string>& header_comments = {});

// CSV: node coordinates, class, roots, invariants.
void write_region_csv(const RegionMap& map, const std::string& path,
                      const std::vector<std::string>& header_comments = {});

}  // namespace torusflow
