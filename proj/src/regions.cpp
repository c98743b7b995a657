#include "torusflow/regions.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "torusflow/io.hpp"
#include "torusflow/parallel.hpp"

namespace torusflow {

namespace {

RegionNode classify_node(const IntegralCoeffs& F, const SemiGeodesicMetric& metric, TorusPoint p,
                         double class_tol) {
  RegionNode node;
  node.g = metric.g->value(p);
  std::vector<double> a = F.values_at(p);
  const int n = F.n;

  std::array<double, 5> a4{};
  if (n == 4) {
    const auto canon = canonicalize_quartic({a[0], a[1], a[2], a[3], a[4]});
    a4 = canon.a;
  } else {
    for (int k = 0; k <= n; ++k) a4[k] = a[k];
  }
  std::span<const double> coeffs(a4.data(), n + 1);
  const HatPair hp = hat_polys(coeffs, n);

  RootSet rs;
  if (n == 3) {
    rs = solve_cubic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3]});
  } else {
    rs = solve_quartic({hp.G.c[0], hp.G.c[1], hp.G.c[2], hp.G.c[3], hp.G.c[4]});
  }
  node.cls = classify_roots(rs, class_tol);

  for (double s : rs.real_roots) {
    node.real_roots.push_back(s);
    const double w = 1.0 + s * s;
    const double den = (n == 4) ? w * w : w * std::sqrt(w);
    node.real_invariants.push_back(hp.F.eval(s) / den);
  }
  if (!rs.complex_pairs.empty()) {
    const auto& pr = rs.complex_pairs.front();
    node.has_pair = true;
    node.alpha = pr.alpha;
    node.beta = pr.beta;
    const std::complex<double> s(pr.alpha, pr.beta);
    const std::complex<double> w = 1.0 + s * s;
    std::complex<double> r;
    if (n == 4) {
      r = hp.F.eval(s) / (w * w);
    } else {
      r = hp.F.eval(s) / std::pow(w, 1.5);
      r = r * r;  // single-valued invariant for the odd degree
    }
    node.pair_u = r.real();
    node.pair_v = r.imag();
  }
  return node;
}

}  // namespace

RegionMap scan_torus(const IntegralCoeffs& F, const SemiGeodesicMetric& metric, int res1, int res2,
                     double class_tol, int threads) {
  F.validate();
  if (F.model != Model::SemiGeodesic)
    throw std::invalid_argument("scan_torus expects a semi-geodesic integral");
  if (F.n != 3 && F.n != 4) throw std::invalid_argument("scan_torus: degree must be 3 or 4");
  if (res1 < 16 || res2 < 16) throw std::invalid_argument("scan_torus: resolution must be >= 16");

  RegionMap map;
  map.n1 = res1;
  map.n2 = res2;
  map.lat = metric.g->lattice();
  map.degree = F.n;
  map.class_tol = class_tol;
  map.nodes.resize(static_cast<size_t>(res1) * res2);

  parallel_for(res1, threads, [&](int i) {
    for (int j = 0; j < res2; ++j) {
      const TorusPoint p{i * map.lat.L1 / res1, j * map.lat.L2 / res2};
      map.nodes[static_cast<size_t>(i) * res2 + j] = classify_node(F, metric, p, class_tol);
    }
  });
  return map;
}

ComponentSet connected_components(const RegionMap& map) {
  ComponentSet out;
  std::vector<int> label(map.nodes.size(), -1);
  auto idx = [&](int i, int j) {
    return static_cast<size_t>((i % map.n1 + map.n1) % map.n1) * map.n2 +
           ((j % map.n2 + map.n2) % map.n2);
  };
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};

  for (int i = 0; i < map.n1; ++i) {
    for (int j = 0; j < map.n2; ++j) {
      if (map.at(i, j).cls != RootClass::Elliptic || label[idx(i, j)] >= 0) continue;
      Component comp;
      std::vector<std::pair<int, int>> stack{{i, j}};
      label[idx(i, j)] = static_cast<int>(out.components.size());
      while (!stack.empty()) {
        auto [ci, cj] = stack.back();
        stack.pop_back();
        comp.nodes.emplace_back((ci % map.n1 + map.n1) % map.n1, (cj % map.n2 + map.n2) % map.n2);
        for (int d = 0; d < 4; ++d) {
          const int ni = ci + di[d], nj = cj + dj[d];
          if (map.at(ni, nj).cls != RootClass::Elliptic) {
            comp.touches_boundary = true;
            continue;
          }
          if (label[idx(ni, nj)] < 0) {
            label[idx(ni, nj)] = static_cast<int>(out.components.size());
            stack.emplace_back(ni, nj);
          }
        }
      }
      out.components.push_back(std::move(comp));
    }
  }
  return out;
}

TheoremCheckReport constancy_and_transport_check(const RegionMap& map,
                                                 const SemiGeodesicMetric& metric,
                                                 const IntegralCoeffs& F, double bracket_tol) {
  TheoremCheckReport rep;
  rep.bracket_residual = max_bracket_residual(F, Metric(metric), map.n1, map.n2);
  if (rep.bracket_residual > bracket_tol) {
    rep.applicable = false;
    rep.message = "not an integral (bracket residual " + format_g(rep.bracket_residual) +
                  " > " + format_g(bracket_tol) + "); constancy conclusions inapplicable";
    return rep;
  }
  rep.applicable = true;
  rep.message = "ok";

  const ComponentSet comps = connected_components(map);
  for (const auto& comp : comps.components) {
    TheoremCheckReport::ComponentStat st;
    st.size = comp.nodes.size();
    st.touches_boundary = comp.touches_boundary;
    double mu = 0.0, mv = 0.0;
    for (auto [i, j] : comp.nodes) {
      mu += map.at(i, j).pair_u;
      mv += map.at(i, j).pair_v;
    }
    mu /= static_cast<double>(comp.nodes.size());
    mv /= static_cast<double>(comp.nodes.size());
    for (auto [i, j] : comp.nodes) {
      st.max_dev_u = std::max(st.max_dev_u, std::fabs(map.at(i, j).pair_u - mu));
      st.max_dev_v = std::max(st.max_dev_v, std::fabs(map.at(i, j).pair_v - mv));
      st.max_abs_v = std::max(st.max_abs_v, std::fabs(map.at(i, j).pair_v));
    }
    rep.component_stats.push_back(st);
  }

  // transport residual (r_k)_t + lambda_k (r_k)_x on nodes whose 4-stencil
  // shares class and real-root count
  const double h1 = map.lat.L1 / map.n1;
  const double h2 = map.lat.L2 / map.n2;
  for (int i = 0; i < map.n1; ++i) {
    for (int j = 0; j < map.n2; ++j) {
      const RegionNode& c = map.at(i, j);
      if (c.cls == RootClass::Degenerate) continue;
      const RegionNode& up = map.at(i + 1, j);
      const RegionNode& dn = map.at(i - 1, j);
      const RegionNode& rt = map.at(i, j + 1);
      const RegionNode& lf = map.at(i, j - 1);
      const size_t nr = c.real_roots.size();
      auto same = [&](const RegionNode& o) {
        return o.cls == c.cls && o.real_roots.size() == nr;
      };
      if (!same(up) || !same(dn) || !same(rt) || !same(lf)) continue;
      for (size_t k = 0; k < nr; ++k) {
        const double rt_d = (up.real_invariants[k] - dn.real_invariants[k]) / (2.0 * h1);
        const double rx_d = (rt.real_invariants[k] - lf.real_invariants[k]) / (2.0 * h2);
        const double lam = c.g * c.real_roots[k];
        rep.max_transport_residual =
            std::max(rep.max_transport_residual, std::fabs(rt_d + lam * rx_d));
      }
    }
  }
  return rep;
}

void write_region_pgm(const RegionMap& map, const std::string& path,
                      const std::vector<std::string>& header_comments) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "P5\n";
  for (const auto& line : header_comments) os << "# " << line << "\n";
  os << map.n2 << " " << map.n1 << "\n255\n";
  for (int i = 0; i < map.n1; ++i) {
    for (int j = 0; j < map.n2; ++j) {
      unsigned char b = 0;
      switch (map.at(i, j).cls) {
        case RootClass::Hyperbolic: b = 255; break;
        case RootClass::Elliptic: b = 128; break;
        case RootClass::Degenerate: b = 0; break;
      }
      os.put(static_cast<char>(b));
    }
  }
}

void write_region_csv(const RegionMap& map, const std::string& path,
                      const std::vector<std::string>& header_comments) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  for (const auto& line : header_comments) os << "# " << line << "\n";
  os << "i,j,u1,u2,class,g,real_roots,real_invariants,alpha,beta,pair_u,pair_v\n";
  for (int i = 0; i < map.n1; ++i) {
    for (int j = 0; j < map.n2; ++j) {
      const RegionNode& nd = map.at(i, j);
      os << i << "," << j << "," << format_g(i * map.lat.L1 / map.n1) << ","
         << format_g(j * map.lat.L2 / map.n2) << "," << root_class_name(nd.cls) << ","
         << format_g(nd.g) << ",";
      for (size_t k = 0; k < nd.real_roots.size(); ++k)
        os << (k ? ";" : "") << format_g(nd.real_roots[k]);
      os << ",";
      for (size_t k = 0; k < nd.real_invariants.size(); ++k)
        os << (k ? ";" : "") << format_g(nd.real_invariants[k]);
      os << "," << format_g(nd.alpha) << "," << format_g(nd.beta) << "," << format_g(nd.pair_u)
         << "," << format_g(nd.pair_v) << "\n";
    }
  }
}

}  // namespace torusflow
