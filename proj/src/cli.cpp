#include "torusflow/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "torusflow/exact.hpp"
#include "torusflow/flow.hpp"
#include "torusflow/hydro.hpp"
#include "torusflow/io.hpp"
#include "torusflow/parallel.hpp"
#include "torusflow/reducibility.hpp"
#include "torusflow/regions.hpp"

namespace torusflow {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json parse_json_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
}

Lattice lattice_from(const json& j) {
  Lattice lat;
  if (j.contains("lattice")) {
    const auto& l = j["lattice"];
    if (!l.is_array() || l.size() != 2) throw ConfigError("lattice must be [L1, L2]");
    lat.L1 = l[0].get<double>();
    lat.L2 = l[1].get<double>();
    if (lat.L1 <= 0.0 || lat.L2 <= 0.0) throw ConfigError("lattice periods must be positive");
  }
  return lat;
}

Metric metric_from_json(const json& j) {
  const std::string kind = j.value("kind", "");
  const Lattice lat = lattice_from(j);
  try {
    if (kind == "conformal") return ConformalMetric{make_expr_field(j.at("lambda").get<std::string>(), lat)};
    if (kind == "semigeodesic") return SemiGeodesicMetric{make_expr_field(j.at("g").get<std::string>(), lat)};
    if (kind == "liouville") {
      LiouvilleSpec spec;
      spec.f1 = make_expr_profile(j.at("f1").get<std::string>());
      spec.f2 = make_expr_profile(j.at("f2").get<std::string>());
      const auto& d = j.at("directions");
      if (!d.is_array() || d.size() != 4) throw ConfigError("directions must be [m1,n1,m2,n2]");
      spec.m1 = d[0].get<double>();
      spec.n1 = d[1].get<double>();
      spec.m2 = d[2].get<double>();
      spec.n2 = d[3].get<double>();
      spec.lat = lat;
      return liouville_conformal_factor(spec);
    }
    if (kind == "samples") {
      const auto values = j.at("values").get<std::vector<std::vector<double>>>();
      Field f = make_sampled_field(values, lat);
      const std::string model = j.value("model", "semigeodesic");
      if (model == "conformal") return ConformalMetric{f};
      if (model == "semigeodesic") return SemiGeodesicMetric{f};
      throw ConfigError("samples model must be conformal or semigeodesic");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("metric config: ") + e.what());
  }
  throw ConfigError("metric kind must be conformal | semigeodesic | liouville | samples");
}

IntegralCoeffs integral_from_json(const json& j) {
  IntegralCoeffs F;
  try {
    F.n = j.at("degree").get<int>();
    const std::string model = j.value("model", "semigeodesic");
    if (model == "conformal")
      F.model = Model::Conformal;
    else if (model == "semigeodesic")
      F.model = Model::SemiGeodesic;
    else
      throw ConfigError("integral model must be conformal or semigeodesic");
    const Lattice lat = lattice_from(j);
    for (const auto& e : j.at("coefficients")) F.a.push_back(make_expr_field(e.get<std::string>(), lat));
    F.normalized = j.value("normalized", false);
    F.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("integral config: ") + e.what());
  }
  return F;
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw ConfigError("grid must be NxM");
  try {
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw ConfigError("grid must be NxM");
  }
}

void write_lines(std::ostream& os, const std::vector<std::string>& header) {
  for (const auto& h : header) os << "# " << h << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open output file: " + path);
  return os;
}

// ---- subcommand payloads ----------------------------------------------

struct CommonOpts {
  std::string metric_path, integral_path, integral2_path;
  std::string grid = "128x128";
  double tol = -1.0;  // subcommands pick their default
  std::string out;
  std::uint64_t seed = 0;
  int threads = default_thread_count();
};

int run_classify(const CommonOpts& o, double class_tol) {
  const Metric metric = load_metric_file(o.metric_path);
  const auto* sm = std::get_if<SemiGeodesicMetric>(&metric);
  if (!sm) throw ConfigError("classify requires a semi-geodesic metric");
  const IntegralCoeffs F = load_integral_file(o.integral_path);
  const auto [n1, n2] = parse_grid(o.grid);

  const RegionMap map = scan_torus(F, *sm, n1, n2, class_tol, o.threads);
  const ComponentSet comps = connected_components(map);

  int nh = 0, ne = 0, nd = 0;
  for (const auto& nd_ : map.nodes) {
    if (nd_.cls == RootClass::Hyperbolic) ++nh;
    else if (nd_.cls == RootClass::Elliptic) ++ne;
    else ++nd;
  }
  const std::string cfg = read_text_file(o.metric_path) + read_text_file(o.integral_path) + o.grid;
  const auto header = output_header(cfg, o.seed);
  if (!o.out.empty()) {
    write_region_pgm(map, o.out + ".pgm", header);
    write_region_csv(map, o.out + ".csv", header);
  }
  std::cout << "nodes: " << map.nodes.size() << " hyperbolic: " << nh << " elliptic: " << ne
            << " degenerate: " << nd << "\nelliptic components: " << comps.components.size()
            << "\n";
  return 0;
}

int run_verify_bracket(const CommonOpts& o, double tol) {
  const Metric metric = load_metric_file(o.metric_path);
  const IntegralCoeffs F = load_integral_file(o.integral_path);
  const auto [n1, n2] = parse_grid(o.grid);
  const double worst = max_bracket_residual(F, metric, n1, n2);
  std::cout << "max bracket residual over " << n1 << "x" << n2 << " grid: " << format_g(worst)
            << " (tol " << format_g(tol) << ")\n";
  return worst <= tol ? 0 : 1;
}

int run_simple_wave(double lambda, const std::string& profile, int nodes, const CommonOpts& o) {
  const SimpleWaveSolution sol = simple_wave(lambda, make_expr_profile(profile));

  // centered-difference residuals of the three coefficient equations
  const double h = 1e-5;
  double sys_res = 0.0, eq7_res = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double xi = static_cast<double>(i) / nodes;
    auto d = [&](const Profile& f) { return (f->eval(xi + h).v - f->eval(xi - h).v) / (2.0 * h); };
    const double a0 = sol.a0->eval(xi).v, a1 = sol.a1->eval(xi).v, a2 = sol.a2->eval(xi).v;
    const double d0 = d(sol.a0), d1 = d(sol.a1), d2 = d(sol.a2);
    sys_res = std::max(sys_res, std::fabs(a1 * d2 - lambda * d0));
    sys_res = std::max(sys_res, std::fabs(a2 * d0 + 2.0 * a2 * d2 - 3.0 * a0 * d2 - lambda * d1));
    sys_res = std::max(sys_res, std::fabs(a2 * d1 + (3.0 - 2.0 * a1) * d2 - lambda * d2));
    eq7_res = std::max(eq7_res, std::fabs(lambda * a0 - sol.c1 / 3.0 * a2 * a2 * a2 -
                                          (3.0 - lambda) / 2.0 * a2 - sol.c3));
  }
  const ReductionCertificate cert = verify_cubic_identity(sol, nodes);

  if (!o.out.empty()) {
    auto os = open_out(o.out);
    const std::string cfg = "simple-wave lambda=" + format_g(lambda) + " profile=" + profile;
    write_lines(os, output_header(cfg, o.seed));
    os << "xi,a0,a1,a2\n";
    for (int i = 0; i < nodes; ++i) {
      const double xi = static_cast<double>(i) / nodes;
      os << format_g(xi) << "," << format_g(sol.a0->eval(xi).v) << ","
         << format_g(sol.a1->eval(xi).v) << "," << format_g(sol.a2->eval(xi).v) << "\n";
    }
  }
  std::cout << "constants: c1 = " << format_g(sol.c1) << " c2 = " << format_g(sol.c2)
            << " c3 = 0\n";
  std::cout << "system residual (FD): " << format_g(sys_res) << "\n";
  std::cout << "eliminated-equation residual: " << format_g(eq7_res) << "\n";
  std::cout << cert.render();
  const bool ok = sys_res <= 1e-8 && eq7_res <= 1e-10 && cert.residual <= 1e-12;
  return ok ? 0 : 1;
}

int run_verify_identity_cubic(double lambda, const std::string& profile, int nodes,
                              const CommonOpts& o) {
  const SimpleWaveSolution sol = simple_wave(lambda, make_expr_profile(profile));
  const ReductionCertificate cert = verify_cubic_identity(sol, nodes);
  if (!o.out.empty()) {
    auto os = open_out(o.out);
    write_lines(os, output_header("verify-identity cubic lambda=" + format_g(lambda), o.seed));
    os << cert.render();
  }
  std::cout << cert.render();
  return cert.residual <= 1e-12 ? 0 : 1;
}

int run_verify_identity_quartic(const CommonOpts& o, double tol) {
  const Metric metric = load_metric_file(o.metric_path);
  const IntegralCoeffs F4 = load_integral_file(o.integral_path);
  const IntegralCoeffs F2 = load_integral_file(o.integral2_path);
  const auto [n1, n2] = parse_grid(o.grid);
  const ReductionCertificate cert = verify_quartic_identity(F4, F2, metric, n1, n2);
  if (!o.out.empty()) {
    auto os = open_out(o.out);
    const std::string cfg = read_text_file(o.metric_path) + read_text_file(o.integral_path) +
                            read_text_file(o.integral2_path);
    write_lines(os, output_header(cfg, o.seed));
    os << cert.render();
  }
  std::cout << cert.render();
  return cert.residual <= tol ? 0 : 1;
}

int run_flow(const CommonOpts& o, const std::string& initial, double T, double dt, int stride,
             int order, const std::vector<std::string>& monitor_paths) {
  const Metric metric = load_metric_file(o.metric_path);
  PhaseState st;
  {
    std::istringstream is(initial);
    char c;
    if (!(is >> st.q.u1 >> c >> st.q.u2 >> c >> st.p1 >> c >> st.p2))
      throw ConfigError("initial state must be \"u1,u2,p1,p2\"");
  }
  std::vector<IntegralCoeffs> monitors;
  std::string cfg = read_text_file(o.metric_path) + initial + format_g(T) + format_g(dt);
  for (const auto& mp : monitor_paths) {
    monitors.push_back(load_integral_file(mp));
    cfg += read_text_file(mp);
  }
  IntegratorOptions opts;
  opts.dt = dt;
  opts.output_stride = stride;
  opts.order = order;
  const Trajectory traj = integrate(metric, st, T, opts, monitors);
  const DriftReport rep = conservation_report(traj);

  if (!o.out.empty()) {
    auto os = open_out(o.out);
    write_lines(os, output_header(cfg, o.seed));
    for (const auto& s : traj.samples) {
      os << "{\"time\":" << format_g(s.time) << ",\"u1\":" << format_g(s.u1)
         << ",\"u2\":" << format_g(s.u2) << ",\"p1\":" << format_g(s.p1)
         << ",\"p2\":" << format_g(s.p2) << ",\"H\":" << format_g(s.H) << ",\"monitors\":[";
      for (size_t m = 0; m < s.monitors.size(); ++m)
        os << (m ? "," : "") << format_g(s.monitors[m]);
      os << "]}\n";
    }
  }
  std::cout << "H drift: " << format_g(rep.H_max_drift)
            << " (relative " << format_g(rep.H_rel_drift) << ")\n";
  for (size_t m = 0; m < rep.monitor_max_drift.size(); ++m)
    std::cout << "monitor " << m << " drift: " << format_g(rep.monitor_max_drift[m])
              << " (relative " << format_g(rep.monitor_rel_drift[m]) << ")\n";
  return 0;
}

int run_exact_check(int trials, const CommonOpts& o) {
  const exact::IdentityReport rep = exact::verify_displayed_identities(trials, o.seed);
  const std::string text = rep.render();
  if (!o.out.empty()) {
    auto os = open_out(o.out);
    write_lines(os, output_header("exact-check trials=" + std::to_string(trials), o.seed));
    os << text;
  }
  std::cout << text;
  return (rep.remainder_ok && rep.gamma_factor_ok && rep.case1_ok) ? 0 : 1;
}

int run_elliptic_check(const CommonOpts& o, double tol) {
  const Metric metric = load_metric_file(o.metric_path);
  const auto* sm = std::get_if<SemiGeodesicMetric>(&metric);
  if (!sm) throw ConfigError("elliptic-check requires a semi-geodesic metric");
  const IntegralCoeffs F = load_integral_file(o.integral_path);
  const auto [n1, n2] = parse_grid(o.grid);
  const RegionMap map = scan_torus(F, *sm, n1, n2, 1e-7, o.threads);
  const TheoremCheckReport rep = constancy_and_transport_check(map, *sm, F);

  std::ostringstream os;
  os << "bracket residual: " << format_g(rep.bracket_residual) << "\n";
  if (!rep.applicable) {
    os << rep.message << "\n";
    std::cout << os.str();
    return 1;
  }
  double worst_dev = 0.0;
  for (size_t c = 0; c < rep.component_stats.size(); ++c) {
    const auto& st = rep.component_stats[c];
    os << "component " << c << " size " << st.size << (st.touches_boundary ? " (boundary)" : "")
       << ": dev_u " << format_g(st.max_dev_u) << " dev_v " << format_g(st.max_dev_v);
    if (st.touches_boundary) os << " |v| " << format_g(st.max_abs_v);
    os << "\n";
    worst_dev = std::max(worst_dev, std::max(st.max_dev_u, st.max_dev_v));
  }
  os << "max transport residual: " << format_g(rep.max_transport_residual) << "\n";
  if (!o.out.empty()) {
    auto outs = open_out(o.out);
    const std::string cfg = read_text_file(o.metric_path) + read_text_file(o.integral_path);
    write_lines(outs, output_header(cfg, o.seed));
    outs << os.str();
  }
  std::cout << os.str();
  return worst_dev <= tol ? 0 : 1;
}

}  // namespace

Metric load_metric_file(const std::string& path) { return metric_from_json(parse_json_file(path)); }

IntegralCoeffs load_integral_file(const std::string& path) {
  return integral_from_json(parse_json_file(path));
}

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"quasi-linear analysis of cubic/quartic geodesic-flow integrals on the 2-torus"};
  app.require_subcommand(1);

  CommonOpts o;
  double lambda = 1.0;
  std::string profile = "2+0.3*sin(2*pi*xi)";
  int nodes = 256;
  std::string kind = "cubic";
  std::string initial = "0,0,1,0.5";
  double T = 10.0, dt = 1e-3;
  int stride = 100, order = 2, trials = 100;
  std::vector<std::string> monitor_paths;

  auto add_common = [&](CLI::App* cmd, bool needs_metric, bool needs_integral) {
    auto* m = cmd->add_option("--metric", o.metric_path, "metric config file (JSON)");
    if (needs_metric) m->required();
    auto* f = cmd->add_option("--integral", o.integral_path, "integral config file (JSON)");
    if (needs_integral) f->required();
    cmd->add_option("--grid", o.grid, "grid resolution NxM");
    cmd->add_option("--tol", o.tol, "verification tolerance");
    cmd->add_option("--out", o.out, "output path");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--threads", o.threads, "worker threads (default: all cores)");
  };

  auto* classify = app.add_subcommand("classify", "scan the torus and write the region map");
  add_common(classify, true, true);

  auto* vbr = app.add_subcommand("verify-bracket", "max residual of {F, H} over a grid");
  add_common(vbr, true, true);

  auto* sw = app.add_subcommand("simple-wave", "build and verify a travelling-wave solution");
  sw->add_option("--lambda", lambda, "wave slope")->required();
  sw->add_option("--profile", profile, "a2 profile, expression in xi");
  sw->add_option("--nodes", nodes, "verification nodes");
  add_common(sw, false, false);

  auto* vid = app.add_subcommand("verify-identity", "cubic or quartic reduction certificate");
  vid->add_option("--kind", kind, "cubic | quartic")->required();
  vid->add_option("--lambda", lambda, "wave slope (cubic)");
  vid->add_option("--profile", profile, "a2 profile (cubic)");
  vid->add_option("--nodes", nodes, "verification nodes (cubic)");
  vid->add_option("--integral2", o.integral2_path, "degree-2 integral config (quartic)");
  add_common(vid, false, false);

  auto* fl = app.add_subcommand("flow", "integrate the geodesic flow, monitor integrals");
  fl->add_option("--initial", initial, "initial state u1,u2,p1,p2")->required();
  fl->add_option("--T", T, "final time")->required();
  fl->add_option("--dt", dt, "time step");
  fl->add_option("--stride", stride, "output stride");
  fl->add_option("--order", order, "2 (midpoint) or 4 (composed midpoint)");
  fl->add_option("--monitor", monitor_paths, "integral config to monitor (repeatable)");
  add_common(fl, true, false);

  auto* ec = app.add_subcommand("exact-check", "exact verification of the quartic identities");
  ec->add_option("--trials", trials, "random tuples per identity");
  add_common(ec, false, false);

  auto* el = app.add_subcommand("elliptic-check", "constancy and transport checks on a scan");
  add_common(el, true, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (classify->parsed()) return run_classify(o, o.tol > 0 ? o.tol : 1e-7);
    if (vbr->parsed()) return run_verify_bracket(o, o.tol > 0 ? o.tol : 1e-8);
    if (sw->parsed()) return run_simple_wave(lambda, profile, nodes, o);
    if (vid->parsed()) {
      if (kind == "cubic") return run_verify_identity_cubic(lambda, profile, nodes, o);
      if (kind == "quartic") {
        if (o.metric_path.empty() || o.integral_path.empty() || o.integral2_path.empty())
          throw ConfigError("quartic identity needs --metric, --integral, --integral2");
        return run_verify_identity_quartic(o, o.tol > 0 ? o.tol : 1e-10);
      }
      throw ConfigError("--kind must be cubic or quartic");
    }
    if (fl->parsed()) return run_flow(o, initial, T, dt, stride, order, monitor_paths);
    if (ec->parsed()) return run_exact_check(trials, o);
    if (el->parsed()) return run_elliptic_check(o, o.tol > 0 ? o.tol : 1e-6);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace torusflow
