// plw: capacities, the singular parabolic solver, Harnack checks and Wiener
// moduli from the command line. See README.md for the config schema.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "json_config.hpp"
#include "plw/capacity.hpp"
#include "plw/errors.hpp"
#include "plw/experiment.hpp"
#include "plw/harnack.hpp"
#include "plw/pde.hpp"
#include "plw/wiener.hpp"

using json = nlohmann::ordered_json;

namespace plw::cli {
namespace {

struct Globals {
  std::string out;
  int threads = 1;
  std::uint64_t seed = 0;
};

struct DomainOpts {
  std::string domain = "square_with_corner";
  BenchmarkParams params;

  void add(CLI::App* app) {
    app->add_option("--domain", domain, "benchmark name or domain JSON file")->capture_default_str();
    app->add_option("--dim", params.dim, "benchmark dimension")->capture_default_str();
    app->add_option("--h", params.h, "lattice spacing")->capture_default_str();
    app->add_option("--half-edge", params.half_edge, "benchmark bounding-box half edge")->capture_default_str();
    app->add_option("--cusp-exponent", params.cusp_exponent)->capture_default_str();
    app->add_option("--cusp-decay", params.cusp_decay)->capture_default_str();
    app->add_option("--slit-width", params.slit_width, "slit half-thickness; <= 0 selects 0.75 h")->capture_default_str();
  }
  GridDomain load() const { return load_domain(domain, params); }
};

struct CapacityOpts {
  CapacityOptions opts;
  void add(CLI::App* app) {
    app->add_option("--cap-tol", opts.rel_tol, "capacity Newton tolerance")->capture_default_str();
    app->add_option("--cap-max-iterations", opts.max_iterations)->capture_default_str();
  }
};

json point_json(const Point& x) {
  json a = json::array();
  for (int i = 0; i < x.size(); ++i) a.push_back(x[i]);
  return a;
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void emit_json(const Globals& g, const std::string& name, const json& j) { emit(g.out, name, j.dump(2) + "\n"); }

// Lattice of spacing h whose closed hull holds the window and one extra layer.
Lattice window_lattice(const Cube& W, double h) {
  Lattice L;
  L.dim = W.dim();
  L.h = h;
  L.origin = W.center.array() - W.half_edge - h;
  const Index n = static_cast<Index>(std::llround(2.0 * W.half_edge / h)) + 3;
  L.shape = {n, L.dim > 1 ? n : 1, L.dim > 2 ? n : 1};
  return L;
}

NodeMask cube_mask(const Lattice& L, const Cube& K) {
  NodeMask m{L, std::vector<std::uint8_t>(static_cast<std::size_t>(L.size()), 0)};
  for (Index k = 0; k < L.size(); ++k)
    if (K.dilated(1.0 + 1e-12).contains(L.position(k))) m.bits[static_cast<std::size_t>(k)] = 1;
  return m;
}

// ---------------------------------------------------------------- cap
struct CapCmd {
  std::string inner;
  std::string window;
  std::string domain;
  int dim = 2;
  double h = 1.0 / 32.0;
  double p = 1.8;
  std::string potential;
  BenchmarkParams params;
  CapacityOpts cap;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("cap", "p-capacity of a condenser (K, window)");
    c->add_option("--inner", inner, "cube:x,...,half_edge")->required();
    c->add_option("--window", window, "cube:x,...,half_edge")->required();
    c->add_option("--domain", domain, "optional domain E; K becomes inner \\ E");
    c->add_option("--dim", dim)->capture_default_str();
    c->add_option("--h", h)->capture_default_str();
    c->add_option("--p", p)->capture_default_str();
    c->add_option("--potential", potential, "file name for the potential CSV");
    cap.add(c);
  }

  int run(const Globals& g) {
    NodeMask K;
    int N = dim;
    if (!domain.empty()) {
      params.dim = dim;
      params.h = h;
      GridDomain E = load_domain(domain, params);
      N = E.dim();
      K = rasterize_cube_difference(parse_cube(inner, N), E);
    }
    const Cube W = parse_cube(window, N);
    if (domain.empty()) K = cube_mask(window_lattice(W, h), parse_cube(inner, N));
    const CapacityResult r = p_capacity({K, W, p}, cap.opts);
    json j;
    j["value"] = r.value;
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["p"] = p;
    j["nodes_in_K"] = K.count();
    emit_json(g, "cap.json", j);
    if (!potential.empty()) {
      std::ostringstream os;
      const char* names[] = {"x", "y", "z"};
      for (int a = 0; a < N; ++a) os << names[a] << ',';
      os << "phi\n";
      for (Index k = 0; k < r.lattice.size(); ++k) {
        const Point x = r.lattice.position(k);
        for (int a = 0; a < N; ++a) os << csv_number(x[a]) << ',';
        os << csv_number(r.potential[k]) << '\n';
      }
      emit(g.out.empty() ? "." : g.out, potential, os.str());
    }
    return 0;
  }
};

// ---------------------------------------------------------------- gamma-p
struct GammaCmd {
  std::string inner;
  std::string window;
  int dim = 2;
  double h = 1.0 / 32.0;
  double p = 1.8;
  double t1 = 0.0;
  double t2 = 1.0;
  int slices = 4;
  CapacityOpts cap;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("gamma-p", "parabolic capacity of a time-constant condenser K x (t1,t2)");
    c->add_option("--inner", inner, "cube:x,...,half_edge")->required();
    c->add_option("--window", window, "cube:x,...,half_edge")->required();
    c->add_option("--dim", dim)->capture_default_str();
    c->add_option("--h", h)->capture_default_str();
    c->add_option("--p", p)->capture_default_str();
    c->add_option("--t1", t1)->capture_default_str();
    c->add_option("--t2", t2)->capture_default_str();
    c->add_option("--slices", slices)->capture_default_str();
    cap.add(c);
  }

  int run(const Globals& g) {
    if (!(t2 > t1)) throw InvalidArgument("need t2 > t1");
    if (slices < 1) throw InvalidArgument("need at least one slice");
    const Cube W = parse_cube(window, dim);
    const NodeMask K = cube_mask(window_lattice(W, h), parse_cube(inner, dim));
    ParabolicCondenser pc;
    pc.Q = make_cylinder(W, t1, 0.0, (t2 - t1) / std::pow(W.half_edge, p), CylinderKind::forward, p);
    pc.slices.assign(static_cast<std::size_t>(slices), K);
    pc.p = p;
    const auto r = parabolic_capacity(pc, cap.opts);
    const double elliptic = p_capacity({K, W, p}, cap.opts).value;
    json j;
    j["value"] = r.value;
    j["slice_values"] = r.slice_values;
    j["elliptic"] = elliptic;
    j["slice_formula"] = (t2 - t1) * elliptic;
    emit_json(g, "gamma_p.json", j);
    return 0;
  }
};

// ---------------------------------------------------------------- delta
struct DeltaCmd {
  DomainOpts dom;
  std::string point;
  double rho = 0.25;
  double p = 1.8;
  int cells = 0;
  CapacityOpts cap;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("delta", "capacity density delta(x_o, rho)");
    dom.add(c);
    c->add_option("--point", point, "x,y[,z]")->required();
    c->add_option("--rho", rho)->capture_default_str();
    c->add_option("--p", p)->capture_default_str();
    c->add_option("--cells", cells, "re-rasterize benchmarks at rho/cells (0: use the raster)")
        ->capture_default_str();
    cap.add(c);
  }

  int run(const Globals& g) {
    const GridDomain E = dom.load();
    const Point x = parse_point(point, E.dim());
    const bool analytic = cells > 0 && E.shape;
    const DensityResult r = analytic ? capacity_density(E.shape, E.dim(), x, rho, p, cells, cap.opts)
                                     : capacity_density(E, x, rho, p, cap.opts);
    json j;
    j["delta"] = r.delta;
    j["numerator"] = r.numerator;
    j["denominator"] = r.denominator;
    j["mode"] = analytic ? "re-rasterized" : "raster";
    emit_json(g, "delta.json", j);
    return 0;
  }
};

// ---------------------------------------------------------------- fat
struct FatCmd {
  DomainOpts dom;
  double gamma_o = 0.1;
  double rho = 0.25;
  double p = 1.8;
  int k_max = 1;
  std::size_t max_points = 16;
  CapacityOpts cap;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("fat", "uniform p-fatness of the complement at sampled boundary nodes");
    dom.add(c);
    c->add_option("--gamma-o", gamma_o)->capture_default_str();
    c->add_option("--rho", rho, "largest scale")->capture_default_str();
    c->add_option("--p", p)->capture_default_str();
    c->add_option("--kmax", k_max, "dyadic levels below rho")->capture_default_str();
    c->add_option("--max-points", max_points)->capture_default_str();
    cap.add(c);
  }

  int run(const Globals& g) {
    const GridDomain E = dom.load();
    const FatnessReport r = is_uniformly_p_fat(E, gamma_o, rho, p, k_max, max_points, cap.opts);
    json j;
    j["fat"] = r.fat;
    j["gamma_o"] = gamma_o;
    double lo = 1.0;
    json ev = json::array();
    for (const auto& e : r.evidence) {
      lo = std::min(lo, e.ratio);
      ev.push_back(json{{"point", point_json(e.point)}, {"rho", e.scale}, {"delta", e.ratio}});
    }
    j["min_delta"] = r.evidence.empty() ? json(nullptr) : json(lo);
    j["evidence"] = ev;
    emit_json(g, "fat.json", j);
    return 0;
  }
};

// ---------------------------------------------------------------- solve
struct SolveCmd {
  DomainOpts dom;
  double p = 1.8;
  std::string flux = "prototype";
  double C_o = 1.0;
  double C_1 = 1.0;
  double Lambda = 0.0;
  std::string coefficient;
  std::string g_spec = "0";
  std::string initial;
  std::string dt = "auto";
  std::string field = "field.csv";
  SolverControls controls;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("solve", "Cauchy-Dirichlet problem by backward Euler");
    dom.add(c);
    c->add_option("--p", p)->capture_default_str();
    c->add_option("--flux", flux, "prototype | scalar_coefficient | u_modulated")->capture_default_str();
    c->add_option("--C0", C_o)->capture_default_str();
    c->add_option("--C1", C_1)->capture_default_str();
    c->add_option("--Lambda", Lambda)->capture_default_str();
    c->add_option("--coefficient", coefficient, "a(x,t) expression for scalar_coefficient");
    c->add_option("--g", g_spec, "expression or boundary JSON file")->capture_default_str();
    c->add_option("--initial", initial, "initial data expression (default g at t=0)");
    c->add_option("--T", controls.T)->capture_default_str();
    c->add_option("--dt", dt, "auto or a number")->capture_default_str();
    c->add_option("--epsilon", controls.epsilon, "< 0 selects 1e-8 osc/h")->capture_default_str();
    c->add_option("--newton-tol", controls.newton_tol)->capture_default_str();
    c->add_option("--max-newton", controls.max_newton)->capture_default_str();
    c->add_option("--record-stride", controls.record_stride)->capture_default_str();
    c->add_option("--field", field, "field CSV name inside --out")->capture_default_str();
  }

  int run(const Globals& g) {
    FluxSpec spec = make_flux(parse_flux_kind(flux), p, C_o, C_1, Lambda);
    if (!coefficient.empty()) spec.coefficient = to_function(Expression(coefficient));
    if (dt != "auto") {
      try {
        controls.dt = std::stod(dt);
      } catch (const std::exception&) {
        throw InvalidArgument("--dt must be 'auto' or a number");
      }
      if (!(controls.dt > 0.0)) throw InvalidArgument("--dt must be positive");
    }
    const GridDomain E = dom.load();
    const Field u = solve_cauchy_dirichlet(spec, E, load_boundary(g_spec, initial), controls);
    std::ostringstream os;
    write_field_csv(os, u);
    std::string dir = g.out;
    std::string name = field;
    if (dir.size() > 4 && dir.substr(dir.size() - 4) == ".csv") {
      // `--out field.csv` names the file directly.
      const auto slash = dir.find_last_of('/');
      name = slash == std::string::npos ? dir : dir.substr(slash + 1);
      dir = slash == std::string::npos ? "." : dir.substr(0, slash);
    }
    emit(dir.empty() ? "." : dir, name, os.str());
    json j;
    j["field"] = name;
    j["steps"] = u.stats.steps;
    j["newton_iterations"] = u.stats.newton_iterations;
    j["max_residual"] = u.stats.max_residual;
    j["dt"] = u.stats.dt;
    j["epsilon"] = u.stats.epsilon;
    j["slices"] = u.slices();
    std::cout << j.dump(2) << "\n";
    return 0;
  }
};

// ---------------------------------------------------------------- harnack
struct HarnackCmd {
  std::string field;
  std::string domain;
  BenchmarkParams params;
  std::string check = "weak";
  std::string point;
  double rho = 0.0625;
  double s = 0.0;
  double t = 0.0;
  double k = 0.0;
  double c = 0.5;
  double sigma = 0.5;
  double delta = 0.5;
  double p = 1.8;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("harnack", "Harnack-type inequalities on a recorded field");
    cmd->add_option("--field", field, "field CSV from solve")->required();
    cmd->add_option("--domain", domain, "domain whose inside mask applies to the field");
    cmd->add_option("--dim", params.dim)->capture_default_str();
    cmd->add_option("--h", params.h)->capture_default_str();
    cmd->add_option("--half-edge", params.half_edge)->capture_default_str();
    cmd->add_option("--check", check, "weak | l1 | boundary-l1 | gradient")->capture_default_str();
    cmd->add_option("--point", point, "center y or x_o")->required();
    cmd->add_option("--rho", rho)->capture_default_str();
    cmd->add_option("--s", s, "start time")->capture_default_str();
    cmd->add_option("--t", t, "end time (l1, boundary-l1, gradient)")->capture_default_str();
    cmd->add_option("--k", k, "truncation level (boundary-l1, gradient)")->capture_default_str();
    cmd->add_option("--c", c, "waiting-time constant (weak)")->capture_default_str();
    cmd->add_option("--sigma", sigma)->capture_default_str();
    cmd->add_option("--delta", delta)->capture_default_str();
    cmd->add_option("--p", p)->capture_default_str();
  }

  int run(const Globals& g) {
    std::ifstream in(field);
    if (!in) throw InvalidArgument("cannot read field " + field);
    Field u;
    if (!domain.empty()) {
      const GridDomain E = load_domain(domain, params);
      u = read_field_csv(in, &E.inside);
    } else {
      u = read_field_csv(in);
    }
    const Point y = parse_point(point, u.dim());
    HarnackReport r;
    if (check == "weak") {
      r = weak_harnack_ratio(u, y, rho, s, c, p);
    } else if (check == "l1") {
      r = l1_harnack_gap(u, y, rho, s, t, p);
    } else if (check == "boundary-l1") {
      r = boundary_l1_harnack_gap(u, y, rho, s, t, k, p);
    } else if (check == "gradient") {
      const BoundarySuperSolution sup = boundary_supersolution(u, y, rho, s, t, k, p);
      r = gradient_l1_estimate(sup.v, y, rho, sigma, delta, s, t, p);
    } else {
      throw InvalidArgument("unknown check '" + check + "'");
    }
    json j;
    j["check"] = check;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["slack"] = r.slack;
    j["empirical_constant"] = r.empirical_constant;
    j["pass"] = r.pass;
    for (const auto& [key, value] : r.extra) j[key] = value;
    emit_json(g, "harnack.json", j);
    return 0;
  }
};

// ---------------------------------------------------------------- wiener
struct WienerCmd {
  DomainOpts dom;
  std::string point;
  double p = 1.8;
  int scales = 8;
  double rho_top = 0.5;
  double gamma2 = 2.0;
  double c = 0.5;
  double nu = 0.5;
  double omega_o = 1.0;
  double g_osc = 0.0;
  WienerOptions wo;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("wiener", "dyadic densities, oscillation trace and Wiener classification");
    dom.add(cmd);
    cmd->add_option("--point", point, "x,y[,z] (default origin)");
    cmd->add_option("--p", p)->capture_default_str();
    cmd->add_option("--scales", scales, "number of dyadic scales (>= 6)")->capture_default_str();
    cmd->add_option("--rho-top", rho_top)->capture_default_str();
    cmd->add_option("--gamma2", gamma2)->capture_default_str();
    cmd->add_option("--c", c)->capture_default_str();
    cmd->add_option("--nu", nu)->capture_default_str();
    cmd->add_option("--omega-o", omega_o)->capture_default_str();
    cmd->add_option("--g-osc", g_osc, "constant boundary-data oscillation per step")->capture_default_str();
    cmd->add_option("--cells", wo.cells_per_rho, "re-rasterization cells per rho")->capture_default_str();
    cmd->add_option("--cauchy-tol", wo.cauchy_tol)->capture_default_str();
    cmd->add_option("--floor-ratio", wo.floor_ratio)->capture_default_str();
    cmd->add_option("--cap-tol", wo.capacity.rel_tol)->capture_default_str();
  }

  int run(const Globals& g) {
    const GridDomain E = dom.load();
    const int N = E.dim();
    const Point x = point.empty() ? Point(Point::Zero(N)) : parse_point(point, N);
    const ModulusParams mp = make_modulus_params(N, p, gamma2, c, nu);
    wo.gamma2 = gamma2;
    const WienerClassification cl = classify_wiener_point(E, x, p, rho_top, scales, wo);
    const OscillationTrace tr =
        oscillation_iteration(omega_o, cl.delta, std::vector<double>(cl.delta.size(), g_osc), mp, rho_top);

    std::ostringstream csv;
    csv << "j,r_j,delta_j,A_j,omega_j,branch\n";
    for (std::size_t j = 0; j < tr.steps(); ++j)
      csv << j << ',' << csv_number(tr.r[j]) << ',' << csv_number(tr.delta[j]) << ',' << csv_number(tr.A[j])
          << ',' << csv_number(tr.omega[j]) << ',' << branch_name(tr.branch[j]) << '\n';
    csv << tr.steps() << ',' << csv_number(tr.r.back() / 2.0) << ",,," << csv_number(tr.omega.back()) << ",\n";
    if (!g.out.empty()) emit(g.out, "wiener_trace.csv", csv.str());

    const DensityProfile profile = dyadic_profile(rho_top, cl.delta);
    json samples = json::array();
    for (std::size_t k = 1; k < cl.scales.size(); ++k) {
      const double rho = cl.scales[k];
      if (!(rho < 1.0)) continue;
      const ModulusResult m = modulus_bound(omega_o, profile, [&](const Cylinder&) { return g_osc; }, rho, mp, 1.0,
                                            x);
      samples.push_back(json{{"rho", rho}, {"bound", m.bound}, {"r", m.r}, {"r_exceeds_R_o", m.r_exceeds_R_o}});
    }
    json j;
    j["classification"] = label_name(cl.label);
    j["slope"] = cl.slope;
    j["tail"] = cl.tail;
    j["analytic"] = cl.analytic;
    j["delta"] = cl.delta;
    j["partial_sums"] = cl.partial_sums;
    j["product_bound"] = tr.product_bound;
    j["constants"] = json{{"gamma2", gamma2}, {"c", c}, {"nu", nu}, {"alpha", mp.alpha()}, {"gamma", mp.gamma()}};
    j["modulus_samples"] = samples;
    emit_json(g, "wiener.json", j);
    if (g.out.empty()) std::cout << csv.str();
    return 0;
  }
};

// ---------------------------------------------------------------- modulus
struct ModulusCmd {
  int N = 2;
  double p = 1.8;
  double gamma2 = 2.0;
  double c = 0.5;
  double nu = 0.5;
  double omega_o = 1.0;
  double delta = 0.5;
  std::string delta_file;
  double g_osc = 0.0;
  double R_o = 1.0;
  std::vector<double> rhos;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("modulus", "boundary modulus of continuity from a density profile");
    cmd->add_option("--N", N)->capture_default_str();
    cmd->add_option("--p", p)->capture_default_str();
    cmd->add_option("--gamma2", gamma2)->capture_default_str();
    cmd->add_option("--c", c)->capture_default_str();
    cmd->add_option("--nu", nu)->capture_default_str();
    cmd->add_option("--omega-o", omega_o)->capture_default_str();
    cmd->add_option("--delta", delta, "constant density")->capture_default_str();
    cmd->add_option("--delta-file", delta_file, "one density per line at 2^-j, j = 0, 1, ...");
    cmd->add_option("--g-osc", g_osc, "constant data oscillation")->capture_default_str();
    cmd->add_option("--R-o", R_o)->capture_default_str();
    cmd->add_option("--rho", rhos, "scales (default 4^-k, k = 1..6)");
  }

  int run(const Globals& g) {
    const ModulusParams mp = make_modulus_params(N, p, gamma2, c, nu);
    DensityProfile profile;
    bool constant = delta_file.empty();
    if (constant) {
      weight_A(delta, gamma2, p);
      profile = [d = delta](double) { return d; };
    } else {
      std::ifstream in(delta_file);
      if (!in) throw InvalidArgument("cannot read " + delta_file);
      std::vector<double> d;
      for (std::string line; std::getline(in, line);)
        if (!line.empty()) d.push_back(std::stod(line));
      profile = dyadic_profile(1.0, d);
    }
    if (rhos.empty())
      for (int k = 1; k <= 6; ++k) rhos.push_back(std::pow(4.0, -k));
    std::ostringstream csv;
    csv << "rho,bound,decay_term,g_term,r,r_exceeds_R_o\n";
    std::vector<double> bounds;
    for (double rho : rhos) {
      const ModulusResult m = modulus_bound(omega_o, profile, [&](const Cylinder&) { return g_osc; }, rho, mp, R_o,
                                            Point::Zero(N));
      bounds.push_back(m.bound);
      csv << csv_number(rho) << ',' << csv_number(m.bound) << ',' << csv_number(m.decay_term) << ','
          << csv_number(m.g_term) << ',' << csv_number(m.r) << ',' << (m.r_exceeds_R_o ? 1 : 0) << '\n';
    }
    if (!g.out.empty()) emit(g.out, "modulus.csv", csv.str());
    json j;
    j["alpha"] = mp.alpha();
    j["gamma"] = mp.gamma();
    j["lambda_bar"] = mp.lambda_bar();
    j["holder_exponent"] = constant ? json(holder_exponent(delta, mp)) : json(nullptr);
    j["fitted_slope"] = loglog_slope(rhos, bounds);
    emit_json(g, "modulus.json", j);
    if (g.out.empty()) std::cout << csv.str();
    return 0;
  }
};

// ---------------------------------------------------------------- verify
struct VerifyCmd {
  DomainOpts dom;
  ExperimentConfig cfg;
  std::string flux = "prototype";
  std::string point;
  std::string dt = "0.05";

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("verify", "end-to-end oscillation decay against the modulus bound");
    dom.add(cmd);
    cmd->add_option("--p", cfg.p)->capture_default_str();
    cmd->add_option("--flux", flux)->capture_default_str();
    cmd->add_option("--C0", cfg.C_o)->capture_default_str();
    cmd->add_option("--C1", cfg.C_1)->capture_default_str();
    cmd->add_option("--Lambda", cfg.Lambda)->capture_default_str();
    cmd->add_option("--g", cfg.g, "boundary data expression")->capture_default_str();
    cmd->add_option("--initial", cfg.initial);
    cmd->add_option("--T", cfg.solver.T)->capture_default_str();
    cmd->add_option("--dt", dt, "auto or a number")->capture_default_str();
    cmd->add_option("--newton-tol", cfg.solver.newton_tol)->capture_default_str();
    cmd->add_option("--point", point, "feature point (default origin)");
    cmd->add_option("--t-o", cfg.t_o, "< 0: final time")->capture_default_str();
    cmd->add_option("--R-o", cfg.R_o)->capture_default_str();
    cmd->add_option("--scales", cfg.scales)->capture_default_str();
    cmd->add_option("--wiener-scales", cfg.wiener_scales)->capture_default_str();
    cmd->add_option("--gamma2", cfg.constants.gamma2)->capture_default_str();
    cmd->add_option("--c", cfg.constants.c)->capture_default_str();
    cmd->add_option("--nu", cfg.constants.nu)->capture_default_str();
    cmd->add_option("--gamma2-grid", cfg.gamma2_grid)->capture_default_str();
    cmd->add_option("--c-grid", cfg.c_grid)->capture_default_str();
    cmd->add_option("--cells", cfg.wiener.cells_per_rho)->capture_default_str();
    cmd->add_option("--cauchy-tol", cfg.wiener.cauchy_tol)->capture_default_str();
    cmd->add_option("--floor-ratio", cfg.wiener.floor_ratio)->capture_default_str();
    cmd->add_option("--cap-tol", cfg.wiener.capacity.rel_tol)->capture_default_str();
  }

  int run(const Globals& g) {
    cfg.domain = dom.domain;
    cfg.geometry = dom.params;
    const auto& names = benchmark_names();
    if (std::find(names.begin(), names.end(), dom.domain) == names.end()) cfg.raster = dom.load();
    cfg.flux = parse_flux_kind(flux);
    if (dt == "auto") {
      cfg.solver.dt = 0.0;
    } else {
      try {
        cfg.solver.dt = std::stod(dt);
      } catch (const std::exception&) {
        throw InvalidArgument("--dt must be 'auto' or a number");
      }
    }
    if (!point.empty()) cfg.point = parse_point(point, cfg.raster ? cfg.raster->dim() : dom.params.dim);
    cfg.threads = g.threads;
    cfg.seed = g.seed;
    const ExperimentReport r = run_verification(cfg);
    std::ostringstream js;
    write_report_json(js, r);
    if (!g.out.empty()) {
      std::ostringstream csv;
      write_report_csv(csv, r);
      emit(g.out, "report.csv", csv.str());
    }
    emit(g.out, "report.json", js.str());
    for (const auto& f : r.failures)
      if (f.rfind("solve:", 0) == 0) return static_cast<int>(ExitCode::non_convergence);
    return r.pass ? 0 : static_cast<int>(ExitCode::invariant_failure);
  }
};

// ---------------------------------------------------------------- selftest
struct SelftestCmd {
  std::string size = "small";
  bool tamper = false;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("selftest", "seeded property suite over all modules");
    cmd->add_option("--size", size, "small | medium")->capture_default_str();
    cmd->add_flag("--tamper", tamper, "negate the recursion weight (fault injection)");
  }

  int run(const Globals& g) {
    SuiteOptions o;
    o.seed = g.seed;
    if (size == "small")
      o.size = SuiteSize::small;
    else if (size == "medium")
      o.size = SuiteSize::medium;
    else
      throw InvalidArgument("--size must be small or medium");
    o.tamper_recursion = tamper;
    const PropertyLedger ledger = run_property_suite(o);
    std::ostringstream os;
    write_ledger(os, ledger);
    emit(g.out, "selftest.txt", os.str());
    return ledger.all_pass() ? 0 : static_cast<int>(ExitCode::invariant_failure);
  }
};

}  // namespace
}  // namespace plw::cli

int main(int argc, char** argv) {
  using namespace plw::cli;
  CLI::App app{"plw: p-capacities, singular parabolic solves and Wiener-type boundary moduli"};
  // `--h` is the lattice spacing, so help answers to --help only.
  app.set_help_flag("--help", "print this help message and exit");
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON file with option values; subcommand options nest under their name");
  Globals g;
  app.add_option("--out", g.out, "output directory (default: stdout)");
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized suites")->capture_default_str();
  app.require_subcommand(1);
  app.fallthrough();

  CapCmd cap;
  GammaCmd gamma;
  DeltaCmd delta;
  FatCmd fat;
  SolveCmd solve;
  HarnackCmd harnack;
  WienerCmd wiener;
  ModulusCmd modulus;
  VerifyCmd verify;
  SelftestCmd selftest;
  cap.add(app);
  gamma.add(app);
  delta.add(app);
  fat.add(app);
  solve.add(app);
  harnack.add(app);
  wiener.add(app);
  modulus.add(app);
  verify.add(app);
  selftest.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(plw::ExitCode::configuration);
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "cap") return cap.run(g);
    if (name == "gamma-p") return gamma.run(g);
    if (name == "delta") return delta.run(g);
    if (name == "fat") return fat.run(g);
    if (name == "solve") return solve.run(g);
    if (name == "harnack") return harnack.run(g);
    if (name == "wiener") return wiener.run(g);
    if (name == "modulus") return modulus.run(g);
    if (name == "verify") return verify.run(g);
    if (name == "selftest") return selftest.run(g);
  } catch (const plw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(plw::ExitCode::configuration);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
