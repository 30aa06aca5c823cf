#include "plw/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <ostream>
#include <random>

namespace plw {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i)
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Runs f(i) for i < n on up to `threads` workers; results keep index order.
template <typename R, typename F>
std::vector<R> parallel_map(std::size_t n, int threads, F f) {
  std::vector<R> out(n);
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) out[i] = f(i);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

struct Density {
  double value = 0.0;
  std::string failure;
};

Density density_at(const GridDomain& E, const Point& x, double rho, double p,
                   const WienerOptions& options) {
  try {
    if (E.shape)
      return {capacity_density(E.shape, E.dim(), x, rho, p, options.cells_per_rho, options.capacity).delta, ""};
    return {capacity_density(E, x, rho, p, options.capacity).delta, ""};
  } catch (const Error& e) {
    return {0.0, e.what()};
  }
}

Index nearest_lateral_node(const Field& u, const Point& x) {
  Index best = -1;
  double dist = std::numeric_limits<double>::infinity();
  for (Index k : lateral_boundary(u)) {
    const double d = (u.lattice.position(k) - x).norm();
    if (d < dist - 1e-12) {
      dist = d;
      best = k;
    }
  }
  if (best < 0) throw GeometryError("raster has no lateral boundary");
  return best;
}

std::vector<std::size_t> slices_in(const Field& u, double lo, double hi, double t_o) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < u.slices(); ++s)
    if (u.times[s] >= lo - 1e-12 && u.times[s] <= hi + 1e-12) out.push_back(s);
  const std::size_t o = u.slice_at(t_o);
  if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
  return out;
}

struct Osc {
  double value = 0.0;
  std::size_t nodes = 0;
};

template <typename Pred>
Osc oscillation(const Field& u, const Cube& K, const std::vector<std::size_t>& slices, Pred use) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  Osc o;
  for (Index k = 0; k < u.lattice.size(); ++k) {
    if (!use(k) || !K.contains(u.lattice.position(k))) continue;
    for (std::size_t s : slices) {
      const double v = u.values[s][k];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      ++o.nodes;
    }
  }
  o.value = o.nodes ? hi - lo : 0.0;
  return o;
}

}  // namespace

ExperimentReport run_verification(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  BenchmarkParams geo = config.geometry;
  GridDomain E = config.raster ? *config.raster : benchmark_domain(config.domain, geo);
  const int N = E.dim();
  const double p = config.p;
  rep.domain = config.raster ? E.traits.name : config.domain;
  rep.feature = config.point.size() == 0 ? Point(Point::Zero(N)) : config.point;
  if (rep.feature.size() != N) throw InvalidArgument("probe point dimension differs from the domain");
  if (config.scales < 2) throw InvalidArgument("scale ladder needs at least two scales");
  if (!(config.R_o > 0.0 && config.R_o < 1.0)) throw InvalidArgument("R_o must lie in (0,1)");
  if (config.gamma2_grid.empty() || config.c_grid.empty()) throw InvalidArgument("empty constant grid");
  rep.constants = make_modulus_params(N, p, config.constants.gamma2, config.constants.c,
                                      config.constants.nu);
  for (double g2 : config.gamma2_grid) make_modulus_params(N, p, g2, config.constants.c, config.constants.nu);
  for (double c : config.c_grid) make_modulus_params(N, p, config.constants.gamma2, c, config.constants.nu);

  const FluxSpec spec = make_flux(config.flux, p, config.C_o, config.C_1, config.Lambda);
  const BoundaryData data = boundary_from_expression(config.g, config.initial);

  Field u;
  try {
    u = solve_cauchy_dirichlet(spec, E, data, config.solver);
  } catch (const StepFailure& e) {
    rep.failures.push_back(std::string("solve: ") + e.what());
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
  }
  rep.solve = u.stats;
  const double T = u.times.back();
  rep.t_o = config.t_o < 0.0 ? T : std::min(config.t_o, T);
  rep.probe = u.lattice.position(nearest_lateral_node(u, rep.feature));

  auto in_E = [&](Index k) { return u.is_inside(k); };
  std::vector<std::uint8_t> on_boundary(static_cast<std::size_t>(u.lattice.size()), 0);
  for (Index k : lateral_boundary(u)) on_boundary[static_cast<std::size_t>(k)] = 1;
  for (Index k = 0; k < u.lattice.size(); ++k)
    if (u.is_inside(k) && !u.is_interior(k)) on_boundary[static_cast<std::size_t>(k)] = 1;
  auto on_S = [&](Index k) { return on_boundary[static_cast<std::size_t>(k)] != 0; };

  {
    std::vector<std::size_t> all(u.slices());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
    rep.omega_o = oscillation(u, make_cube(rep.probe, config.R_o), all, in_E).value;
  }
  if (rep.omega_o > 1.0) rep.data_scale = 1.0 / rep.omega_o;
  const double omega_o = std::max(rep.omega_o * rep.data_scale, 1e-300);

  std::vector<double> rhos;
  for (int k = 1; k <= config.scales; ++k) rhos.push_back(config.R_o * std::exp2(-k));

  // Dyadic densities at the feature point, 2^{-k} for k = 0..K.
  int K = config.wiener_scales;
  while (std::exp2(-K) > rhos.back()) ++K;
  std::vector<Density> dens = parallel_map<Density>(
      static_cast<std::size_t>(K + 1), config.threads, [&](std::size_t k) {
        return density_at(E, rep.feature, std::exp2(-static_cast<double>(k)), p, config.wiener);
      });
  std::vector<double> delta;
  for (int k = 0; k <= K; ++k) {
    delta.push_back(dens[static_cast<std::size_t>(k)].value);
    if (!dens[static_cast<std::size_t>(k)].failure.empty())
      rep.failures.push_back("density at 2^-" + std::to_string(k) + ": " + dens[static_cast<std::size_t>(k)].failure +
                             " (taken as 0)");
  }
  const DensityProfile profile = dyadic_profile(1.0, delta);
  {
    std::vector<double> sc;
    std::vector<double> dw;
    for (int k = 1; k <= config.wiener_scales; ++k) {
      sc.push_back(std::exp2(-k));
      dw.push_back(delta[static_cast<std::size_t>(k)]);
    }
    WienerOptions wo = config.wiener;
    wo.gamma2 = rep.constants.gamma2;
    try {
      rep.classification = classify_from_densities(sc, dw, p, wo);
      rep.classification.analytic = static_cast<bool>(E.shape);
    } catch (const Error& e) {
      rep.failures.push_back(std::string("classification: ") + e.what());
    }
  }

  auto g_osc = [&](const Cylinder& Q) {
    const double lo = std::max(0.0, Q.t_lo());
    const double hi = std::min(T, Q.t_hi());
    return oscillation(u, Q.base, slices_in(u, lo, hi, rep.t_o), on_S).value * rep.data_scale;
  };

  struct Candidate {
    std::vector<ScaleRow> rows;
    double ms = 0.0;
    double bs = 0.0;
    bool holds = false;
    bool dominates = false;
  };
  auto evaluate = [&](double gamma2, double c) {
    const ModulusParams mp = make_modulus_params(N, p, gamma2, c, config.constants.nu);
    Candidate cand;
    std::vector<double> ms;
    std::vector<double> bs;
    cand.holds = true;
    for (double rho : rhos) {
      ScaleRow row;
      row.rho = rho;
      row.delta = profile(rho);
      row.A = weight_A(row.delta, gamma2, p);
      const double theta = 0.25 * c * std::pow(omega_o, 2.0 - p) * std::pow(rho, p);
      row.t_lo = std::max(0.0, rep.t_o - 2.0 * theta);
      row.t_hi = std::min(T, rep.t_o + theta);
      const Osc o = oscillation(u, make_cube(rep.probe, rho), slices_in(u, row.t_lo, row.t_hi, rep.t_o), in_E);
      row.measured = o.value * rep.data_scale;
      row.nodes = o.nodes;
      try {
        const ModulusResult mr = modulus_bound(omega_o, profile, g_osc, rho, mp, config.R_o, rep.probe, rep.t_o);
        row.bound = mr.bound;
        row.r_exceeds_R_o = mr.r_exceeds_R_o;
      } catch (const Error& e) {
        row.ok = false;
        row.failure = e.what();
      }
      if (o.nodes == 0) {
        row.ok = false;
        row.failure = "no nodes of E in the cylinder";
      }
      if (row.ok) {
        ms.push_back(row.measured);
        bs.push_back(row.bound);
        if (row.measured > row.bound) cand.holds = false;
      }
      cand.rows.push_back(row);
    }
    std::vector<double> r_ok;
    for (const auto& row : cand.rows)
      if (row.ok) r_ok.push_back(row.rho);
    cand.ms = loglog_slope(r_ok, ms);
    cand.bs = loglog_slope(r_ok, bs);
    // No positive oscillation left to fit: decay is at least as fast as anything.
    cand.dominates = std::isnan(cand.ms) || (!std::isnan(cand.bs) && cand.ms >= cand.bs) || std::isnan(cand.bs);
    if (r_ok.empty()) cand.holds = false;
    return cand;
  };

  Candidate chosen = evaluate(rep.constants.gamma2, rep.constants.c);
  rep.best_gamma2 = rep.constants.gamma2;
  rep.best_c = rep.constants.c;
  if (!(chosen.holds && chosen.dominates)) {
    for (double g2 : config.gamma2_grid) {
      for (double c : config.c_grid) {
        Candidate cand = evaluate(g2, c);
        if (cand.holds && cand.dominates) {
          chosen = std::move(cand);
          rep.best_gamma2 = g2;
          rep.best_c = c;
          goto done;
        }
      }
    }
  }
done:
  rep.rows = std::move(chosen.rows);
  rep.measured_slope = chosen.ms;
  rep.bound_slope = chosen.bs;
  rep.bound_holds = chosen.holds;
  rep.decay_dominates = chosen.dominates;
  rep.pass = chosen.holds && chosen.dominates;
  for (const auto& row : rep.rows)
    if (!row.ok) rep.failures.push_back("rho " + num(row.rho) + ": " + row.failure);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace {

std::string json_num(double v) {
  if (!std::isfinite(v)) return "null";
  return num(v);
}

std::string json_str(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

std::string json_point(const Point& x) {
  std::string out = "[";
  for (int a = 0; a < x.size(); ++a) out += (a ? ", " : "") + json_num(x[a]);
  return out + "]";
}

}  // namespace

void write_report_csv(std::ostream& os, const ExperimentReport& report) {
  os << "rho,delta,A,bound,measured,t_lo,t_hi,nodes,r_exceeds_R_o,ok\n";
  for (const auto& r : report.rows)
    os << num(r.rho) << ',' << num(r.delta) << ',' << num(r.A) << ',' << num(r.bound) << ','
       << num(r.measured) << ',' << num(r.t_lo) << ',' << num(r.t_hi) << ',' << r.nodes << ','
       << (r.r_exceeds_R_o ? 1 : 0) << ',' << (r.ok ? 1 : 0) << '\n';
}

void write_report_json(std::ostream& os, const ExperimentReport& report) {
  const auto& cl = report.classification;
  os << "{\n";
  os << "  \"domain\": " << json_str(report.domain) << ",\n";
  os << "  \"feature\": " << json_point(report.feature) << ",\n";
  os << "  \"probe\": " << json_point(report.probe) << ",\n";
  os << "  \"t_o\": " << json_num(report.t_o) << ",\n";
  os << "  \"omega_o\": " << json_num(report.omega_o) << ",\n";
  os << "  \"data_scale\": " << json_num(report.data_scale) << ",\n";
  os << "  \"measured_slope\": " << json_num(report.measured_slope) << ",\n";
  os << "  \"bound_slope\": " << json_num(report.bound_slope) << ",\n";
  os << "  \"bound_holds\": " << (report.bound_holds ? "true" : "false") << ",\n";
  os << "  \"decay_dominates\": " << (report.decay_dominates ? "true" : "false") << ",\n";
  os << "  \"pass\": " << (report.pass ? "true" : "false") << ",\n";
  os << "  \"acceptance\": \"measured oscillation <= bound at every scale and measured decay slope >= "
        "bound slope, for some (gamma2, c) in the grid\",\n";
  os << "  \"constants\": {\"gamma2\": " << json_num(report.best_gamma2) << ", \"c\": " << json_num(report.best_c)
     << ", \"nu\": " << json_num(report.constants.nu) << ", \"alpha\": "
     << json_num(make_modulus_params(report.constants.N, report.constants.p, report.best_gamma2, report.best_c,
                                     report.constants.nu)
                     .alpha())
     << ", \"gamma\": " << json_num(report.constants.gamma()) << "},\n";
  os << "  \"classification\": {\"label\": " << json_str(label_name(cl.label))
     << ", \"slope\": " << json_num(cl.slope) << ", \"tail\": " << json_num(cl.tail)
     << ", \"analytic\": " << (cl.analytic ? "true" : "false") << "},\n";
  os << "  \"solve\": {\"steps\": " << report.solve.steps << ", \"newton_iterations\": "
     << report.solve.newton_iterations << ", \"max_residual\": " << json_num(report.solve.max_residual)
     << ", \"dt\": " << json_num(report.solve.dt) << "},\n";
  os << "  \"failures\": [";
  for (std::size_t i = 0; i < report.failures.size(); ++i)
    os << (i ? ", " : "") << json_str(report.failures[i]);
  os << "]\n}\n";
}

bool PropertyLedger::all_pass() const { return failures() == 0; }

int PropertyLedger::failures() const {
  int n = 0;
  for (const auto& e : entries)
    if (!e.pass) ++n;
  return n;
}

void write_ledger(std::ostream& os, const PropertyLedger& ledger) {
  for (const auto& e : ledger.entries)
    os << (e.pass ? "PASS " : "FAIL ") << e.module << '.' << e.name << "  " << e.detail << '\n';
  os << (ledger.all_pass() ? "all " : "") << ledger.entries.size() - static_cast<std::size_t>(ledger.failures())
     << '/' << ledger.entries.size() << " checks passed\n";
}

namespace {

struct Suite {
  PropertyLedger ledger;
  std::mt19937_64 rng;

  explicit Suite(std::uint64_t seed) : rng(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }

  template <typename F>
  void check(const std::string& module, const std::string& name, F body) {
    PropertyEntry e{module, name, false, ""};
    try {
      e.detail = body(e.pass);
    } catch (const std::exception& ex) {
      e.pass = false;
      e.detail = std::string("exception: ") + ex.what();
    }
    ledger.entries.push_back(e);
  }
};

CapacityProblem box_problem(int N, double h, double inner, double window, double p) {
  Lattice L;
  L.dim = N;
  L.h = h;
  L.origin = Point::Constant(N, -window - h);
  const Index n = static_cast<Index>(std::llround(2.0 * window / h)) + 3;
  L.shape = {n, N > 1 ? n : 1, N > 2 ? n : 1};
  NodeMask m{L, std::vector<std::uint8_t>(static_cast<std::size_t>(L.size()), 0)};
  for (Index k = 0; k < L.size(); ++k)
    if (L.position(k).cwiseAbs().maxCoeff() <= inner + 1e-12) m.bits[static_cast<std::size_t>(k)] = 1;
  return {m, make_cube(Point::Zero(N), window), p};
}

// Recursion with the weight's sign flipped (fault injection).
OscillationTrace tampered_iteration(double omega_o, const std::vector<double>& delta,
                                    const std::vector<double>& g, const ModulusParams& mp) {
  OscillationTrace tr = oscillation_iteration(omega_o, delta, g, mp);
  double sumA = 0.0;
  double gmax = 0.0;
  for (std::size_t j = 0; j < tr.A.size(); ++j) {
    tr.A[j] = -tr.A[j];
    tr.omega[j + 1] = std::max((1.0 - tr.A[j]) * tr.omega[j], 2.0 * g[j]);
    sumA += tr.A[j];
    gmax = std::max(gmax, g[j]);
  }
  tr.product_bound = omega_o * std::exp(-sumA) + 2.0 * gmax;
  return tr;
}

}  // namespace

PropertyLedger run_property_suite(const SuiteOptions& options) {
  Suite s(options.seed);
  const bool small = options.size == SuiteSize::small;
  const int traces = small ? 200 : 1000;
  const int condensers = small ? 3 : 10;
  char buf[256];

  s.check("capacity", "one_d_oracle", [&](bool& pass) {
    double worst = 0.0;
    for (int i = 0; i < condensers; ++i) {
      const double h = 1.0 / 64.0;
      const double r = h * s.integer(4, 24);
      const double R = h * s.integer(40, 64);
      const double p = s.uniform(1.2, 1.95);
      const double v = p_capacity(box_problem(1, h, r, R, p)).value;
      worst = std::max(worst, std::abs(v / (2.0 * std::pow(R - r, 1.0 - p)) - 1.0));
    }
    pass = worst <= 1e-10;
    std::snprintf(buf, sizeof buf, "max rel err %.3g", worst);
    return std::string(buf);
  });

  s.check("capacity", "monotone_in_set_and_window", [&](bool& pass) {
    int bad = 0;
    for (int i = 0; i < condensers; ++i) {
      const double h = 1.0 / 16.0;
      const double p = s.uniform(1.2, 1.95);
      const double r1 = h * s.integer(2, 4);
      const double r2 = r1 + h * s.integer(1, 2);
      const double R = 1.0;
      const double a = p_capacity(box_problem(2, h, r1, R, p)).value;
      const double b = p_capacity(box_problem(2, h, r2, R, p)).value;
      const double c = p_capacity(box_problem(2, h, r1, R - 4 * h, p)).value;
      if (!(a <= b * (1 + 1e-9)) || !(a <= c * (1 + 1e-9))) ++bad;
    }
    pass = bad == 0;
    return std::to_string(bad) + " violations";
  });

  s.check("capacity", "homogeneity", [&](bool& pass) {
    double worst = 0.0;
    for (int i = 0; i < condensers; ++i) {
      const int N = 1 + i % 3;
      const double h = N == 3 ? 1.0 / 8.0 : 1.0 / 16.0;
      const double p = s.uniform(1.2, 1.95);
      const double r = h * s.integer(1, 3);
      const auto [v1, v2] = capacity_scaling_check(box_problem(N, h, r, 0.5 + h * s.integer(1, 3), p), 2.0);
      worst = std::max(worst, std::abs(v2 / v1 / std::pow(2.0, N - p) - 1.0));
    }
    pass = worst <= 1e-2;
    std::snprintf(buf, sizeof buf, "max rel dev %.3g", worst);
    return std::string(buf);
  });

  s.check("capacity", "density_range_and_monotone", [&](bool& pass) {
    int bad = 0;
    for (int i = 0; i < condensers; ++i) {
      const double a = s.uniform(0.0, 0.4);
      const double rho = s.uniform(0.2, 1.0);
      const double p = s.uniform(1.3, 1.9);
      Point x = Point::Zero(2);
      x[1] = s.uniform(-0.5, 0.5);
      const double big = capacity_density([](const Point& y) { return y[0] > 0.0; }, 2, x, rho, p, 8).delta;
      const double small_E = capacity_density([a](const Point& y) { return y[0] > a; }, 2, x, rho, p, 8).delta;
      if (!(big >= 0.0 && big <= 1.0 && small_E >= 0.0 && small_E <= 1.0)) ++bad;
      if (small_E < big - 1e-9) ++bad;
    }
    pass = bad == 0;
    return std::to_string(bad) + " violations";
  });

  s.check("wiener", options.tamper_recursion ? "recursion_invariants_tampered" : "recursion_invariants",
          [&](bool& pass) {
    int mono = 0;
    int lower = 0;
    int product = 0;
    for (int i = 0; i < traces; ++i) {
      const ModulusParams mp = make_modulus_params(s.integer(1, 3), s.uniform(1.1, 1.95), s.uniform(1.1, 8.0));
      const int m = s.integer(1, 30);
      const double w0 = s.uniform(1e-3, 1.0);
      std::vector<double> d(static_cast<std::size_t>(m));
      std::vector<double> g(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) {
        d[static_cast<std::size_t>(j)] = s.uniform(0.0, 1.0);
        g[static_cast<std::size_t>(j)] = s.integer(0, 3) == 0 ? s.uniform(0.0, 0.5 * w0) : 0.0;
      }
      const OscillationTrace tr = options.tamper_recursion ? tampered_iteration(w0, d, g, mp)
                                                           : oscillation_iteration(w0, d, g, mp);
      const double lb = mp.lambda_bar();
      for (int j = 0; j < m; ++j)
        if (tr.omega[static_cast<std::size_t>(j) + 1] > tr.omega[static_cast<std::size_t>(j)]) {
          ++mono;
          break;
        }
      for (int l = 0; l <= m; ++l)
        if (tr.omega[static_cast<std::size_t>(l)] < std::pow(lb, l) * w0) {
          ++lower;
          break;
        }
      if (tr.omega.back() > tr.product_bound) ++product;
    }
    pass = mono == 0 && lower == 0 && product == 0;
    std::snprintf(buf, sizeof buf, "%d traces: monotone %d, lower bound %d, product bound %d failures", traces,
                  mono, lower, product);
    return std::string(buf);
  });

  s.check("wiener", "constant_density_closed_form", [&](bool& pass) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const ModulusParams mp = make_modulus_params(2, s.uniform(1.1, 1.95), s.uniform(1.1, 8.0));
      const int m = s.integer(1, 40);
      const double w0 = s.uniform(1e-3, 1.0);
      const OscillationTrace tr = oscillation_iteration(w0, std::vector<double>(static_cast<std::size_t>(m), 1.0),
                                                        std::vector<double>(static_cast<std::size_t>(m), 0.0), mp);
      worst = std::max(worst, std::abs(tr.omega.back() - w0 * std::pow(mp.lambda_bar(), m)));
    }
    pass = worst <= 1e-12;
    std::snprintf(buf, sizeof buf, "max abs err %.3g", worst);
    return std::string(buf);
  });

  s.check("wiener", "integral_sum_comparability", [&](bool& pass) {
    int bad = 0;
    double worst_const = 0.0;
    for (int i = 0; i < condensers * 5; ++i) {
      const ModulusParams mp = make_modulus_params(s.integer(1, 3), s.uniform(1.2, 1.9));
      const double c = s.uniform(0.0, 1.0);
      const int m = s.integer(2, 8);
      const auto rep = check_dyadic_comparability([c](double) { return c; }, 1.0, m, mp);
      worst_const = std::max(worst_const, std::abs(rep.integral - std::log(2.0) * rep.sum) /
                                              std::max(1e-300, rep.integral));
      std::vector<double> d;
      for (int j = 0; j <= m; ++j) d.push_back(s.uniform(0.2, 1.0));
      const auto step = check_dyadic_comparability(dyadic_profile(1.0, d), 1.0, m, mp);
      if (step.comparable && !step.integral_within) ++bad;
    }
    pass = bad == 0 && worst_const <= 1e-9;
    std::snprintf(buf, sizeof buf, "constant-delta rel err %.3g, %d violations", worst_const, bad);
    return std::string(buf);
  });

  s.check("wiener", "modulus_zero_density_and_scaling", [&](bool& pass) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const ModulusParams mp = make_modulus_params(2, s.uniform(1.2, 1.9));
      const double w0 = s.uniform(0.1, 1.0);
      const double g = s.uniform(0.0, 0.2);
      const double rho = s.uniform(0.01, 0.4);
      const auto zero = modulus_bound(w0, [](double) { return 0.0; }, [g](const Cylinder&) { return g; }, rho, mp,
                                      0.5, Point::Zero(2));
      worst = std::max(worst, std::abs(zero.bound - (w0 + 2.0 * g)));
      const double d = s.uniform(0.1, 1.0);
      const double kappa = s.uniform(0.1, 1.0);
      const auto a = modulus_bound(w0, [d](double) { return d; }, nullptr, rho, mp, 0.5, Point::Zero(2));
      const auto b = modulus_bound(kappa * w0, [d](double) { return d; }, nullptr, rho, mp, 0.5, Point::Zero(2));
      worst = std::max(worst, std::abs(b.decay_term - kappa * a.decay_term));
    }
    pass = worst <= 1e-14;
    std::snprintf(buf, sizeof buf, "max abs err %.3g", worst);
    return std::string(buf);
  });

  s.check("wiener", "holder_exponent_monotone", [&](bool& pass) {
    const ModulusParams mp = make_modulus_params(2, 1.8);
    double prev = holder_exponent(0.0, mp);
    bool ok = prev == 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double b = holder_exponent(i / 20.0, mp);
      ok = ok && b > prev;
      prev = b;
    }
    pass = ok;
    return std::string(ok ? "increasing, zero at gamma_o = 0" : "not monotone");
  });

  s.check("pde", "constant_data_exact", [&](bool& pass) {
    double worst = 0.0;
    for (int N : {1, 2}) {
      const double c = s.uniform(-1.0, 1.0);
      GridDomain E = rasterize(make_cube(Point::Zero(N), 1.0), 1.0 / 16.0, [](const Point&) { return true; });
      SolverControls sc;
      sc.T = 0.1;
      sc.dt = 0.02;
      const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E,
                                             boundary_from_expression(num(c)), sc);
      for (const auto& v : u.values) worst = std::max(worst, (v.array() - c).abs().maxCoeff());
    }
    pass = worst <= 1e-12;
    std::snprintf(buf, sizeof buf, "max abs err %.3g", worst);
    return std::string(buf);
  });

  s.check("pde", "comparison", [&](bool& pass) {
    double worst = 0.0;
    for (int i = 0; i < (small ? 2 : 5); ++i) {
      GridDomain E = rasterize(make_cube(Point::Zero(1), 1.0), 1.0 / 32.0, [](const Point&) { return true; });
      const double a = s.uniform(0.5, 2.0);
      const double shift = s.uniform(0.0, 0.3);
      SolverControls sc;
      sc.T = 0.2;
      sc.dt = 0.01;
      const std::string upper = num(shift) + "+" + num(a) + "*sin(pi*x)^2";
      const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.7), E,
                                             boundary_from_expression(upper), sc);
      const Field v = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.7), E,
                                             boundary_from_expression(num(0.5 * a) + "*sin(pi*x)^2"), sc);
      worst = std::max(worst, check_comparison(u, v).max_violation);
    }
    pass = worst <= 1e-8;
    std::snprintf(buf, sizeof buf, "max violation %.3g", worst);
    return std::string(buf);
  });

  return s.ledger;
}

}  // namespace plw
