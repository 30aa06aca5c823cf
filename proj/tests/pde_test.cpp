#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "plw/pde.hpp"

using namespace plw;

namespace {

GridDomain interval(double h) {
  return rasterize(make_cube(Point::Zero(1), 1.0 + h / 2), h, [](const Point&) { return true; });
}

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

double integral(const Field& u, std::size_t j) {
  double s = 0.0;
  for (Index k = 0; k < u.lattice.size(); ++k)
    if (u.is_inside(k)) s += u.values[j][k];
  return s * u.lattice.cell_volume();
}

}  // namespace

TEST_CASE("structure conditions of the flux families") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double p = 1.7;
  const double C_o = 0.5;
  const double C_1 = 2.0;
  FluxSpec proto = make_flux(FluxKind::prototype, p);
  FluxSpec coef = make_flux(FluxKind::scalar_coefficient, p, C_o, C_1);
  coef.coefficient = [=](const Point& x, double t) { return 1.25 + 0.75 * std::sin(3 * x[0] + t); };
  FluxSpec mod = make_flux(FluxKind::u_modulated, p, C_o, C_1, 4.0);

  int bad = 0;
  for (int i = 0; i < 100000; ++i) {
    const Point x = pt(U(rng), U(rng));
    const double t = U(rng) + 1.0;
    const double u = 3.0 * U(rng);
    const Point a = pt(U(rng), U(rng)) * std::exp(4.0 * U(rng));
    const Point b = pt(U(rng), U(rng)) * std::exp(4.0 * U(rng));
    for (const FluxSpec* s : {&proto, &coef, &mod}) {
      const double lo = s == &proto ? 1.0 : C_o;
      const double hi = s == &proto ? 1.0 : C_1;
      const Point A = flux(*s, x, t, u, a);
      const double n = a.norm();
      if (A.dot(a) < lo * std::pow(n, p) * (1 - 1e-12)) ++bad;
      if (A.norm() > hi * std::pow(n, p - 1) * (1 + 1e-12)) ++bad;
      const double mono = (A - flux(*s, x, t, u, b)).dot(a - b);
      if (mono < -1e-12 * (1 + A.norm() * (a - b).norm())) ++bad;
    }
    if (std::abs(mod.modulation_derivative(u)) > 4.0 + 1e-12) ++bad;
  }
  CHECK(bad == 0);

  CHECK(flux(proto, pt(0, 0), 0, 0, pt(0, 0)).norm() == 0.0);
  FluxSpec off = coef;
  off.coefficient = [](const Point&, double) { return 3.0; };
  CHECK_THROWS_AS(off.factor(pt(0, 0), 0, 0), InvalidArgument);
  CHECK_THROWS_AS(make_flux(FluxKind::prototype, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_flux(FluxKind::scalar_coefficient, 1.5, 2.0, 1.0), InvalidArgument);
  CHECK(parse_flux_kind("u_modulated") == FluxKind::u_modulated);
  CHECK_THROWS_AS(parse_flux_kind("linear"), InvalidArgument);
}

TEST_CASE("constant data stay constant") {
  const GridDomain E = benchmark_domain("square_with_corner", {2, 1.0 / 16, 1.0});
  BoundaryData d;
  d.g = [](const Point&, double) { return 0.7; };
  SolverControls c;
  c.T = 0.1;
  for (FluxKind kind : {FluxKind::prototype, FluxKind::u_modulated}) {
    const Field u = solve_cauchy_dirichlet(make_flux(kind, 1.8, 1.0, 2.0, 1.0), E, d, c);
    double err = 0.0;
    for (const auto& v : u.values) err = std::max(err, (v.array() - 0.7).abs().maxCoeff());
    CHECK(err <= 1e-12);
    CHECK(u.times.front() == 0.0);
    CHECK(u.times.back() == doctest::Approx(0.1));
  }
}

TEST_CASE("steady affine limit in one dimension") {
  const double h = 1.0 / 32;
  BoundaryData d;
  d.g = [](const Point& x, double) { return x[0] > 0 ? 1.0 : 0.0; };
  SolverControls c;
  c.T = 20;
  c.dt = 0.05;
  c.record_stride = 1000000;
  const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), interval(h), d, c);
  REQUIRE(u.slices() == 2);
  double err = 0.0;
  for (Index k = 0; k < u.lattice.size(); ++k)
    err = std::max(err, std::abs(u.values.back()[k] - (u.lattice.position(k)[0] + 1) / 2));
  CHECK(err <= 1e-4);
}

TEST_CASE("discrete maximum principle and decay of the integral") {
  const GridDomain E = benchmark_domain("square_with_corner", {2, 1.0 / 16, 1.0});
  SolverControls c;
  c.T = 0.05;
  c.dt = 0.005;

  BoundaryData d = boundary_from_expression("sin(3*x+y) + 0.5*t", "0.3*cos(5*x*y)");
  const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.6), E, d, c);
  double lo = 1e300;
  double hi = -1e300;
  for (std::size_t j = 0; j < u.slices(); ++j)
    for (Index k = 0; k < u.lattice.size(); ++k)
      if (j == 0 || !u.is_interior(k)) {
        lo = std::min(lo, u.values[j][k]);
        hi = std::max(hi, u.values[j][k]);
      }
  for (const auto& v : u.values) {
    CHECK(v.minCoeff() >= lo - 1e-8);
    CHECK(v.maxCoeff() <= hi + 1e-8);
  }

  BoundaryData z = boundary_from_expression("0", "max(0, 1 - 4*(x^2+y^2))");
  const Field w = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.6), E, z, c);
  for (std::size_t j = 1; j < w.slices(); ++j) CHECK(integral(w, j) <= integral(w, j - 1) + 1e-12);
  CHECK(integral(w, w.slices() - 1) < integral(w, 0));
}

TEST_CASE("translated data give translated solutions") {
  const GridDomain E = benchmark_domain("half_space", {2, 1.0 / 16, 1.0});
  SolverControls c;
  c.T = 0.02;
  c.dt = 0.002;
  const BoundaryData d = boundary_from_expression("x*y + t");
  const BoundaryData e = boundary_from_expression("x*y + t - 0.25");
  const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, d, c);
  const Field v = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, e, c);
  const ComparisonReport r = check_comparison(u, v);
  CHECK(r.pass);
  CHECK(r.boundary_margin == doctest::Approx(0.25));
  CHECK(r.max_violation == doctest::Approx(-0.25).epsilon(1e-6));
  CHECK_THROWS_AS(check_comparison(v, u), InvalidArgument);
}

TEST_CASE("regularization does not move the solution") {
  const GridDomain E = benchmark_domain("square_with_corner", {2, 1.0 / 16, 1.0});
  const BoundaryData d = boundary_from_expression("(x^2+y^2)/2");
  SolverControls c;
  c.T = 0.1;
  c.dt = 0.01;
  const Field base = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, d, c);
  double prev = 0.0;
  for (double factor : {10.0, 100.0}) {
    SolverControls f = c;
    f.epsilon = base.stats.epsilon / factor;
    const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, d, f);
    const double diff = (u.values.back() - base.values.back()).cwiseAbs().maxCoeff();
    CAPTURE(factor);
    CHECK(diff <= 1e-6);
    prev = std::max(prev, diff);
  }
  CHECK(base.stats.epsilon == doctest::Approx(1e-8 * 1.0 / (1.0 / 16)));
}

TEST_CASE("source terms need the verification flag") {
  const GridDomain E = interval(1.0 / 8);
  BoundaryData d;
  d.g = [](const Point&, double) { return 0.0; };
  SolverControls c;
  c.T = 0.1;
  c.source = [](const Point&, double) { return 1.0; };
  CHECK_THROWS_AS(solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, d, c), InvalidArgument);
  c.verification = true;
  CHECK_NOTHROW(solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, d, c));
}

TEST_CASE("solver errors") {
  const GridDomain none = rasterize(make_cube(Point::Zero(2), 1.0), 0.25, [](const Point&) { return false; });
  const BoundaryData d = boundary_from_expression("x");
  SolverControls c;
  c.T = 0.1;
  CHECK_THROWS_AS(solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), none, d, c), ResolutionError);
  c.T = 0.0;
  CHECK_THROWS_AS(solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), interval(0.125), d, c),
                  InvalidArgument);

  SolverControls one;
  one.T = 0.1;
  one.dt = 0.1;
  one.max_newton = 1;
  const BoundaryData rough = boundary_from_expression("0", "sin(20*x)");
  CHECK_THROWS_AS(solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.5), interval(1.0 / 32), rough, one),
                  StepFailure);
}

TEST_CASE("truncations and zero extension") {
  const GridDomain E = benchmark_domain("half_space", {2, 1.0 / 16, 1.0});
  SolverControls c;
  c.T = 0.02;
  c.dt = 0.01;
  const BoundaryData d = boundary_from_expression("0.2*y", "0.5 + 0.2*y");
  const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E, d, c);

  const Field plus = truncate(u, 0.3, Sign::plus);
  const Field minus = truncate(u, 0.3, Sign::minus);
  for (std::size_t j = 0; j < u.slices(); ++j)
    for (Index k = 0; k < u.lattice.size(); ++k) {
      CHECK(plus.values[j][k] >= 0.0);
      CHECK(minus.values[j][k] >= 0.0);
      CHECK(plus.values[j][k] - minus.values[j][k] == doctest::Approx(u.values[j][k] - 0.3));
    }

  // lateral boundary: the column x = -h/2 next to E
  const auto sigma = lateral_boundary(u);
  CHECK(sigma.size() == 32);
  for (Index k : sigma) CHECK(u.lattice.position(k)[0] == doctest::Approx(-1.0 / 32));

  const Cylinder Q = make_cylinder(make_cube(Point::Zero(2), 0.5), 0.02, 2.0, 1.0, CylinderKind::centered, 1.8);
  // g <= 0.1 on sigma inside Q
  const Field ext = zero_extend(u, 0.1, Sign::plus, Q);
  for (std::size_t j = 0; j < ext.slices(); ++j)
    for (Index k = 0; k < u.lattice.size(); ++k)
      if (!u.is_inside(k)) CHECK(ext.values[j][k] == 0.0);
  CHECK_THROWS_AS(zero_extend(u, 0.0, Sign::plus, Q), InvalidLevel);
  CHECK_NOTHROW(zero_extend(u, -0.1, Sign::minus, Q));
  CHECK_THROWS_AS(zero_extend(u, 0.0, Sign::minus, Q), InvalidLevel);
}

TEST_CASE("field CSV round trip") {
  const GridDomain E = benchmark_domain("square_with_corner", {2, 1.0 / 8, 1.0});
  SolverControls c;
  c.T = 0.02;
  c.dt = 0.01;
  const Field u = solve_cauchy_dirichlet(make_flux(FluxKind::prototype, 1.8), E,
                                         boundary_from_expression("x - y^2 + t"), c);
  std::stringstream ss;
  write_field_csv(ss, u);
  const std::string text = ss.str();
  CHECK(text.rfind("t,x,y,u\n", 0) == 0);
  const Field v = read_field_csv(ss, &u.inside);
  CHECK(v.lattice.h == doctest::Approx(u.lattice.h));
  CHECK(v.lattice.shape == u.lattice.shape);
  CHECK(v.times == u.times);
  CHECK(v.inside == u.inside);
  for (std::size_t j = 0; j < u.slices(); ++j)
    CHECK((v.values[j] - u.values[j]).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(v.slice_at(0.012) == 1);

  std::stringstream bad("t,x,u\n0,0,1\n0,0.5\n");
  CHECK_THROWS_AS(read_field_csv(bad), InvalidArgument);
}
