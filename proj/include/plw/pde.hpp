#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "plw/expression.hpp"
#include "plw/geometry.hpp"

namespace plw {

enum class FluxKind { prototype, scalar_coefficient, u_modulated };

using SpaceTimeFunction = std::function<double(const Point&, double)>;

// A(x,t,u,xi) = k(x,t,u) (|xi|^2 + eps^2)^{(p-2)/2} xi with
//   prototype:           k = 1
//   scalar_coefficient:  k = a(x,t), required to stay in [C_o, C_1]
//   u_modulated:         k = m(u) = (C_o+C_1)/2 + (C_1-C_o)/2 sin(kappa u),
//                        kappa chosen so that m is Lambda-Lipschitz.
struct FluxSpec {
  FluxKind kind = FluxKind::prototype;
  double p = 1.8;
  double C_o = 1.0;
  double C_1 = 1.0;
  double Lambda = 0.0;
  double epsilon = 0.0;
  SpaceTimeFunction coefficient;

  double modulation(double u) const;
  double modulation_derivative(double u) const;
  // k(x,t,u); throws InvalidArgument when a(x,t) leaves [C_o, C_1].
  double factor(const Point& x, double t, double u) const;
};

FluxSpec make_flux(FluxKind kind, double p, double C_o = 1.0, double C_1 = 1.0,
                   double Lambda = 0.0);
FluxKind parse_flux_kind(const std::string& name);

Point flux(const FluxSpec& spec, const Point& x, double t, double u, const Point& xi);

struct BoundaryData {
  SpaceTimeFunction g;
  SpaceTimeFunction initial;              // u(., 0) on E; g(., 0) when empty
  std::function<double(double)> modulus;  // omega_g, optional
};

SpaceTimeFunction to_function(const Expression& e);
BoundaryData boundary_from_expression(const std::string& g, const std::string& initial = "");

struct SolveStats {
  long steps = 0;
  long newton_iterations = 0;
  double max_residual = 0.0;
  double dt = 0.0;
  double epsilon = 0.0;
};

// Values on every node of the lattice at the recorded times. Nodes outside E
// (and nodes on the lattice border) carry the Dirichlet data.
struct Field {
  Lattice lattice;
  std::vector<std::uint8_t> inside;
  std::vector<double> times;
  std::vector<Eigen::VectorXd> values;
  SolveStats stats;

  int dim() const { return lattice.dim; }
  std::size_t slices() const { return times.size(); }
  bool is_inside(Index k) const { return inside[static_cast<std::size_t>(k)] != 0; }
  // Unknown of the solver: inside E and off the lattice border.
  bool is_interior(Index k) const;
  std::size_t slice_at(double t) const;  // nearest recorded time
};

struct SolverControls {
  double T = 1.0;
  double dt = 0.0;             // 0 selects h^p osc^{2-p} / 4
  double newton_tol = 1e-8;    // residual max norm
  int max_newton = 80;
  double min_damping = 1e-8;
  double epsilon = -1.0;       // < 0 selects 1e-8 osc / h
  int record_stride = 1;       // keep every n-th step (the last one always)
  bool verification = false;   // must be set for `source` to be accepted
  SpaceTimeFunction source;
};

// Backward Euler in time; each step solves the nodal system with damped
// Newton. Throws StepFailure on Newton breakdown, ResolutionError when the
// raster has no unknowns.
Field solve_cauchy_dirichlet(const FluxSpec& spec, const GridDomain& domain,
                             const BoundaryData& data, const SolverControls& controls);

enum class Sign { plus, minus };

// (u-k)_+ or (u-k)_- at every node and time.
Field truncate(const Field& u, double k, Sign sign);

// Truncation of u restricted to the times of Q and set to zero off E. The
// level must dominate the data on the lateral boundary inside Q
// (k >= sup g for plus, k <= inf g for minus), else InvalidLevel.
Field zero_extend(const Field& u, double k, Sign sign, const Cylinder& Q);

// Lateral boundary of the raster: nodes outside E with an axis neighbour in E.
std::vector<Index> lateral_boundary(const Field& u);

struct ComparisonReport {
  double max_violation = 0.0;  // max (v - u) over interior nodes, t > 0
  double boundary_margin = 0.0;  // min (u - v) on the parabolic boundary
  double tolerance = 0.0;
  bool pass = false;
};

// Requires v <= u on the discrete parabolic boundary (InvalidArgument otherwise).
ComparisonReport check_comparison(const Field& u, const Field& v, double newton_tol = 1e-8);

void write_field_csv(std::ostream& os, const Field& u);
// The inside mask is not part of the CSV; nodes default to inside unless a
// mask is given.
Field read_field_csv(std::istream& is, const std::vector<std::uint8_t>* inside = nullptr);

}  // namespace plw
