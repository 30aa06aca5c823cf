#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "plw/geometry.hpp"

namespace plw {

struct CapacityOptions {
  double rel_tol = 1e-10;         // stop on relative energy decrease / Newton decrement
  long max_iterations = 100000;
  double epsilon_factor = 1e-8;   // line-search model smoothing: eps = factor * diam / h
};

// Role of a node in a discrete condenser.
enum class NodeRole : std::uint8_t { zero, one, free };

// The lattice border must consist of `zero` nodes only. `edge_fraction`, when
// given, holds one entry per (node, axis): the forward edge from that node is
// shortened to fraction * h, which places a curved Dirichlet boundary between
// a free node and its fixed neighbour (embedded-boundary differences).
struct Condenser {
  Lattice lattice;
  std::vector<NodeRole> role;
  double p = 2.0;
  std::vector<double> edge_fraction;
};

// cap_p(K, Omega) problem: K is a node set, Omega an open cube.
struct CapacityProblem {
  NodeMask inner;
  Cube window;
  double p = 2.0;
};

struct CapacityResult {
  double value = 0.0;              // discrete p-Dirichlet energy, units length^{N-p}
  Lattice lattice;                 // lattice carrying `potential`
  Eigen::VectorXd potential;       // in [0,1], 1 on K, 0 off the window
  long iterations = 0;
  double residual = 0.0;           // final Newton decrement relative to the energy
};

// Discrete energy  sum_cells h^N (sum_axes |forward difference / h|^2)^{p/2}
// of a full lattice function. Values past the upper lattice border count as 0.
double dirichlet_energy(const Lattice& lattice, const Eigen::VectorXd& phi, double p);

// Signed level function of a set: negative inside, positive outside.
using LevelFunction = std::function<double(const Point&)>;

// Fills condenser.edge_fraction so that every edge between a free and a fixed
// node ends where the matching level function changes sign (`one_level` for
// `one` nodes, `window_level` for `zero` nodes). Cut cells keep the mean of
// their edge fractions as volume share. Fractions are clamped below by
// min_fraction.
void embed_boundary(Condenser& condenser, const LevelFunction& one_level,
                    const LevelFunction& window_level, double min_fraction = 0.05);

CapacityResult minimize_condenser(const Condenser& condenser, const CapacityOptions& options = {});
CapacityResult p_capacity(const CapacityProblem& problem, const CapacityOptions& options = {});

// Same node topology with every length multiplied by `factor`; each node is
// treated as the center of its cell and split into refine^N sub-cells.
NodeMask scale_mask(const NodeMask& mask, double factor, int refine = 1);
CapacityProblem scale_problem(const CapacityProblem& problem, double factor, int refine = 1);

// (value at scale 1, value at scale s); the ratio should be close to s^{N-p}.
std::pair<double, double> capacity_scaling_check(const CapacityProblem& problem, double factor,
                                                 int refine = 1,
                                                 const CapacityOptions& options = {});

// Condenser K in Q = Omega x (t1, t2), given on a uniform slice grid of Q's time interval.
struct ParabolicCondenser {
  Cylinder Q;
  std::vector<NodeMask> slices;
  double p = 2.0;
};

struct ParabolicCapacityResult {
  double value = 0.0;
  std::vector<double> slice_values;
};

// Midpoint rule in time of the slice capacities cap_p(K_tau, Omega).
ParabolicCapacityResult parabolic_capacity(const ParabolicCondenser& condenser,
                                           const CapacityOptions& options = {});

struct DensityResult {
  double delta = 0.0;
  double numerator = 0.0;    // cap_p(K_rho \ E, K_{3rho/2})
  double denominator = 0.0;  // cap_p(K_rho, K_{3rho/2})
};

inline constexpr double kMinCellsPerRadius = 8.0;

// Capacity density of the complement of E at x_o on E's own raster.
DensityResult capacity_density(const GridDomain& E, const Point& x_o, double rho, double p,
                               const CapacityOptions& options = {});

// Same quantity for an analytic set, re-rasterized at h = rho / cells_per_rho
// with x_o on a cell vertex; cells_per_rho must be even.
DensityResult capacity_density(const Indicator& in_E, int dim, const Point& x_o, double rho,
                               double p, int cells_per_rho = 16,
                               const CapacityOptions& options = {});

struct FatnessEvidence {
  Point point;
  double scale = 0.0;
  double ratio = 0.0;
};

struct FatnessReport {
  bool fat = true;
  std::vector<FatnessEvidence> evidence;
};

// Checks delta >= gamma_o at rho_o / 2^k, k = 0..k_max, for boundary nodes of E
// (at most max_points of them, taken with a fixed stride). Points whose
// window leaves the bounding box are skipped.
FatnessReport is_uniformly_p_fat(const GridDomain& E, double gamma_o, double rho_o, double p,
                                 int k_max, std::size_t max_points = 16,
                                 const CapacityOptions& options = {});

struct GeometricDensity {
  bool holds = false;
  double fraction_in_E = 0.0;
};

// |E cap K_rho(x_o)| <= (1 - alpha) |K_rho(x_o)| by cell counting.
GeometricDensity geometric_density(const GridDomain& E, const Point& x_o, double rho,
                                   double alpha);

}  // namespace plw
