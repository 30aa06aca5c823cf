#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plw/errors.hpp"

namespace plw {

inline constexpr int kMaxDim = 3;

template <typename Scalar>
using PointT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Point = PointT<double>;

using Index = Eigen::Index;
using MultiIndex = std::array<Index, kMaxDim>;

// Axis-parallel cube K_rho(center), edge 2 * half_edge.
template <typename Scalar>
struct CubeT {
  PointT<Scalar> center;
  Scalar half_edge{};

  int dim() const { return static_cast<int>(center.size()); }
  Scalar lo(int axis) const { return center[axis] - half_edge; }
  Scalar hi(int axis) const { return center[axis] + half_edge; }
  Scalar edge() const { return Scalar(2) * half_edge; }
  Scalar volume() const { return std::pow(edge(), Scalar(dim())); }

  bool contains(const PointT<Scalar>& x) const {
    return ((x - center).cwiseAbs().array() <= half_edge).all();
  }
  bool contains_open(const PointT<Scalar>& x) const {
    return ((x - center).cwiseAbs().array() < half_edge).all();
  }
  bool contains(const CubeT& other) const {
    return ((other.center - center).cwiseAbs().array() + other.half_edge <= half_edge).all();
  }
  // K_{a rho}(y) for the same center y.
  CubeT dilated(Scalar factor) const { return CubeT{center, half_edge * factor}; }
};

using Cube = CubeT<double>;

Cube make_cube(const Point& center, double half_edge);

enum class CylinderKind { forward, backward, centered };

// K_rho(y) x (s - theta1 rho^p, s + theta2 rho^p].
template <typename Scalar>
struct CylinderT {
  CubeT<Scalar> base;
  Scalar t_ref{};
  Scalar theta1{};
  Scalar theta2{};
  CylinderKind kind = CylinderKind::forward;
  Scalar p{2};

  Scalar scale() const { return std::pow(base.half_edge, p); }
  Scalar t_lo() const { return t_ref - theta1 * scale(); }
  Scalar t_hi() const { return t_ref + theta2 * scale(); }
  Scalar duration() const { return (theta1 + theta2) * scale(); }

  bool contains(const PointT<Scalar>& x, Scalar t) const {
    return base.contains(x) && t >= t_lo() && t <= t_hi();
  }
  bool contains(const CylinderT& other) const {
    return base.contains(other.base) && other.t_lo() >= t_lo() && other.t_hi() <= t_hi();
  }
};

using Cylinder = CylinderT<double>;

Cylinder make_cylinder(const Cube& base, double s, double theta1, double theta2,
                       CylinderKind kind, double p);

// The intrinsic family Q~_j, j = 1..omega.size(), built from omega_{j-1}:
//   K_{2 r_j}(x_o) x [t_o - (c/4) w^{2-p} 2 (2 r_j)^p, t_o + (c/4) w^{2-p} (2 r_j)^p],
// with r_j = R_o / 2^j. Each member is contained in its predecessor.
std::vector<Cylinder> nested_cylinders(const Point& x_o, double t_o, double R_o,
                                       std::span<const double> omega, double c, double p);

// Uniform node lattice: node i sits at origin + i * h.
struct Lattice {
  int dim = 1;
  double h = 1.0;
  Point origin;
  MultiIndex shape{1, 1, 1};

  Index size() const { return shape[0] * shape[1] * shape[2]; }
  Index flat(const MultiIndex& i) const { return i[0] + shape[0] * (i[1] + shape[1] * i[2]); }
  MultiIndex unflat(Index k) const {
    return {k % shape[0], (k / shape[0]) % shape[1], k / (shape[0] * shape[1])};
  }
  bool in_range(const MultiIndex& i) const {
    for (int a = 0; a < kMaxDim; ++a)
      if (i[a] < 0 || i[a] >= shape[a]) return false;
    return true;
  }
  Point position(const MultiIndex& i) const {
    Point x(dim);
    for (int a = 0; a < dim; ++a) x[a] = origin[a] + static_cast<double>(i[a]) * h;
    return x;
  }
  Point position(Index k) const { return position(unflat(k)); }
  double cell_volume() const { return std::pow(h, dim); }

  // Index bounds [first, last] per axis of the (unbounded) lattice frame whose
  // positions lie in the closed (or open) cube. Empty axes give first > last.
  std::pair<MultiIndex, MultiIndex> index_box(const Cube& cube, bool open) const;
};

// A set of lattice nodes stored as a mask over a lattice.
struct NodeMask {
  Lattice lattice;
  std::vector<std::uint8_t> bits;

  Index count() const;
  bool empty() const { return count() == 0; }
};

using Indicator = std::function<bool(const Point&)>;

struct DomainTraits {
  std::string name = "custom";
  bool complement_fat = false;
  bool positive_density = false;
};

// Rasterized open set E. Nodes are the centers of the cells that tile bbox,
// and a node is in E iff the analytic indicator holds at it.
struct GridDomain {
  Lattice lattice;
  Cube bbox;
  std::vector<std::uint8_t> inside;
  DomainTraits traits;
  Indicator shape;  // empty when the domain was read from a raster

  int dim() const { return lattice.dim; }
  double h() const { return lattice.h; }
  bool is_inside(Index k) const { return inside[static_cast<std::size_t>(k)] != 0; }
  Index count_inside() const;
};

Lattice cell_lattice(const Cube& bbox, double h);
GridDomain rasterize(const Cube& bbox, double h, const Indicator& in_E, DomainTraits traits = {});

// Multiplies all geometry by `factor` (a power of two) and splits every cell
// into refine^N sub-cells carrying the parent's flag.
GridDomain scale_domain(const GridDomain& domain, double factor, int refine = 1);

struct BenchmarkParams {
  int dim = 2;
  double h = 1.0 / 32.0;
  double half_edge = 1.0;
  double cusp_exponent = 1.0;   // power_cusp: |x'| <= x_1^a
  double cusp_decay = 1.0;      // exponential_cusp: |x'| <= exp(-k / x_1)
  double slit_width = -1.0;     // slit half-thickness, defaults to 0.75 h
};

const std::vector<std::string>& benchmark_names();
// Analytic indicator of E for a named benchmark, feature point at the origin.
Indicator benchmark_shape(const std::string& name, const BenchmarkParams& params);
DomainTraits benchmark_traits(const std::string& name, const BenchmarkParams& params);
GridDomain benchmark_domain(const std::string& name, const BenchmarkParams& params);

// Nodes of E's lattice in the closed cube K that are not in E.
NodeMask rasterize_cube_difference(const Cube& K, const GridDomain& E);

// Lattice nodes adjacent (along an axis) to both E and its complement.
std::vector<Index> boundary_nodes(const GridDomain& E);

}  // namespace plw
