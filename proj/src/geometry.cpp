#include "plw/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace plw {

namespace {

constexpr double kSnap = 1e-9;

bool is_power_of_two(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return false;
  int e = 0;
  return std::frexp(s, &e) == 0.5;
}

}  // namespace

Cube make_cube(const Point& center, double half_edge) {
  if (center.size() < 1 || center.size() > kMaxDim)
    throw InvalidArgument("cube dimension must be 1, 2 or 3");
  if (!(half_edge > 0.0) || !std::isfinite(half_edge))
    throw InvalidArgument("cube half edge must be positive");
  return Cube{center, half_edge};
}

Cylinder make_cylinder(const Cube& base, double s, double theta1, double theta2,
                       CylinderKind kind, double p) {
  if (!(base.half_edge > 0.0)) throw InvalidArgument("cylinder base must have positive size");
  if (!(p > 1.0)) throw InvalidArgument("cylinder exponent p must exceed 1");
  if (theta1 < 0.0 || theta2 < 0.0) throw InvalidArgument("time coefficients must be nonnegative");
  switch (kind) {
    case CylinderKind::forward:
      if (theta1 != 0.0 || !(theta2 > 0.0))
        throw InvalidArgument("forward cylinder needs theta1 = 0 and theta2 > 0");
      break;
    case CylinderKind::backward:
      if (theta2 != 0.0 || !(theta1 > 0.0))
        throw InvalidArgument("backward cylinder needs theta2 = 0 and theta1 > 0");
      break;
    case CylinderKind::centered:
      if (!(theta1 > 0.0) || !(theta2 > 0.0))
        throw InvalidArgument("centered cylinder needs theta1, theta2 > 0");
      break;
  }
  return Cylinder{base, s, theta1, theta2, kind, p};
}

std::vector<Cylinder> nested_cylinders(const Point& x_o, double t_o, double R_o,
                                       std::span<const double> omega, double c, double p) {
  if (!(R_o > 0.0)) throw InvalidArgument("R_o must be positive");
  if (!(c > 0.0)) throw InvalidArgument("intrinsic constant c must be positive");
  for (std::size_t j = 0; j < omega.size(); ++j) {
    if (!(omega[j] > 0.0)) throw InvalidArgument("oscillation values must be positive");
    if (j > 0 && omega[j] > omega[j - 1])
      throw InvalidArgument("oscillation sequence must be nonincreasing");
  }
  std::vector<Cylinder> out;
  out.reserve(omega.size());
  double r = R_o;
  for (double w : omega) {
    r *= 0.5;
    const double theta = 0.25 * c * std::pow(w, 2.0 - p);
    out.push_back(make_cylinder(make_cube(x_o, 2.0 * r), t_o, 2.0 * theta, theta,
                                CylinderKind::centered, p));
  }
  return out;
}

std::pair<MultiIndex, MultiIndex> Lattice::index_box(const Cube& cube, bool open) const {
  MultiIndex first{0, 0, 0};
  MultiIndex last{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    const double lo = (cube.lo(a) - origin[a]) / h;
    const double hi = (cube.hi(a) - origin[a]) / h;
    if (open) {
      first[a] = static_cast<Index>(std::floor(lo + kSnap)) + 1;
      last[a] = static_cast<Index>(std::ceil(hi - kSnap)) - 1;
    } else {
      first[a] = static_cast<Index>(std::ceil(lo - kSnap));
      last[a] = static_cast<Index>(std::floor(hi + kSnap));
    }
  }
  return {first, last};
}

Index NodeMask::count() const {
  return std::accumulate(bits.begin(), bits.end(), Index{0},
                         [](Index acc, std::uint8_t b) { return acc + (b ? 1 : 0); });
}

Index GridDomain::count_inside() const {
  return std::accumulate(inside.begin(), inside.end(), Index{0},
                         [](Index acc, std::uint8_t b) { return acc + (b ? 1 : 0); });
}

Lattice cell_lattice(const Cube& bbox, double h) {
  if (!(h > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  const double cells = bbox.edge() / h;
  const auto n = static_cast<Index>(std::llround(cells));
  if (n < 1 || std::abs(cells - static_cast<double>(n)) > 1e-9 * std::max(1.0, cells))
    throw InvalidArgument("bounding box edge must be an integer multiple of h");
  Lattice lat;
  lat.dim = bbox.dim();
  lat.h = h;
  lat.origin = bbox.center.array() - bbox.half_edge + 0.5 * h;
  for (int a = 0; a < lat.dim; ++a) lat.shape[a] = n;
  return lat;
}

GridDomain rasterize(const Cube& bbox, double h, const Indicator& in_E, DomainTraits traits) {
  GridDomain d;
  d.lattice = cell_lattice(bbox, h);
  d.bbox = bbox;
  d.traits = std::move(traits);
  d.shape = in_E;
  d.inside.resize(static_cast<std::size_t>(d.lattice.size()));
  for (Index k = 0; k < d.lattice.size(); ++k)
    d.inside[static_cast<std::size_t>(k)] = in_E(d.lattice.position(k)) ? 1 : 0;
  return d;
}

GridDomain scale_domain(const GridDomain& domain, double factor, int refine) {
  if (!is_power_of_two(factor))
    throw InvalidArgument("scale factor must be a power of two to stay on a commensurate lattice");
  if (refine < 1 || !is_power_of_two(static_cast<double>(refine)))
    throw InvalidArgument("refinement factor must be a positive power of two");
  GridDomain out;
  out.bbox = Cube{domain.bbox.center * factor, domain.bbox.half_edge * factor};
  out.lattice = cell_lattice(out.bbox, domain.h() * factor / refine);
  out.traits = domain.traits;
  if (domain.shape) {
    out.shape = [inner = domain.shape, factor](const Point& x) { return inner(x / factor); };
  }
  out.inside.resize(static_cast<std::size_t>(out.lattice.size()));
  for (Index k = 0; k < out.lattice.size(); ++k) {
    MultiIndex i = out.lattice.unflat(k);
    for (int a = 0; a < out.lattice.dim; ++a) i[a] /= refine;
    out.inside[static_cast<std::size_t>(k)] = domain.inside[static_cast<std::size_t>(domain.lattice.flat(i))];
  }
  return out;
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names{"full_cube", "half_space",  "square_with_corner",
                                              "slit",      "power_cusp",  "exponential_cusp",
                                              "checker_fat"};
  return names;
}

namespace {

double transverse_norm(const Point& x) {
  return x.size() > 1 ? x.tail(x.size() - 1).norm() : 0.0;
}

}  // namespace

Indicator benchmark_shape(const std::string& name, const BenchmarkParams& params) {
  const int dim = params.dim;
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("benchmark dimension must be 1, 2 or 3");
  if (name == "full_cube") return [](const Point&) { return true; };
  if (name == "half_space") return [](const Point& x) { return x[0] > 0.0; };
  if (name == "square_with_corner")
    return [](const Point& x) { return (x.array() > 0.0).all(); };
  if (name == "checker_fat") {
    // Complement: inside {x_1 <= 0}, a checkerboard whose tile size is a
    // fixed fraction of the dyadic shell |x|_inf ~ 2^k. Self-similar, so its
    // density is bounded below at every scale around the origin.
    return [](const Point& x) {
      if (x[0] > 0.0) return true;
      const double r = x.cwiseAbs().maxCoeff();
      if (r == 0.0) return false;
      const double tile = std::exp2(std::floor(std::log2(r))) / 4.0;
      long parity = 0;
      for (int a = 0; a < x.size(); ++a) parity += static_cast<long>(std::floor(x[a] / tile));
      return (parity & 1L) != 0;
    };
  }
  if (dim < 2) throw InvalidArgument("benchmark '" + name + "' needs dimension 2 or 3");
  if (name == "slit") {
    const double w = params.slit_width > 0.0 ? params.slit_width : 0.75 * params.h;
    // Complement {x_1 <= 0, |x_2| <= w}: a thickened half-line (N=2) or half-plane (N=3).
    return [w](const Point& x) { return !(x[0] <= 0.0 && std::abs(x[1]) <= w); };
  }
  if (name == "power_cusp") {
    const double a = params.cusp_exponent;
    if (!(a >= 1.0)) throw InvalidArgument("power_cusp exponent must be >= 1");
    return [a](const Point& x) { return !(x[0] > 0.0 && transverse_norm(x) <= std::pow(x[0], a)); };
  }
  if (name == "exponential_cusp") {
    const double k = params.cusp_decay;
    if (!(k > 0.0)) throw InvalidArgument("exponential_cusp decay must be positive");
    return [k](const Point& x) {
      return !(x[0] > 0.0 && transverse_norm(x) <= std::exp(-k / x[0]));
    };
  }
  throw InvalidArgument("unknown benchmark domain '" + name + "'");
}

DomainTraits benchmark_traits(const std::string& name, const BenchmarkParams& params) {
  DomainTraits t;
  t.name = name;
  if (name == "full_cube" || name == "half_space" || name == "square_with_corner" ||
      name == "checker_fat") {
    t.complement_fat = true;
    t.positive_density = true;
  } else if (name == "slit") {
    // A codimension-one set has positive p-capacity for every p > 1 but no volume.
    t.complement_fat = true;
    t.positive_density = false;
  } else if (name == "power_cusp") {
    const bool cone = params.cusp_exponent == 1.0;
    t.complement_fat = cone;
    t.positive_density = cone;
  } else if (name == "exponential_cusp") {
    t.complement_fat = false;
    t.positive_density = false;
  }
  return t;
}

GridDomain benchmark_domain(const std::string& name, const BenchmarkParams& params) {
  Indicator shape = benchmark_shape(name, params);
  return rasterize(make_cube(Point::Zero(params.dim), params.half_edge), params.h, shape,
                   benchmark_traits(name, params));
}

NodeMask rasterize_cube_difference(const Cube& K, const GridDomain& E) {
  if (K.dim() != E.dim()) throw InvalidArgument("cube and domain dimensions differ");
  NodeMask m{E.lattice, std::vector<std::uint8_t>(E.inside.size(), 0)};
  auto [first, last] = E.lattice.index_box(K, false);
  for (int a = 0; a < E.dim(); ++a) {
    first[a] = std::max<Index>(first[a], 0);
    last[a] = std::min<Index>(last[a], E.lattice.shape[a] - 1);
  }
  MultiIndex i{0, 0, 0};
  for (i[2] = first[2]; i[2] <= last[2]; ++i[2])
    for (i[1] = first[1]; i[1] <= last[1]; ++i[1])
      for (i[0] = first[0]; i[0] <= last[0]; ++i[0]) {
        const Index k = E.lattice.flat(i);
        if (!E.is_inside(k)) m.bits[static_cast<std::size_t>(k)] = 1;
      }
  return m;
}

std::vector<Index> boundary_nodes(const GridDomain& E) {
  std::vector<Index> out;
  const Lattice& lat = E.lattice;
  for (Index k = 0; k < lat.size(); ++k) {
    const MultiIndex i = lat.unflat(k);
    const bool here = E.is_inside(k);
    bool mixed = false;
    for (int a = 0; a < lat.dim && !mixed; ++a)
      for (int s : {-1, 1}) {
        MultiIndex j = i;
        j[a] += s;
        if (lat.in_range(j) && E.is_inside(lat.flat(j)) != here) {
          mixed = true;
          break;
        }
      }
    if (mixed) out.push_back(k);
  }
  return out;
}

}  // namespace plw
