#include "plw/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/SparseCore>

#include "sparse_solve.hpp"

namespace plw {

namespace {

// One cell of the forward-difference gradient: node[0] is the cell's lower
// corner, node[a + 1] its neighbour along axis a (-1 past the lattice).
struct Cell {
  std::array<Index, kMaxDim + 1> node{};
  std::array<double, kMaxDim> inv_len{};  // 1 / (edge length to the boundary crossing)
  double weight = 1.0;                    // volume share of the cell
};

std::vector<Cell> build_cells(const Lattice& lat) {
  std::vector<Cell> cells(static_cast<std::size_t>(lat.size()));
  for (Index k = 0; k < lat.size(); ++k) {
    const MultiIndex i = lat.unflat(k);
    Cell& c = cells[static_cast<std::size_t>(k)];
    c.node.fill(-1);
    c.inv_len.fill(1.0 / lat.h);
    c.node[0] = k;
    for (int a = 0; a < lat.dim; ++a) {
      MultiIndex j = i;
      ++j[a];
      c.node[a + 1] = lat.in_range(j) ? lat.flat(j) : -1;
    }
  }
  return cells;
}

inline double value_at(const Eigen::VectorXd& phi, Index k) {
  return k < 0 ? 0.0 : phi[k];
}

// Newton iteration for the condenser energy with line search on the exact
// energy and an eps-smoothed Hessian as the model.
class CondenserSolver {
 public:
  CondenserSolver(const Condenser& cond, const CapacityOptions& options)
      : cond_(cond), opt_(options), lat_(cond.lattice), dim_(lat_.dim), p_(cond.p) {
    hN_ = lat_.cell_volume();
    uid_.assign(static_cast<std::size_t>(lat_.size()), -1);
    for (Index k = 0; k < lat_.size(); ++k)
      if (cond_.role[static_cast<std::size_t>(k)] == NodeRole::free) uid_[static_cast<std::size_t>(k)] = n_free_++;

    std::vector<Cell> cells = build_cells(lat_);
    if (!cond_.edge_fraction.empty()) {
      if (cond_.edge_fraction.size() != cells.size() * static_cast<std::size_t>(dim_))
        throw InvalidArgument("edge fractions do not match the lattice");
      for (std::size_t k = 0; k < cells.size(); ++k)
        for (int a = 0; a < dim_; ++a) {
          const double f = cond_.edge_fraction[k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(a)];
          if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("edge fractions must lie in (0,1]");
          cells[k].inv_len[a] = 1.0 / (f * lat_.h);
        }
      // A cut cell keeps the mean of its edge fractions as volume share (exact in 1-D).
      for (Cell& c : cells) {
        double sum = 0.0;
        for (int a = 0; a < dim_; ++a) sum += 1.0 / (c.inv_len[a] * lat_.h);
        c.weight = sum / dim_;
      }
    }
    for (const Cell& c : cells) {
      bool any_free = false;
      bool any_one = false;
      bool any_zero = false;
      for (int a = 0; a <= dim_; ++a) {
        const NodeRole r = c.node[a] < 0 ? NodeRole::zero : cond_.role[static_cast<std::size_t>(c.node[a])];
        any_free |= r == NodeRole::free;
        any_one |= r == NodeRole::one;
        any_zero |= r == NodeRole::zero;
      }
      if (any_free || (any_one && any_zero)) active_.push_back(c);
    }
    const double diam_cells = static_cast<double>(*std::max_element(lat_.shape.begin(), lat_.shape.begin() + dim_)) *
                              std::sqrt(static_cast<double>(dim_));
    eps2_ = std::pow(opt_.epsilon_factor * diam_cells, 2);
  }

  CapacityResult run() {
    CapacityResult res;
    res.lattice = lat_;
    phi_ = Eigen::VectorXd::Zero(lat_.size());
    for (Index k = 0; k < lat_.size(); ++k)
      if (cond_.role[static_cast<std::size_t>(k)] == NodeRole::one) phi_[k] = 1.0;

    const bool has_one = (phi_.array() > 0.0).any();
    if (!has_one || n_free_ == 0) {
      res.value = energy(phi_);
      res.potential = std::move(phi_);
      return res;
    }

    // The p = 2 minimizer is a cheap, well-scaled starting point.
    Eigen::VectorXd g;
    assemble(phi_, 2.0, 0.0, g);
    Eigen::VectorXd step;
    if (!solver_.solve(H_, -g, step)) throw ConvergenceError("capacity: initial solve failed", 1.0);
    apply(phi_, step, 1.0);
    clamp(phi_);

    double E = energy(phi_);
    long it = 0;
    double rel_dec = 1.0;
    for (; it < opt_.max_iterations; ++it) {
      assemble(phi_, p_, eps2_, g);
      step.setZero(n_free_);
      if (!solver_.solve(H_, -g, step))
        throw ConvergenceError("capacity: Newton linear solve failed", rel_dec);
      const double dec = -g.dot(step);
      rel_dec = std::max(dec, 0.0) / std::max(E, 1e-300);
      if (rel_dec <= 1e-2 * opt_.rel_tol) break;

      double alpha = 1.0;
      double E_new = E;
      Eigen::VectorXd trial;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
        trial = phi_;
        apply(trial, step, alpha);
        // Truncation to [0,1] never raises the energy.
        clamp(trial);
        E_new = energy(trial);
        if (E_new <= E - 1e-4 * alpha * dec) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Energy no longer decreases at working precision.
        if (rel_dec < 1e-8) break;
        throw ConvergenceError("capacity: line search stalled", rel_dec);
      }
      phi_.swap(trial);
      const double drop = (E - E_new) / std::max(E_new, 1e-300);
      E = E_new;
      if (alpha == 1.0 && drop < opt_.rel_tol) {
        ++it;
        break;
      }
    }
    if (it >= opt_.max_iterations)
      throw ConvergenceError("capacity: iteration cap reached", rel_dec);

    res.value = E;
    res.iterations = it;
    res.residual = rel_dec;
    res.potential = std::move(phi_);
    return res;
  }

  double energy(const Eigen::VectorXd& phi) const {
    double sum = 0.0;
    for (const Cell& c : active_) {
      const double u0 = phi[c.node[0]];
      double s = 0.0;
      for (int a = 0; a < dim_; ++a) {
        const double ga = (value_at(phi, c.node[a + 1]) - u0) * c.inv_len[a];
        s += ga * ga;
      }
      if (s > 0.0) sum += c.weight * std::pow(s, 0.5 * p_);
    }
    return hN_ * sum;
  }

 private:
  void apply(Eigen::VectorXd& phi, const Eigen::VectorXd& step, double alpha) const {
    for (Index k = 0; k < lat_.size(); ++k) {
      const Index u = uid_[static_cast<std::size_t>(k)];
      if (u >= 0) phi[k] += alpha * step[u];
    }
  }

  void clamp(Eigen::VectorXd& phi) const {
    phi = phi.cwiseMax(0.0).cwiseMin(1.0);
  }

  // Exact gradient (for q = p) and Hessian of the eps-smoothed energy.
  void assemble(const Eigen::VectorXd& phi, double q, double eps2, Eigen::VectorXd& grad) {
    grad.setZero(n_free_);
    triplets_.clear();
    triplets_.reserve(active_.size() * static_cast<std::size_t>((dim_ + 1) * (dim_ + 1)));
    Eigen::Matrix<double, kMaxDim, 1> gv;
    Eigen::Matrix<double, kMaxDim, kMaxDim> M;
    std::array<Index, kMaxDim + 1> ids{};
    for (const Cell& c : active_) {
      const double u0 = phi[c.node[0]];
      double s = 0.0;
      for (int a = 0; a < dim_; ++a) {
        gv[a] = (value_at(phi, c.node[a + 1]) - u0) * c.inv_len[a];
        s += gv[a] * gv[a];
      }
      for (int a = 0; a <= dim_; ++a)
        ids[a] = c.node[a] < 0 ? -1 : uid_[static_cast<std::size_t>(c.node[a])];

      if (s > 0.0) {
        const double gcoef = c.weight * hN_ * q * std::pow(s, 0.5 * q - 1.0);
        for (int a = 0; a < dim_; ++a) {
          const double f = gcoef * gv[a] * c.inv_len[a];
          if (ids[a + 1] >= 0) grad[ids[a + 1]] += f;
          if (ids[0] >= 0) grad[ids[0]] -= f;
        }
      }

      const double se = s + eps2;
      const bool quadratic = q == 2.0;
      if (se <= 0.0 && !quadratic) continue;
      const double wN = c.weight * hN_;
      const double c1 = quadratic ? wN * 2.0 : wN * q * std::pow(se, 0.5 * q - 1.0);
      const double c2 = quadratic ? 0.0 : wN * q * (q - 2.0) * std::pow(se, 0.5 * q - 2.0);
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) M(a, b) = (a == b ? c1 : 0.0) + c2 * gv[a] * gv[b];

      // Node-space Hessian B^T M B with B = [-1 | I] scaled per axis by 1/length.
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) M(a, b) *= c.inv_len[a] * c.inv_len[b];
      double total = 0.0;
      for (int a = 0; a < dim_; ++a) {
        double col = 0.0;
        for (int b = 0; b < dim_; ++b) {
          col += M(a, b);
          if (ids[a + 1] >= 0 && ids[b + 1] >= 0) triplets_.emplace_back(ids[a + 1], ids[b + 1], M(a, b));
        }
        total += col;
        if (ids[0] >= 0 && ids[a + 1] >= 0) {
          triplets_.emplace_back(ids[0], ids[a + 1], -col);
          triplets_.emplace_back(ids[a + 1], ids[0], -col);
        }
      }
      if (ids[0] >= 0) triplets_.emplace_back(ids[0], ids[0], total);
    }
    H_.resize(n_free_, n_free_);
    H_.setFromTriplets(triplets_.begin(), triplets_.end());
  }

  const Condenser& cond_;
  CapacityOptions opt_;
  const Lattice& lat_;
  int dim_;
  double p_;
  double hN_ = 1.0;
  double eps2_ = 0.0;
  Index n_free_ = 0;
  std::vector<Index> uid_;
  std::vector<Cell> active_;
  Eigen::VectorXd phi_;
  std::vector<Eigen::Triplet<double>> triplets_;
  detail::SparseMatrix H_;
  detail::SpdSolver solver_;
};

void check_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("capacity exponent p must exceed 1");
}

}  // namespace

double dirichlet_energy(const Lattice& lattice, const Eigen::VectorXd& phi, double p) {
  Condenser cond{lattice, std::vector<NodeRole>(static_cast<std::size_t>(lattice.size()), NodeRole::free), p, {}};
  // All-free roles make every cell active.
  return CondenserSolver(cond, {}).energy(phi);
}

CapacityResult minimize_condenser(const Condenser& condenser, const CapacityOptions& options) {
  check_exponent(condenser.p);
  const Lattice& lat = condenser.lattice;
  if (static_cast<Index>(condenser.role.size()) != lat.size())
    throw InvalidArgument("condenser roles do not match the lattice");
  for (Index k = 0; k < lat.size(); ++k) {
    const MultiIndex i = lat.unflat(k);
    bool border = false;
    for (int a = 0; a < lat.dim; ++a) border |= i[a] == 0 || i[a] == lat.shape[a] - 1;
    if (border && condenser.role[static_cast<std::size_t>(k)] != NodeRole::zero)
      throw InvalidArgument("condenser lattice border must be fixed at zero");
  }
  return CondenserSolver(condenser, options).run();
}

void embed_boundary(Condenser& condenser, const LevelFunction& one_level,
                    const LevelFunction& window_level, double min_fraction) {
  if (!(min_fraction > 0.0 && min_fraction <= 1.0))
    throw InvalidArgument("minimum edge fraction must lie in (0,1]");
  const Lattice& lat = condenser.lattice;
  const int dim = lat.dim;
  condenser.edge_fraction.assign(static_cast<std::size_t>(lat.size() * dim), 1.0);
  for (Index k = 0; k < lat.size(); ++k) {
    const MultiIndex i = lat.unflat(k);
    for (int a = 0; a < dim; ++a) {
      MultiIndex j = i;
      ++j[a];
      if (!lat.in_range(j)) continue;
      const Index k2 = lat.flat(j);
      const NodeRole r1 = condenser.role[static_cast<std::size_t>(k)];
      const NodeRole r2 = condenser.role[static_cast<std::size_t>(k2)];
      if ((r1 == NodeRole::free) == (r2 == NodeRole::free)) continue;
      const bool first_free = r1 == NodeRole::free;
      const Point xf = lat.position(first_free ? k : k2);
      const Point xd = lat.position(first_free ? k2 : k);
      const LevelFunction& level = (first_free ? r2 : r1) == NodeRole::one ? one_level : window_level;
      // Bisection for the sign change of the level function on [xf, xd].
      const double sf = level(xf);
      double lo = 0.0;
      double hi = 1.0;
      if (!((sf > 0.0) != (level(xd) > 0.0))) continue;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((level(xf + mid * (xd - xf)) > 0.0) == (sf > 0.0)) lo = mid;
        else hi = mid;
      }
      condenser.edge_fraction[static_cast<std::size_t>(k * dim + a)] =
          std::clamp(0.5 * (lo + hi), min_fraction, 1.0);
    }
  }
}

CapacityResult p_capacity(const CapacityProblem& problem, const CapacityOptions& options) {
  check_exponent(problem.p);
  const Lattice& src = problem.inner.lattice;
  if (problem.window.dim() != src.dim) throw InvalidArgument("window and node set dimensions differ");
  if (static_cast<Index>(problem.inner.bits.size()) != src.size())
    throw InvalidArgument("node mask size does not match its lattice");

  auto [first, last] = src.index_box(problem.window, true);
  for (int a = 0; a < src.dim; ++a)
    if (last[a] < first[a]) throw InvalidArgument("window contains no lattice nodes");

  Lattice lat;
  lat.dim = src.dim;
  lat.h = src.h;
  lat.origin = src.origin;
  for (int a = 0; a < src.dim; ++a) {
    lat.origin[a] += static_cast<double>(first[a] - 1) * src.h;
    lat.shape[a] = last[a] - first[a] + 3;
  }

  Condenser cond{lat, std::vector<NodeRole>(static_cast<std::size_t>(lat.size()), NodeRole::zero), problem.p, {}};
  for (Index k = 0; k < lat.size(); ++k) {
    const MultiIndex j = lat.unflat(k);
    bool interior = true;
    for (int a = 0; a < lat.dim; ++a) interior &= j[a] >= 1 && j[a] <= lat.shape[a] - 2;
    if (interior) cond.role[static_cast<std::size_t>(k)] = NodeRole::free;
  }

  for (Index k = 0; k < src.size(); ++k) {
    if (!problem.inner.bits[static_cast<std::size_t>(k)]) continue;
    const MultiIndex s = src.unflat(k);
    MultiIndex j{0, 0, 0};
    for (int a = 0; a < src.dim; ++a) {
      j[a] = s[a] - first[a] + 1;
      if (j[a] < 1 || j[a] > lat.shape[a] - 2)
        throw InvalidArgument("condenser set must lie inside the open window");
      if (j[a] < 2 || j[a] > lat.shape[a] - 3)
        throw ResolutionError("lattice does not resolve the condenser gap by two cells");
    }
    cond.role[static_cast<std::size_t>(lat.flat(j))] = NodeRole::one;
  }
  return minimize_condenser(cond, options);
}

NodeMask scale_mask(const NodeMask& mask, double factor, int refine) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw InvalidArgument("scale factor must be positive");
  int e = 0;
  if (std::frexp(factor, &e) != 0.5)
    throw InvalidArgument("scale factor must be a power of two to stay on a commensurate lattice");
  if (refine < 1 || (refine & (refine - 1)) != 0)
    throw InvalidArgument("refinement factor must be a positive power of two");
  const Lattice& src = mask.lattice;
  NodeMask out;
  out.lattice.dim = src.dim;
  out.lattice.h = src.h * factor / refine;
  out.lattice.origin = (src.origin.array() - 0.5 * src.h) * factor + 0.5 * out.lattice.h;
  for (int a = 0; a < src.dim; ++a) out.lattice.shape[a] = src.shape[a] * refine;
  out.bits.resize(static_cast<std::size_t>(out.lattice.size()));
  for (Index k = 0; k < out.lattice.size(); ++k) {
    MultiIndex i = out.lattice.unflat(k);
    for (int a = 0; a < src.dim; ++a) i[a] /= refine;
    out.bits[static_cast<std::size_t>(k)] = mask.bits[static_cast<std::size_t>(src.flat(i))];
  }
  return out;
}

CapacityProblem scale_problem(const CapacityProblem& problem, double factor, int refine) {
  CapacityProblem out;
  out.inner = scale_mask(problem.inner, factor, refine);
  out.window = Cube{problem.window.center * factor, problem.window.half_edge * factor};
  out.p = problem.p;
  return out;
}

std::pair<double, double> capacity_scaling_check(const CapacityProblem& problem, double factor,
                                                 int refine, const CapacityOptions& options) {
  const double base = p_capacity(problem, options).value;
  if (factor == 1.0 && refine == 1) return {base, base};
  return {base, p_capacity(scale_problem(problem, factor, refine), options).value};
}

ParabolicCapacityResult parabolic_capacity(const ParabolicCondenser& condenser,
                                           const CapacityOptions& options) {
  check_exponent(condenser.p);
  ParabolicCapacityResult res;
  const std::size_t n = condenser.slices.size();
  if (n == 0) return res;
  const double dt = condenser.Q.duration() / static_cast<double>(n);
  // Identical slices share one elliptic solve.
  std::map<std::vector<std::uint8_t>, double> cache;
  res.slice_values.reserve(n);
  for (const NodeMask& slice : condenser.slices) {
    double v = 0.0;
    if (!slice.empty()) {
      auto it = cache.find(slice.bits);
      if (it == cache.end()) {
        v = p_capacity(CapacityProblem{slice, condenser.Q.base, condenser.p}, options).value;
        cache.emplace(slice.bits, v);
      } else {
        v = it->second;
      }
    }
    res.slice_values.push_back(v);
    res.value += dt * v;
  }
  return res;
}

DensityResult capacity_density(const GridDomain& E, const Point& x_o, double rho, double p,
                               const CapacityOptions& options) {
  check_exponent(p);
  if (x_o.size() != E.dim()) throw InvalidArgument("point and domain dimensions differ");
  const Cube K = make_cube(x_o, rho);
  const Cube W = K.dilated(1.5);
  if (rho / E.h() < kMinCellsPerRadius - 1e-9)
    throw ResolutionError("capacity density needs at least 8 cells across rho");
  if (!E.bbox.contains(W)) throw GeometryError("K_{3rho/2}(x_o) leaves the bounding box");

  const NodeMask diff = rasterize_cube_difference(K, E);
  NodeMask full{E.lattice, std::vector<std::uint8_t>(E.inside.size(), 0)};
  auto [first, last] = E.lattice.index_box(K, false);
  MultiIndex i{0, 0, 0};
  for (i[2] = (E.dim() > 2 ? first[2] : 0); i[2] <= (E.dim() > 2 ? last[2] : 0); ++i[2])
    for (i[1] = (E.dim() > 1 ? first[1] : 0); i[1] <= (E.dim() > 1 ? last[1] : 0); ++i[1])
      for (i[0] = first[0]; i[0] <= last[0]; ++i[0]) full.bits[static_cast<std::size_t>(E.lattice.flat(i))] = 1;

  DensityResult res;
  res.denominator = p_capacity(CapacityProblem{full, W, p}, options).value;
  if (diff.empty()) return res;
  if (diff.bits == full.bits) {
    res.numerator = res.denominator;
  } else {
    res.numerator = p_capacity(CapacityProblem{diff, W, p}, options).value;
  }
  res.delta = std::clamp(res.numerator / res.denominator, 0.0, 1.0);
  return res;
}

DensityResult capacity_density(const Indicator& in_E, int dim, const Point& x_o, double rho,
                               double p, int cells_per_rho, const CapacityOptions& options) {
  if (cells_per_rho < static_cast<int>(kMinCellsPerRadius))
    throw ResolutionError("capacity density needs at least 8 cells across rho");
  if (cells_per_rho % 2 != 0) throw InvalidArgument("cells_per_rho must be even");
  if (x_o.size() != dim) throw InvalidArgument("point and domain dimensions differ");
  const double h = rho / cells_per_rho;
  const Cube box = make_cube(x_o, (1.5 * cells_per_rho + 1) * h);
  const GridDomain E = rasterize(box, h, in_E);
  return capacity_density(E, x_o, rho, p, options);
}

FatnessReport is_uniformly_p_fat(const GridDomain& E, double gamma_o, double rho_o, double p,
                                 int k_max, std::size_t max_points,
                                 const CapacityOptions& options) {
  if (k_max < 0) throw InvalidArgument("k_max must be nonnegative");
  const double finest = rho_o / std::exp2(k_max);
  if (finest / E.h() < kMinCellsPerRadius - 1e-9)
    throw ResolutionError("finest dyadic scale is below the lattice floor");

  std::vector<Index> candidates;
  for (Index k : boundary_nodes(E)) {
    if (E.bbox.contains(make_cube(E.lattice.position(k), 1.5 * rho_o))) candidates.push_back(k);
  }
  const std::size_t stride =
      candidates.size() > max_points && max_points > 0 ? (candidates.size() + max_points - 1) / max_points : 1;

  FatnessReport report;
  for (std::size_t n = 0; n < candidates.size(); n += stride) {
    const Point x = E.lattice.position(candidates[n]);
    for (int k = 0; k <= k_max; ++k) {
      const double rho = rho_o / std::exp2(k);
      const double ratio = capacity_density(E, x, rho, p, options).delta;
      report.evidence.push_back({x, rho, ratio});
      if (ratio < gamma_o) report.fat = false;
    }
  }
  return report;
}

GeometricDensity geometric_density(const GridDomain& E, const Point& x_o, double rho, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  const Cube K = make_cube(x_o, rho);
  if (!E.bbox.contains(K)) throw GeometryError("K_rho(x_o) leaves the bounding box");
  auto [first, last] = E.lattice.index_box(K, false);
  Index total = 0;
  Index in = 0;
  MultiIndex i{0, 0, 0};
  for (i[2] = (E.dim() > 2 ? first[2] : 0); i[2] <= (E.dim() > 2 ? last[2] : 0); ++i[2])
    for (i[1] = (E.dim() > 1 ? first[1] : 0); i[1] <= (E.dim() > 1 ? last[1] : 0); ++i[1])
      for (i[0] = first[0]; i[0] <= last[0]; ++i[0]) {
        ++total;
        if (E.is_inside(E.lattice.flat(i))) ++in;
      }
  if (total == 0) throw ResolutionError("K_rho(x_o) contains no lattice nodes");
  GeometricDensity g;
  g.fraction_in_E = static_cast<double>(in) / static_cast<double>(total);
  g.holds = static_cast<double>(in) <= (1.0 - alpha) * static_cast<double>(total);
  return g;
}

}  // namespace plw
