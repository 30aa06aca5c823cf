#include "plw/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "sparse_solve.hpp"

namespace plw {

double FluxSpec::modulation(double u) const {
  const double mid = 0.5 * (C_o + C_1);
  const double half = 0.5 * (C_1 - C_o);
  if (half <= 0.0 || Lambda <= 0.0) return mid;
  return mid + half * std::sin(Lambda / half * u);
}

double FluxSpec::modulation_derivative(double u) const {
  const double half = 0.5 * (C_1 - C_o);
  if (half <= 0.0 || Lambda <= 0.0) return 0.0;
  return Lambda * std::cos(Lambda / half * u);
}

double FluxSpec::factor(const Point& x, double t, double u) const {
  switch (kind) {
    case FluxKind::prototype:
      return 1.0;
    case FluxKind::scalar_coefficient: {
      const double a = coefficient ? coefficient(x, t) : C_o;
      if (!(a >= C_o * (1.0 - 1e-12) && a <= C_1 * (1.0 + 1e-12)))
        throw InvalidArgument("coefficient a(x,t) = " + std::to_string(a) + " leaves [C_o, C_1]");
      return a;
    }
    case FluxKind::u_modulated:
      return modulation(u);
  }
  return 1.0;
}

FluxSpec make_flux(FluxKind kind, double p, double C_o, double C_1, double Lambda) {
  if (!(p > 1.0)) throw InvalidArgument("flux exponent p must exceed 1");
  if (!(C_o > 0.0) || !(C_o <= C_1)) throw InvalidArgument("need 0 < C_o <= C_1");
  if (!(Lambda >= 0.0)) throw InvalidArgument("Lipschitz constant must be nonnegative");
  FluxSpec s;
  s.kind = kind;
  s.p = p;
  s.C_o = C_o;
  s.C_1 = C_1;
  s.Lambda = Lambda;
  return s;
}

FluxKind parse_flux_kind(const std::string& name) {
  if (name == "prototype") return FluxKind::prototype;
  if (name == "scalar_coefficient") return FluxKind::scalar_coefficient;
  if (name == "u_modulated") return FluxKind::u_modulated;
  throw InvalidArgument("unknown flux kind '" + name + "'");
}

Point flux(const FluxSpec& spec, const Point& x, double t, double u, const Point& xi) {
  const double s = xi.squaredNorm() + spec.epsilon * spec.epsilon;
  if (s == 0.0) return Point::Zero(xi.size());
  return spec.factor(x, t, u) * std::pow(s, 0.5 * (spec.p - 2.0)) * xi;
}

SpaceTimeFunction to_function(const Expression& e) {
  return [e](const Point& x, double t) {
    return e(x.size() > 0 ? x[0] : 0.0, x.size() > 1 ? x[1] : 0.0, x.size() > 2 ? x[2] : 0.0, t);
  };
}

BoundaryData boundary_from_expression(const std::string& g, const std::string& initial) {
  BoundaryData d;
  d.g = to_function(Expression(g));
  if (!initial.empty()) d.initial = to_function(Expression(initial));
  return d;
}

bool Field::is_interior(Index k) const {
  if (!is_inside(k)) return false;
  const MultiIndex i = lattice.unflat(k);
  for (int a = 0; a < lattice.dim; ++a)
    if (i[a] == 0 || i[a] == lattice.shape[a] - 1) return false;
  return true;
}

std::size_t Field::slice_at(double t) const {
  if (times.empty()) throw InvalidArgument("field has no time slices");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end()) return times.size() - 1;
  std::size_t j = static_cast<std::size_t>(it - times.begin());
  if (j > 0 && std::abs(times[j - 1] - t) <= std::abs(times[j] - t)) --j;
  return j;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct StepCell {
  std::array<Index, kMaxDim + 1> node{};
  Point center;
};

// One backward Euler step: find u with
//   (u - u_old)/dt - div_h A(x, t, u, D_h u) = f   at the unknowns,
// where div_h is the adjoint of the forward-difference cell gradient.
class StepSolver {
 public:
  StepSolver(const FluxSpec& spec, const Field& field, const SolverControls& controls)
      : spec_(spec), ctl_(controls), lat_(field.lattice), dim_(lat_.dim) {
    uid_.assign(static_cast<std::size_t>(lat_.size()), -1);
    for (Index k = 0; k < lat_.size(); ++k)
      if (field.is_interior(k)) uid_[static_cast<std::size_t>(k)] = n_++;
    for (Index k = 0; k < lat_.size(); ++k) {
      const MultiIndex i = lat_.unflat(k);
      StepCell c;
      c.node.fill(-1);
      c.node[0] = k;
      bool complete = true;
      bool touches = uid_[static_cast<std::size_t>(k)] >= 0;
      for (int a = 0; a < dim_; ++a) {
        MultiIndex j = i;
        ++j[a];
        if (!lat_.in_range(j)) {
          complete = false;
          break;
        }
        c.node[a + 1] = lat_.flat(j);
        touches |= uid_[static_cast<std::size_t>(c.node[a + 1])] >= 0;
      }
      if (!complete || !touches) continue;
      c.center = lat_.position(k).array() + 0.5 * lat_.h;
      cells_.push_back(c);
    }
    coef_.resize(cells_.size(), 1.0);
    // m(u) constant: the step is the minimization of a convex functional.
    gradient_form_ = spec_.kind != FluxKind::u_modulated || spec_.Lambda == 0.0 || spec_.C_1 == spec_.C_o;
  }

  Index unknowns() const { return n_; }

  // u holds u_old on entry with Dirichlet values already set to time t.
  // Returns Newton iterations; throws StepFailure.
  long step(Eigen::VectorXd& u, const Eigen::VectorXd& u_old, double t, double dt, long index,
            double& residual_out) {
    dt_ = dt;
    if (spec_.kind == FluxKind::scalar_coefficient)
      for (std::size_t c = 0; c < cells_.size(); ++c) coef_[c] = spec_.factor(cells_[c].center, t, 0.0);
    f_.setZero(n_);
    if (ctl_.source)
      for (Index k = 0; k < lat_.size(); ++k) {
        const Index id = uid_[static_cast<std::size_t>(k)];
        if (id >= 0) f_[id] = ctl_.source(lat_.position(k), t);
      }

    Eigen::VectorXd r;
    residual(u, u_old, r, true);
    double rmax = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    long it = 0;
    Eigen::VectorXd du;
    Eigen::VectorXd trial;
    Eigen::VectorXd r_trial;
    while (rmax > ctl_.newton_tol) {
      if (it >= ctl_.max_newton)
        throw StepFailure("Newton did not converge at time step " + std::to_string(index), rmax, index);
      ++it;
      if (!linear_solve(r, du))
        throw StepFailure("linear solve failed at time step " + std::to_string(index), rmax, index);

      const double merit0 = merit(u, u_old, r);
      double alpha = 1.0;
      bool accepted = false;
      while (alpha >= ctl_.min_damping) {
        trial = u;
        apply(trial, du, -alpha);
        residual(trial, u_old, r_trial, true);
        const double m = merit(trial, u_old, r_trial);
        const double tmax = r_trial.size() ? r_trial.cwiseAbs().maxCoeff() : 0.0;
        if (std::isfinite(m) && (m < merit0 || tmax < rmax)) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted)
        throw StepFailure("line search stalled at time step " + std::to_string(index), rmax, index);
      u.swap(trial);
      r.swap(r_trial);
      rmax = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    }
    residual_out = rmax;
    return it;
  }

 private:
  double coefficient(std::size_t c, const Eigen::VectorXd& u, double& ubar) const {
    ubar = 0.0;
    if (spec_.kind != FluxKind::u_modulated) return coef_[c];
    for (int a = 0; a <= dim_; ++a) ubar += u[cells_[c].node[a]];
    ubar /= dim_ + 1;
    return spec_.modulation(ubar);
  }

  // Residual at the unknowns and, when `jac`, its Jacobian in J_.
  void residual(const Eigen::VectorXd& u, const Eigen::VectorXd& u_old, Eigen::VectorXd& r, bool jac) {
    const double h = lat_.h;
    const double eps2 = spec_.epsilon * spec_.epsilon;
    const double q = spec_.p;
    r.setZero(n_);
    if (jac) trip_.clear();
    for (Index k = 0; k < lat_.size(); ++k) {
      const Index id = uid_[static_cast<std::size_t>(k)];
      if (id < 0) continue;
      r[id] = (u[k] - u_old[k]) / dt_ - f_[id];
      if (jac) trip_.emplace_back(id, id, 1.0 / dt_);
    }
    Eigen::Matrix<double, kMaxDim, 1> xi;
    Eigen::Matrix<double, kMaxDim, 1> F;
    Eigen::Matrix<double, kMaxDim, kMaxDim> H;
    std::array<Index, kMaxDim + 1> ids{};
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const StepCell& cell = cells_[c];
      const double u0 = u[cell.node[0]];
      double s = 0.0;
      for (int a = 0; a < dim_; ++a) {
        xi[a] = (u[cell.node[a + 1]] - u0) / h;
        s += xi[a] * xi[a];
      }
      const double se = s + eps2;
      if (se == 0.0) continue;
      double ubar = 0.0;
      const double kc = coefficient(c, u, ubar);
      const double w = std::pow(se, 0.5 * (q - 2.0));
      for (int a = 0; a < dim_; ++a) F[a] = kc * w * xi[a];
      for (int a = 0; a <= dim_; ++a) ids[a] = uid_[static_cast<std::size_t>(cell.node[a])];
      double sumF = 0.0;
      for (int a = 0; a < dim_; ++a) {
        sumF += F[a];
        if (ids[a + 1] >= 0) r[ids[a + 1]] += F[a] / h;
      }
      if (ids[0] >= 0) r[ids[0]] -= sumF / h;
      if (!jac) continue;

      // dF/dxi, then B^T (dF/dxi) B / h^2 in node space.
      const double w2 = (q - 2.0) * std::pow(se, 0.5 * (q - 4.0));
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b) H(a, b) = kc * ((a == b ? w : 0.0) + w2 * xi[a] * xi[b]) / (h * h);
      auto entry = [&](int row, int col) {
        // B(a, node) = +1 at node a+1, -1 at node 0.
        double v = 0.0;
        for (int a = 0; a < dim_; ++a) {
          const double ba = row == 0 ? -1.0 : (row == a + 1 ? 1.0 : 0.0);
          if (ba == 0.0) continue;
          for (int b = 0; b < dim_; ++b) {
            const double bb = col == 0 ? -1.0 : (col == b + 1 ? 1.0 : 0.0);
            if (bb != 0.0) v += ba * H(a, b) * bb;
          }
        }
        return v;
      };
      for (int i = 0; i <= dim_; ++i) {
        if (ids[i] < 0) continue;
        for (int j = 0; j <= dim_; ++j)
          if (ids[j] >= 0) trip_.emplace_back(ids[i], ids[j], entry(i, j));
      }
      if (spec_.kind == FluxKind::u_modulated) {
        const double dm = spec_.modulation_derivative(ubar) / (dim_ + 1);
        if (dm != 0.0) {
          // d r_i / d u_j through m(ubar): (B^T F / kc)_i * dm / h.
          for (int i = 0; i <= dim_; ++i) {
            if (ids[i] < 0) continue;
            const double bf = (i == 0 ? -sumF : F[i - 1]) / kc;
            for (int j = 0; j <= dim_; ++j)
              if (ids[j] >= 0) trip_.emplace_back(ids[i], ids[j], bf * dm / h);
          }
        }
      }
    }
    if (jac) {
      J_.resize(n_, n_);
      J_.setFromTriplets(trip_.begin(), trip_.end());
    }
  }

  // Convex step functional for the gradient-form fluxes, squared residual otherwise.
  double merit(const Eigen::VectorXd& u, const Eigen::VectorXd& u_old, const Eigen::VectorXd& r) const {
    if (!gradient_form_) return r.squaredNorm();
    const double h = lat_.h;
    const double eps2 = spec_.epsilon * spec_.epsilon;
    const double q = spec_.p;
    const double base = std::pow(eps2, 0.5 * q);
    double e = 0.0;
    for (Index k = 0; k < lat_.size(); ++k) {
      const Index id = uid_[static_cast<std::size_t>(k)];
      if (id < 0) continue;
      const double d = u[k] - u_old[k];
      e += 0.5 * d * d / dt_ - f_[id] * u[k];
    }
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      const StepCell& cell = cells_[c];
      double s = 0.0;
      for (int a = 0; a < dim_; ++a) {
        const double g = (u[cell.node[a + 1]] - u[cell.node[0]]) / h;
        s += g * g;
      }
      double ubar = 0.0;
      e += coefficient(c, u, ubar) * (std::pow(s + eps2, 0.5 * q) - base) / q;
    }
    return e;
  }

  bool linear_solve(const Eigen::VectorXd& r, Eigen::VectorXd& du) {
    if (gradient_form_) return spd_.solve(J_, r, du);
    lu_.compute(J_);
    if (lu_.info() != Eigen::Success) return false;
    du = lu_.solve(r);
    return lu_.info() == Eigen::Success && du.allFinite();
  }

  void apply(Eigen::VectorXd& u, const Eigen::VectorXd& du, double alpha) const {
    for (Index k = 0; k < lat_.size(); ++k) {
      const Index id = uid_[static_cast<std::size_t>(k)];
      if (id >= 0) u[k] += alpha * du[id];
    }
  }

  const FluxSpec& spec_;
  const SolverControls& ctl_;
  const Lattice& lat_;
  int dim_;
  Index n_ = 0;
  bool gradient_form_ = true;
  double dt_ = 1.0;
  std::vector<Index> uid_;
  std::vector<StepCell> cells_;
  std::vector<double> coef_;
  Eigen::VectorXd f_;
  std::vector<Triplet> trip_;
  SparseMatrix J_;
  detail::JacobiCgSolver spd_;
  Eigen::SparseLU<SparseMatrix> lu_;
};

}  // namespace

Field solve_cauchy_dirichlet(const FluxSpec& spec_in, const GridDomain& domain,
                             const BoundaryData& data, const SolverControls& controls) {
  if (!(spec_in.p > 1.0)) throw InvalidArgument("flux exponent p must exceed 1");
  if (!data.g) throw InvalidArgument("boundary data g is missing");
  if (!(controls.T > 0.0)) throw InvalidArgument("time horizon must be positive");
  if (controls.dt < 0.0) throw InvalidArgument("time step must be nonnegative");
  if (controls.record_stride < 1) throw InvalidArgument("record stride must be >= 1");
  if (controls.source && !controls.verification)
    throw InvalidArgument("a source term is only accepted in verification runs");

  Field u;
  u.lattice = domain.lattice;
  u.inside = domain.inside;
  const Lattice& lat = u.lattice;
  const Index n = lat.size();

  Eigen::VectorXd cur(n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Index k = 0; k < n; ++k) {
    const Point x = lat.position(k);
    const double gv = data.g(x, 0.0);
    cur[k] = u.is_interior(k) && data.initial ? data.initial(x, 0.0) : gv;
    if (!std::isfinite(cur[k])) throw InvalidArgument("boundary or initial data is not finite");
    lo = std::min(lo, cur[k]);
    hi = std::max(hi, cur[k]);
  }
  const double osc = hi - lo > 0.0 ? hi - lo : 1.0;

  FluxSpec spec = spec_in;
  spec.epsilon = controls.epsilon >= 0.0 ? controls.epsilon : 1e-8 * osc / lat.h;
  const double dt0 = controls.dt > 0.0 ? controls.dt : std::pow(lat.h, spec.p) * std::pow(osc, 2.0 - spec.p) / 4.0;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(controls.T / dt0 - 1e-9)));
  const double dt = controls.T / static_cast<double>(steps);

  StepSolver solver(spec, u, controls);
  if (solver.unknowns() == 0) throw ResolutionError("domain raster has no interior unknowns");

  u.stats.dt = dt;
  u.stats.epsilon = spec.epsilon;
  u.times.push_back(0.0);
  u.values.push_back(cur);

  Eigen::VectorXd old;
  for (long s = 1; s <= steps; ++s) {
    const double t = controls.T * static_cast<double>(s) / static_cast<double>(steps);
    old = cur;
    for (Index k = 0; k < n; ++k)
      if (!u.is_interior(k)) cur[k] = data.g(lat.position(k), t);
    double res = 0.0;
    u.stats.newton_iterations += solver.step(cur, old, t, dt, s, res);
    u.stats.max_residual = std::max(u.stats.max_residual, res);
    if (s % controls.record_stride == 0 || s == steps) {
      u.times.push_back(t);
      u.values.push_back(cur);
    }
  }
  u.stats.steps = steps;
  return u;
}

namespace {

Eigen::VectorXd truncated(const Eigen::VectorXd& v, double k, Sign sign) {
  if (sign == Sign::plus) return (v.array() - k).max(0.0).matrix();
  return (k - v.array()).max(0.0).matrix();
}

}  // namespace

Field truncate(const Field& u, double k, Sign sign) {
  Field out = u;
  for (auto& v : out.values)
    v = truncated(v, k, sign);
  return out;
}

std::vector<Index> lateral_boundary(const Field& u) {
  std::vector<Index> out;
  const Lattice& lat = u.lattice;
  for (Index k = 0; k < lat.size(); ++k) {
    if (u.is_inside(k)) continue;
    const MultiIndex i = lat.unflat(k);
    bool near = false;
    for (int a = 0; a < lat.dim && !near; ++a)
      for (int s : {-1, 1}) {
        MultiIndex j = i;
        j[a] += s;
        if (lat.in_range(j) && u.is_inside(lat.flat(j))) {
          near = true;
          break;
        }
      }
    if (near) out.push_back(k);
  }
  return out;
}

Field zero_extend(const Field& u, double k, Sign sign, const Cylinder& Q) {
  if (Q.base.dim() != u.dim()) throw InvalidArgument("cylinder and field dimensions differ");
  const std::vector<Index> sigma = lateral_boundary(u);
  Field out;
  out.lattice = u.lattice;
  out.inside = u.inside;
  out.stats = u.stats;
  const double tol = 1e-12 * std::max(1.0, std::abs(k));
  for (std::size_t j = 0; j < u.slices(); ++j) {
    const double t = u.times[j];
    if (t < Q.t_lo() - 1e-12 || t > Q.t_hi() + 1e-12) continue;
    for (Index node : sigma) {
      if (!Q.base.contains(u.lattice.position(node))) continue;
      const double g = u.values[j][node];
      if (sign == Sign::plus ? g > k + tol : g < k - tol)
        throw InvalidLevel("level k = " + std::to_string(k) + " does not dominate the boundary data " +
                           std::to_string(g) + " at t = " + std::to_string(t));
    }
    Eigen::VectorXd v = truncated(u.values[j], k, sign);
    for (Index node = 0; node < v.size(); ++node)
      if (!u.is_inside(node)) v[node] = 0.0;
    out.times.push_back(t);
    out.values.push_back(std::move(v));
  }
  if (out.times.empty()) throw GeometryError("cylinder contains no recorded time slice");
  return out;
}

ComparisonReport check_comparison(const Field& u, const Field& v, double newton_tol) {
  if (u.lattice.size() != v.lattice.size() || u.times.size() != v.times.size())
    throw InvalidArgument("fields live on different grids");
  for (std::size_t j = 0; j < u.times.size(); ++j)
    if (std::abs(u.times[j] - v.times[j]) > 1e-12 * std::max(1.0, std::abs(u.times[j])))
      throw InvalidArgument("fields have different time levels");
  ComparisonReport rep;
  rep.tolerance = 1e-8 + newton_tol;
  rep.boundary_margin = std::numeric_limits<double>::infinity();
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < u.times.size(); ++j)
    for (Index k = 0; k < u.lattice.size(); ++k) {
      const double d = u.values[j][k] - v.values[j][k];
      if (j == 0 || !u.is_interior(k)) rep.boundary_margin = std::min(rep.boundary_margin, d);
      else rep.max_violation = std::max(rep.max_violation, -d);
    }
  if (rep.boundary_margin < -1e-14)
    throw InvalidArgument("data are not ordered on the parabolic boundary (margin " +
                          std::to_string(rep.boundary_margin) + ")");
  if (!std::isfinite(rep.max_violation)) rep.max_violation = 0.0;
  rep.pass = rep.max_violation <= rep.tolerance;
  return rep;
}

void write_field_csv(std::ostream& os, const Field& u) {
  static const char* names[] = {"x", "y", "z"};
  os << "t";
  for (int a = 0; a < u.dim(); ++a) os << ',' << names[a];
  os << ",u\n";
  char buf[64];
  for (std::size_t j = 0; j < u.slices(); ++j)
    for (Index k = 0; k < u.lattice.size(); ++k) {
      const Point x = u.lattice.position(k);
      std::snprintf(buf, sizeof buf, "%.15g", u.times[j]);
      os << buf;
      for (int a = 0; a < u.dim(); ++a) {
        std::snprintf(buf, sizeof buf, ",%.15g", x[a]);
        os << buf;
      }
      std::snprintf(buf, sizeof buf, ",%.15g\n", u.values[j][k]);
      os << buf;
    }
}

Field read_field_csv(std::istream& is, const std::vector<std::uint8_t>* inside) {
  std::string line;
  if (!std::getline(is, line)) throw InvalidArgument("empty field file");
  const int columns = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  const int dim = columns - 2;
  if (dim < 1 || dim > kMaxDim) throw InvalidArgument("field header must be t,x,[y,[z]],u");
  std::vector<std::array<double, kMaxDim + 2>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, kMaxDim + 2> r{};
    std::stringstream ss(line);
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= columns) throw InvalidArgument("too many columns in field row");
      r[static_cast<std::size_t>(c++)] = std::stod(cell);
    }
    if (c != columns) throw InvalidArgument("short field row");
    rows.push_back(r);
  }
  if (rows.empty()) throw InvalidArgument("field file has no rows");

  Field u;
  std::map<double, std::size_t> slice;
  for (const auto& r : rows) slice.emplace(r[0], 0);
  for (auto& [t, idx] : slice) {
    idx = u.times.size();
    u.times.push_back(t);
  }
  u.lattice.dim = dim;
  u.lattice.origin = Point::Zero(dim);
  double h = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dim; ++a) {
    std::vector<double> xs;
    for (const auto& r : rows) xs.push_back(r[static_cast<std::size_t>(a + 1)]);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    u.lattice.origin[a] = xs.front();
    u.lattice.shape[a] = static_cast<Index>(xs.size());
    for (std::size_t i = 1; i < xs.size(); ++i) h = std::min(h, xs[i] - xs[i - 1]);
  }
  u.lattice.h = std::isfinite(h) ? h : 1.0;
  const Index n = u.lattice.size();
  if (static_cast<std::size_t>(n) * u.times.size() != rows.size())
    throw InvalidArgument("field rows do not form a full lattice at every time");
  u.values.assign(u.times.size(), Eigen::VectorXd::Zero(n));
  for (const auto& r : rows) {
    MultiIndex i{0, 0, 0};
    for (int a = 0; a < dim; ++a)
      i[a] = std::llround((r[static_cast<std::size_t>(a + 1)] - u.lattice.origin[a]) / u.lattice.h);
    if (!u.lattice.in_range(i)) throw InvalidArgument("field coordinates are not on a uniform lattice");
    u.values[slice[r[0]]][u.lattice.flat(i)] = r[static_cast<std::size_t>(dim + 1)];
  }
  if (inside) {
    if (static_cast<Index>(inside->size()) != n) throw InvalidArgument("inside mask does not match the field");
    u.inside = *inside;
  } else {
    u.inside.assign(static_cast<std::size_t>(n), 1);
  }
  return u;
}

}  // namespace plw
