#include "plw/harnack.hpp"

#include <algorithm>
#include <cmath>

namespace plw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Index> collect(const Lattice& lat, const Cube& K, bool clip) {
  if (K.dim() != lat.dim) throw InvalidArgument("cube and field dimensions differ");
  auto [first, last] = lat.index_box(K, false);
  for (int a = 0; a < lat.dim; ++a) {
    if (first[a] < 0 || last[a] >= lat.shape[a]) {
      if (!clip) throw GeometryError("cube leaves the field's lattice");
      first[a] = std::max<Index>(first[a], 0);
      last[a] = std::min<Index>(last[a], lat.shape[a] - 1);
    }
  }
  std::vector<Index> out;
  MultiIndex i{0, 0, 0};
  for (i[2] = first[2]; i[2] <= last[2]; ++i[2])
    for (i[1] = first[1]; i[1] <= last[1]; ++i[1])
      for (i[0] = first[0]; i[0] <= last[0]; ++i[0]) out.push_back(lat.flat(i));
  return out;
}

// Recorded slices with time in [a, b].
std::vector<std::size_t> slices_in(const Field& u, double a, double b) {
  const double tol = 1e-9 * std::max(1.0, std::abs(b));
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < u.slices(); ++j)
    if (u.times[j] >= a - tol && u.times[j] <= b + tol) out.push_back(j);
  return out;
}

std::size_t exact_slice(const Field& u, double t) {
  const std::size_t j = u.slice_at(t);
  const double dt = u.slices() > 1 ? (u.times.back() - u.times.front()) / static_cast<double>(u.slices() - 1) : 1.0;
  if (std::abs(u.times[j] - t) > 0.5 * dt + 1e-12)
    throw GeometryError("time " + std::to_string(t) + " is outside the recorded horizon");
  return j;
}

void require_inside(const Field& u, const Cube& K, const std::string& what) {
  for (Index k : collect(u.lattice, K, false))
    if (!u.is_inside(k)) throw GeometryError(what + " is not contained in the domain");
}

double integral(const Field& u, std::size_t j, const std::vector<Index>& nodes) {
  double s = 0.0;
  for (Index k : nodes) s += u.values[j][k];
  return s * u.lattice.cell_volume();
}

double l1_term(double t_minus_s, double rho, int N, double p) {
  return std::pow(t_minus_s / std::pow(rho, supercritical_lambda(N, p)), 1.0 / (2.0 - p));
}

void check_exponent(double p) {
  if (!(p > 1.0 && p < 2.0)) throw InvalidArgument("Harnack functionals need 1 < p < 2");
}

void finish(HarnackReport& r) {
  r.slack = r.rhs - r.lhs;
  r.pass = std::isfinite(r.empirical_constant) && std::isfinite(r.slack);
}

}  // namespace

double HarnackReport::get(const std::string& key) const {
  for (const auto& [k, v] : extra)
    if (k == key) return v;
  return kNaN;
}

std::vector<Index> cube_nodes(const Lattice& lattice, const Cube& K) { return collect(lattice, K, false); }

double cube_integral(const Field& u, std::size_t slice, const Cube& K) {
  return integral(u, slice, collect(u.lattice, K, false));
}

double cube_average(const Field& u, std::size_t slice, const Cube& K) {
  const std::vector<Index> nodes = collect(u.lattice, K, false);
  if (nodes.empty()) throw GeometryError("cube contains no lattice nodes");
  return integral(u, slice, nodes) / (static_cast<double>(nodes.size()) * u.lattice.cell_volume());
}

Theta intrinsic_theta(const Field& u, const Cube& K, double s, double c, double p) {
  if (!(c > 0.0)) throw InvalidArgument("waiting-time constant c must be positive");
  const double avg = cube_average(u, exact_slice(u, s), K);
  if (!(avg > 0.0)) return Theta{std::numeric_limits<double>::infinity(), true};
  return Theta{c * std::pow(avg, 2.0 - p), false};
}

HarnackReport weak_harnack_ratio(const Field& u, const Point& y, double rho, double s, double c,
                                 double p) {
  check_exponent(p);
  if (!(rho > 0.0)) throw InvalidArgument("rho must be positive");
  const Cube K2 = make_cube(y, 2.0 * rho);
  const std::size_t js = exact_slice(u, s);
  const Theta th = intrinsic_theta(u, K2, s, c, p);
  HarnackReport r;
  if (th.infinite) {
    r.extra = {{"theta", th.value}, {"average", 0.0}};
    r.empirical_constant = 0.0;
    r.pass = false;
    return r;
  }
  require_inside(u, make_cube(y, 16.0 * rho), "K_16rho(y)");
  const double window = th.value * std::pow(rho, p);
  if (s + window > u.times.back() + 1e-12)
    throw GeometryError("s + theta rho^p exceeds the recorded horizon");
  const std::vector<std::size_t> later = slices_in(u, s + 0.75 * window, s + window);
  if (later.empty()) throw GeometryError("no recorded time in [s + 3/4 theta rho^p, s + theta rho^p]");

  const std::vector<Index> k2 = collect(u.lattice, K2, false);
  const std::vector<Index> k8 = collect(u.lattice, make_cube(y, 8.0 * rho), false);
  const double avg = integral(u, js, k2) / (static_cast<double>(k2.size()) * u.lattice.cell_volume());
  double inf2 = std::numeric_limits<double>::infinity();
  double inf8 = inf2;
  for (std::size_t j : later) {
    for (Index k : k2) inf2 = std::min(inf2, u.values[j][k]);
    for (Index k : k8) inf8 = std::min(inf8, u.values[j][k]);
  }
  // lhs: eta avg with eta = 1; rhs: the infimum.
  r.lhs = avg;
  r.rhs = inf2;
  r.empirical_constant = inf2 / avg;
  r.slack = r.rhs - r.lhs;
  r.pass = r.empirical_constant > 0.0;
  r.extra = {{"theta", th.value},
             {"average", avg},
             {"t_first", u.times[later.front()]},
             {"t_last", u.times[later.back()]},
             {"eta_K8", inf8 / avg}};
  return r;
}

HarnackReport l1_harnack_gap(const Field& u, const Point& y, double rho, double s, double t,
                             double p) {
  check_exponent(p);
  if (!(rho > 0.0) || !(t > s)) throw InvalidArgument("need rho > 0 and t > s");
  const Cube K2 = make_cube(y, 2.0 * rho);
  require_inside(u, K2, "K_2rho(y)");
  const std::vector<std::size_t> js = slices_in(u, s, t);
  if (js.empty()) throw GeometryError("no recorded time in [s, t]");
  const std::vector<Index> k1 = collect(u.lattice, make_cube(y, rho), false);
  const std::vector<Index> k2 = collect(u.lattice, K2, false);
  double sup1 = -std::numeric_limits<double>::infinity();
  double inf2 = std::numeric_limits<double>::infinity();
  for (std::size_t j : js) {
    sup1 = std::max(sup1, integral(u, j, k1));
    inf2 = std::min(inf2, integral(u, j, k2));
  }
  const double B = l1_term(t - s, rho, u.dim(), p);
  HarnackReport r;
  r.lhs = sup1;
  r.rhs = inf2 + B;
  r.empirical_constant = r.rhs > 0.0 ? sup1 / r.rhs : std::numeric_limits<double>::infinity();
  r.extra = {{"lambda", supercritical_lambda(u.dim(), p)}, {"inf_integral", inf2}, {"time_term", B}};
  finish(r);
  return r;
}

BoundarySuperSolution boundary_supersolution(const Field& u, const Point& x_o, double rho,
                                             double s, double t, double k, double p) {
  if (!(rho > 0.0) || !(t > s)) throw InvalidArgument("need rho > 0 and t > s");
  const Cube K16 = make_cube(x_o, 16.0 * rho);
  BoundarySuperSolution out;
  out.Q = make_cylinder(K16, s, 0.0, (t - s) / std::pow(16.0 * rho, p), CylinderKind::forward, p);
  Field uk = zero_extend(u, k, Sign::plus, out.Q);
  const std::vector<Index> nodes = collect(u.lattice, K16, true);
  double mu = 0.0;
  for (const auto& v : uk.values)
    for (Index n : nodes) mu = std::max(mu, v[n]);
  out.mu = mu;
  for (auto& v : uk.values) v = (mu - v.array()).matrix();
  out.v = std::move(uk);
  return out;
}

HarnackReport boundary_l1_harnack_gap(const Field& u, const Point& x_o, double rho, double s,
                                      double t, double k, double p) {
  check_exponent(p);
  const BoundarySuperSolution sup = boundary_supersolution(u, x_o, rho, s, t, k, p);
  const Field& v = sup.v;
  const std::vector<Index> k1 = collect(v.lattice, make_cube(x_o, rho), false);
  const std::vector<Index> k2 = collect(v.lattice, make_cube(x_o, 2.0 * rho), false);
  const std::size_t jt = exact_slice(v, t);
  const double It = integral(v, jt, k2);
  auto sup_over = [&](double a) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j : slices_in(v, a, t)) m = std::max(m, integral(v, j, k1));
    return m;
  };
  const double lhs = sup_over(s);
  const double lambda = supercritical_lambda(v.dim(), p);
  const double B = l1_term(t - s, rho, v.dim(), p);

  HarnackReport r;
  r.lhs = lhs;
  r.rhs = It + B;
  r.empirical_constant = r.rhs > 0.0 ? lhs / r.rhs : std::numeric_limits<double>::infinity();
  r.extra = {{"lambda", lambda}, {"mu", sup.mu}, {"integral_t", It}, {"time_term", B}};

  // Reduced form: at s_bar the time term equals It, so the full inequality
  // gives the reduced one with constant 2 gamma.
  const double s_bar = t - std::pow(It, 2.0 - p) * std::pow(rho, lambda);
  r.extra.emplace_back("s_bar", s_bar);
  if (s_bar > 0.0 && s_bar >= v.times.front() - 1e-12 && It > 0.0) {
    const double lhs_bar = sup_over(s_bar);
    r.extra.emplace_back("reduced_constant", lhs_bar / It);
    r.extra.emplace_back("full_constant_at_s_bar", lhs_bar / (2.0 * It));
  } else {
    r.extra.emplace_back("reduced_constant", kNaN);
    r.extra.emplace_back("full_constant_at_s_bar", kNaN);
  }
  finish(r);
  return r;
}

HarnackReport gradient_l1_estimate(const Field& v, const Point& x_o, double rho, double sigma,
                                   double delta, double s, double t, double p) {
  check_exponent(p);
  if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidArgument("sigma must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (!(rho > 0.0) || !(t > s)) throw InvalidArgument("need rho > 0 and t > s");
  const Lattice& lat = v.lattice;
  const std::vector<Index> ks = collect(lat, make_cube(x_o, sigma * rho), false);
  const std::vector<Index> k1 = collect(lat, make_cube(x_o, rho), false);
  const std::vector<std::size_t> js = slices_in(v, s, t);
  if (js.empty()) throw GeometryError("no recorded time in [s, t]");

  auto grad_term = [&](std::size_t j) {
    double sum = 0.0;
    for (Index k : ks) {
      const MultiIndex i = lat.unflat(k);
      double g2 = 0.0;
      for (int a = 0; a < lat.dim; ++a) {
        MultiIndex n = i;
        ++n[a];
        double d = 0.0;
        if (lat.in_range(n)) {
          d = v.values[j][lat.flat(n)] - v.values[j][k];
        } else {
          n[a] -= 2;
          d = v.values[j][k] - v.values[j][lat.flat(n)];
        }
        g2 += d * d;
      }
      sum += std::pow(std::sqrt(g2) / lat.h, p - 1.0);
    }
    return sum * lat.cell_volume();
  };
  // Trapezoid rule over the recorded slices.
  double lhs = 0.0;
  double supv = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < js.size(); ++n) {
    supv = std::max(supv, integral(v, js[n], k1));
    if (n > 0) lhs += 0.5 * (v.times[js[n]] - v.times[js[n - 1]]) * (grad_term(js[n]) + grad_term(js[n - 1]));
  }
  lhs /= rho;
  const double B = l1_term(t - s, rho, v.dim(), p);
  const double weight = 1.0 / std::pow(delta * delta * std::pow(1.0 - sigma, p), (p - 1.0) / (2.0 - p));

  HarnackReport r;
  r.lhs = lhs;
  r.rhs = delta * supv + weight * B;
  r.empirical_constant = std::max(0.0, lhs - delta * supv) / (weight * B);
  r.extra = {{"sup_integral", supv}, {"time_term", B}, {"weight", weight}};
  finish(r);
  return r;
}

HarnackReport density_lower_bound(const BoundarySuperSolution& sup, double delta_rho,
                                  const Point& x_o, double rho, double t_o, double c, double p) {
  check_exponent(p);
  if (!(delta_rho >= 0.0 && delta_rho <= 1.0)) throw InvalidArgument("delta must lie in [0,1]");
  const Field& v = sup.v;
  const Cube K2 = make_cube(x_o, 2.0 * rho);
  const std::vector<Index> k2 = collect(v.lattice, K2, false);
  const double avg = cube_average(v, exact_slice(v, t_o), K2);
  const double theta = c * std::pow(avg, 2.0 - p);
  const double window = theta * std::pow(rho, p);
  const double lhs = sup.mu * std::pow(delta_rho, 1.0 / (p - 1.0));
  double inf2 = std::numeric_limits<double>::infinity();
  for (std::size_t j : slices_in(v, t_o + 0.75 * window, t_o + window))
    for (Index k : k2) inf2 = std::min(inf2, v.values[j][k]);

  HarnackReport r;
  r.lhs = lhs;
  r.rhs = avg;
  r.empirical_constant = avg > 0.0 ? lhs / avg : std::numeric_limits<double>::infinity();
  r.extra = {{"theta", theta},
             {"gamma2", std::isfinite(inf2) && inf2 > 0.0 ? lhs / inf2 : kNaN},
             {"fits_cylinder", (t_o - window >= sup.Q.t_lo() && t_o + window <= sup.Q.t_hi()) ? 1.0 : 0.0}};
  finish(r);
  return r;
}

}  // namespace plw
