#include "plw/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace plw {

ModulusParams make_modulus_params(int N, double p, double gamma2, double c, double nu) {
  if (N < 1 || N > kMaxDim) throw InvalidArgument("dimension must be 1, 2 or 3");
  if (!(p > 1.0 && p < 2.0)) throw InvalidArgument("modulus formula needs 1 < p < 2");
  if (!(gamma2 > 1.0)) throw InvalidArgument("gamma2 must exceed 1");
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("c must lie in (0,1)");
  if (!(nu > 0.0 && nu < 1.0)) throw InvalidArgument("nu must lie in (0,1)");
  ModulusParams m;
  m.N = N;
  m.p = p;
  m.gamma2 = gamma2;
  m.c = c;
  m.nu = nu;
  return m;
}

double weight_A(double delta, double gamma2, double p) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("density must lie in [0,1]");
  if (!(gamma2 > 1.0)) throw InvalidArgument("gamma2 must exceed 1");
  if (!(p > 1.0 && p < 2.0)) throw InvalidArgument("weight needs 1 < p < 2");
  return std::pow(delta, 1.0 / (p - 1.0)) / (4.0 * gamma2);
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::decay: return "decay";
    case Branch::boundary: return "boundary";
    case Branch::saturated: return "saturated";
  }
  return "?";
}

std::vector<Cylinder> OscillationTrace::cylinders(const Point& x_o, double t_o, double R_o) const {
  std::vector<double> w(omega.begin(), omega.begin() + static_cast<std::ptrdiff_t>(steps()));
  return nested_cylinders(x_o, t_o, R_o, w, params.c, params.p);
}

OscillationTrace oscillation_iteration(double omega_o, const std::vector<double>& delta,
                                       const std::vector<double>& g_osc,
                                       const ModulusParams& params, double R_o) {
  if (!(omega_o > 0.0)) throw InvalidArgument("omega_o must be positive");
  if (omega_o > 1.0) throw NormalizationError("omega_o > 1: rescale u so that its oscillation is at most 1");
  if (delta.size() != g_osc.size()) throw InvalidArgument("delta and g_osc sequences differ in length");
  if (!(R_o > 0.0)) throw InvalidArgument("R_o must be positive");
  OscillationTrace tr;
  tr.params = params;
  tr.omega.push_back(omega_o);
  double sumA = 0.0;
  double gmax = 0.0;
  double r = R_o;
  for (std::size_t j = 0; j < delta.size(); ++j) {
    if (!(g_osc[j] >= 0.0)) throw InvalidArgument("data oscillations must be nonnegative");
    const double A = weight_A(delta[j], params.gamma2, params.p);
    const double w = tr.omega.back();
    const double decay = (1.0 - A) * w;
    const double data = 2.0 * g_osc[j];
    double next = decay;
    Branch b = Branch::decay;
    if (data > w) {
      next = w;
      b = Branch::saturated;
    } else if (data > decay) {
      next = data;
      b = Branch::boundary;
    }
    tr.r.push_back(r);
    tr.delta.push_back(delta[j]);
    tr.A.push_back(A);
    tr.g_osc.push_back(g_osc[j]);
    tr.branch.push_back(b);
    tr.omega.push_back(next);
    sumA += A;
    gmax = std::max(gmax, g_osc[j]);
    r *= 0.5;
  }
  tr.product_bound = omega_o * std::exp(-sumA) + 2.0 * gmax;
  return tr;
}

double wiener_sum(const std::vector<double>& delta, double p, double gamma2) {
  double s = 0.0;
  for (double d : delta) s += weight_A(d, gamma2, p);
  return s;
}

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double tol;
  int max_depth;
  bool failed = false;
  double worst = 0.0;

  double rec(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
    if (depth >= max_depth) {
      failed = true;
      worst = std::max(worst, std::abs(diff));
      return left + right + diff / 15.0;
    }
    return rec(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) + rec(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }

  double run(double a, double b) {
    // Endpoints are sampled just inside the panel.
    const double eta = 1e-12 * (b - a);
    const double fa = f(a + eta);
    const double fb = f(b - eta);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, tol, 0);
  }
};

}  // namespace

double wiener_integral(const DensityProfile& delta, double rho_lo, double rho_hi, double p,
                       double gamma2, double tol) {
  if (!(rho_lo > 0.0) || !(rho_hi >= rho_lo)) throw InvalidArgument("need 0 < rho_lo <= rho_hi");
  if (rho_hi == rho_lo) return 0.0;
  const std::function<double(double)> f = [&](double u) { return weight_A(delta(std::exp(u)), gamma2, p); };
  Simpson s{f, tol, 48};
  const double a = std::log(rho_lo);
  const double b = std::log(rho_hi);
  // Panels end on rho_hi / 2^k, where dyadic step profiles jump.
  const double step = std::log(2.0);
  double total = 0.0;
  for (double hi = b; hi > a; hi -= step) total += s.run(std::max(a, hi - step), hi);
  if (s.failed) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "Wiener integral did not reach tolerance %.3g", tol);
    throw ToleranceError(msg, s.worst);
  }
  return total;
}

DensityProfile dyadic_profile(double r, const std::vector<double>& delta) {
  if (!(r > 0.0)) throw InvalidArgument("profile scale must be positive");
  if (delta.empty()) throw InvalidArgument("profile needs at least one value");
  return [r, delta](double s) {
    if (s >= r) return delta.front();
    const double k = std::floor(std::log2(r / s));
    // s in (r/2^{j+1}, r/2^j] has log2(r/s) in [j, j+1).
    std::size_t j = static_cast<std::size_t>(std::max(0.0, k));
    if (std::exp2(-static_cast<double>(j)) * r == s && j > 0) --j;
    return delta[std::min(j, delta.size() - 1)];
  };
}

ComparabilityReport check_dyadic_comparability(const DensityProfile& delta, double r, int m,
                                               const ModulusParams& params,
                                               int samples_per_scale) {
  if (m < 1) throw InvalidArgument("need at least one dyadic scale");
  ComparabilityReport rep;
  rep.gamma = params.gamma();
  const double slack = 1e-12;
  for (int j = 0; j < m; ++j) {
    const double top = r * std::exp2(-j);
    const double A_top = weight_A(delta(top), params.gamma2, params.p);
    rep.sum += A_top;
    const double y = 0.5 * top;
    for (int i = 1; i <= samples_per_scale; ++i) {
      const double s = y * (1.0 + static_cast<double>(i) / (samples_per_scale + 1));
      if (weight_A(delta(s), params.gamma2, params.p) > rep.gamma * A_top * (1.0 + slack) + slack)
        rep.comparable = false;
    }
  }
  rep.integral = wiener_integral(delta, r * std::exp2(-m), r, params.p, params.gamma2, 1e-10);
  rep.integral_within = rep.integral <= rep.gamma * rep.sum * (1.0 + 1e-9) + 1e-12;
  return rep;
}

double cylinder_diameter(const Cylinder& Q) {
  const double e = Q.base.edge();
  return std::sqrt(Q.base.dim() * e * e + Q.duration() * Q.duration());
}

ModulusResult modulus_bound(double omega_o, const DensityProfile& delta,
                            const CylinderOscillation& g_osc, double rho,
                            const ModulusParams& params, double R_o, const Point& x_o, double t_o) {
  if (!(omega_o > 0.0)) throw InvalidArgument("omega_o must be positive");
  if (omega_o > 1.0) throw NormalizationError("omega_o > 1: rescale u so that its oscillation is at most 1");
  if (!(rho > 0.0 && rho < R_o)) throw InvalidArgument("rho must lie in (0, R_o)");
  if (!(rho < 1.0)) throw InvalidArgument("rho must lie below 1");
  const double p = params.p;
  const double ra = std::pow(rho, params.alpha());
  const double g = params.gamma();
  ModulusResult res;
  res.integral = wiener_integral(delta, ra, 1.0, p, params.gamma2);
  res.decay_term = omega_o * std::exp(-(1.0 - params.nu) / (g * g) * res.integral);
  res.omega_bar = std::exp(-res.integral / g);
  res.r = std::pow(res.omega_bar, params.nu);
  res.r_exceeds_R_o = res.r > R_o;
  const double theta = params.c * std::pow(omega_o, 2.0 - p);
  // Base K_{2r}: the cylinder scale is already (2r)^p.
  res.cylinder = make_cylinder(make_cube(x_o, 2.0 * res.r), t_o, 2.0 * theta, theta,
                               CylinderKind::centered, p);
  res.g_term = g_osc ? 2.0 * g_osc(res.cylinder) : 0.0;
  res.bound = res.decay_term + res.g_term;
  return res;
}

double holder_exponent(double gamma_o, const ModulusParams& params) {
  if (!(gamma_o >= 0.0 && gamma_o <= 1.0)) throw InvalidArgument("gamma_o must lie in [0,1]");
  const double g = params.gamma();
  return params.alpha() * (1.0 - params.nu) * std::pow(gamma_o, 1.0 / (params.p - 1.0)) /
         (4.0 * params.gamma2 * g * g);
}

const char* label_name(WienerLabel l) {
  switch (l) {
    case WienerLabel::wiener: return "wiener";
    case WienerLabel::non_wiener_evidence: return "non-wiener-evidence";
    case WienerLabel::inconclusive: return "inconclusive";
  }
  return "?";
}

WienerClassification classify_from_densities(const std::vector<double>& scales,
                                             const std::vector<double>& delta, double p,
                                             const WienerOptions& options) {
  if (scales.size() != delta.size()) throw InvalidArgument("scales and densities differ in length");
  if (delta.size() < 6) throw ResolutionError("Wiener classification needs at least 6 dyadic scales");
  WienerClassification out;
  out.scales = scales;
  out.delta = delta;
  double s = 0.0;
  for (double d : delta) {
    out.A.push_back(weight_A(d, options.gamma2, p));
    s += out.A.back();
    out.partial_sums.push_back(s);
  }
  const std::size_t n = delta.size();
  const std::size_t half = n / 2;
  out.tail = std::accumulate(out.A.begin() + static_cast<std::ptrdiff_t>(half), out.A.end(), 0.0);

  // Least-squares slope of S_k against k over the last half.
  double kb = 0.0;
  double sb = 0.0;
  for (std::size_t k = half; k < n; ++k) {
    kb += static_cast<double>(k);
    sb += out.partial_sums[k];
  }
  const double cnt = static_cast<double>(n - half);
  kb /= cnt;
  sb /= cnt;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = half; k < n; ++k) {
    num += (static_cast<double>(k) - kb) * (out.partial_sums[k] - sb);
    den += (static_cast<double>(k) - kb) * (static_cast<double>(k) - kb);
  }
  out.slope = den > 0.0 ? num / den : 0.0;

  const double total = out.partial_sums.back();
  const double amax = *std::max_element(out.A.begin(), out.A.end());
  const double tail_min = *std::min_element(out.A.begin() + static_cast<std::ptrdiff_t>(half), out.A.end());
  if (total == 0.0 || out.tail <= options.cauchy_tol * total) {
    out.label = WienerLabel::non_wiener_evidence;
  } else if (out.slope > 0.0 && tail_min >= options.floor_ratio * amax) {
    out.label = WienerLabel::wiener;
  } else {
    out.label = WienerLabel::inconclusive;
  }
  return out;
}

WienerClassification classify_wiener_point(const GridDomain& E, const Point& x_o, double p,
                                           double rho_top, int count, const WienerOptions& options) {
  if (count < 6) throw ResolutionError("Wiener classification needs at least 6 dyadic scales");
  if (!(rho_top > 0.0)) throw InvalidArgument("top scale must be positive");
  std::vector<double> scales;
  std::vector<double> delta;
  for (int k = 0; k < count; ++k) {
    const double rho = rho_top * std::exp2(-k);
    scales.push_back(rho);
    if (E.shape)
      delta.push_back(capacity_density(E.shape, E.dim(), x_o, rho, p, options.cells_per_rho, options.capacity).delta);
    else
      delta.push_back(capacity_density(E, x_o, rho, p, options.capacity).delta);
  }
  WienerClassification out = classify_from_densities(scales, delta, p, options);
  out.analytic = static_cast<bool>(E.shape);
  return out;
}

}  // namespace plw
