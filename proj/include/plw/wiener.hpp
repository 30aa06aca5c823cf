#pragma once

#include <functional>
#include <string>
#include <vector>

#include "plw/capacity.hpp"
#include "plw/geometry.hpp"

namespace plw {

struct ModulusParams {
  int N = 2;
  double p = 1.8;
  double gamma2 = 2.0;
  double c = 0.5;
  double nu = 0.5;

  double lambda_bar() const { return 1.0 - 1.0 / (4.0 * gamma2); }
  double alpha() const { return p / ((p - 2.0) * std::log(lambda_bar()) / std::log(2.0) + p); }
  double gamma() const { return std::exp2((N - p) / (p - 1.0)); }
};

ModulusParams make_modulus_params(int N, double p, double gamma2 = 2.0, double c = 0.5,
                                  double nu = 0.5);

// A = delta^{1/(p-1)} / (4 gamma2).
double weight_A(double delta, double gamma2, double p);

// decay:     omega_{j+1} = (1 - A_j) omega_j
// boundary:  omega_{j+1} = 2 g_osc_j (the data oscillation dominates)
// saturated: 2 g_osc_j > omega_j, omega_{j+1} = omega_j (nested cylinders
//            cannot carry a larger oscillation)
enum class Branch { decay, boundary, saturated };
const char* branch_name(Branch b);

struct OscillationTrace {
  std::vector<double> r;        // r_j = R_o / 2^j, j < m
  std::vector<double> delta;
  std::vector<double> A;
  std::vector<double> omega;    // m + 1 entries, omega[0] = omega_o
  std::vector<double> g_osc;
  std::vector<Branch> branch;
  double product_bound = 0.0;   // omega_o exp(-sum A) + 2 max g_osc
  ModulusParams params;

  std::size_t steps() const { return A.size(); }
  // Nested cylinders built from omega_0..omega_{m-1} around (x_o, t_o).
  std::vector<Cylinder> cylinders(const Point& x_o, double t_o, double R_o) const;
};

// omega_o must lie in (0, 1] (NormalizationError otherwise).
OscillationTrace oscillation_iteration(double omega_o, const std::vector<double>& delta,
                                       const std::vector<double>& g_osc,
                                       const ModulusParams& params, double R_o = 1.0);

using DensityProfile = std::function<double(double)>;

// sum_j A(delta_j).
double wiener_sum(const std::vector<double>& delta, double p, double gamma2);

// int_{rho_lo}^{rho_hi} A(delta(s)) ds / s by adaptive Simpson in log s.
// ToleranceError when the requested accuracy is not reached.
double wiener_integral(const DensityProfile& delta, double rho_lo, double rho_hi, double p,
                       double gamma2, double tol = 1e-12);

// Piecewise constant profile: delta_j on (r / 2^{j+1}, r / 2^j]; the last
// value extends to 0 and the first one above r.
DensityProfile dyadic_profile(double r, const std::vector<double>& delta);

struct ComparabilityReport {
  double integral = 0.0;     // over [2^{-m} r, r]
  double sum = 0.0;          // sum_{j<m} A(2^{-j} r)
  double gamma = 0.0;        // 2^{(N-p)/(p-1)}
  bool comparable = true;    // A(s) <= gamma A(2y) on all sampled s in (y, 2y)
  bool integral_within = true;  // integral <= gamma * sum
};

ComparabilityReport check_dyadic_comparability(const DensityProfile& delta, double r, int m,
                                               const ModulusParams& params,
                                               int samples_per_scale = 16);

struct ModulusResult {
  double bound = 0.0;
  double decay_term = 0.0;   // omega_o exp{-(1-nu)/gamma^2 int_{rho^alpha}^1 A ds/s}
  double g_term = 0.0;       // 2 g_osc(Q~_o(rho))
  double integral = 0.0;
  double omega_bar = 0.0;    // at rho^alpha
  double r = 0.0;            // [omega_bar(rho^alpha)]^nu
  Cylinder cylinder;         // Q~_o(rho)
  bool r_exceeds_R_o = false;
};

using CylinderOscillation = std::function<double(const Cylinder&)>;

ModulusResult modulus_bound(double omega_o, const DensityProfile& delta,
                            const CylinderOscillation& g_osc, double rho,
                            const ModulusParams& params, double R_o, const Point& x_o,
                            double t_o = 0.0);

// Euclidean diameter of K x [t_lo, t_hi] in space-time.
double cylinder_diameter(const Cylinder& Q);

double holder_exponent(double gamma_o, const ModulusParams& params);

enum class WienerLabel { wiener, non_wiener_evidence, inconclusive };
const char* label_name(WienerLabel l);

struct WienerOptions {
  double gamma2 = 2.0;
  int cells_per_rho = 16;        // re-rasterization of analytic shapes
  double cauchy_tol = 0.05;      // tail / total below this: non-wiener evidence
  double floor_ratio = 0.1;      // min tail increment / max increment for wiener
  CapacityOptions capacity;
};

struct WienerClassification {
  WienerLabel label = WienerLabel::inconclusive;
  double slope = 0.0;            // least-squares slope of S_k over the last half
  double tail = 0.0;             // sum of A over the last half
  std::vector<double> scales;
  std::vector<double> delta;
  std::vector<double> A;
  std::vector<double> partial_sums;
  bool analytic = false;         // delta from re-rasterized analytic shape
};

// delta at rho_top / 2^k, k < count (count >= 6). Uses E.shape when present,
// otherwise E's raster (ResolutionError below 8 cells per rho).
WienerClassification classify_wiener_point(const GridDomain& E, const Point& x_o, double p,
                                           double rho_top, int count,
                                           const WienerOptions& options = {});

// Label from given density values (no capacity solves).
WienerClassification classify_from_densities(const std::vector<double>& scales,
                                             const std::vector<double>& delta, double p,
                                             const WienerOptions& options = {});

}  // namespace plw
