#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "plw/geometry.hpp"
#include "plw/pde.hpp"

namespace plw {

// Configured constants; the inequalities only assert that some exist.
struct HarnackConstants {
  double c = 0.5;            // waiting-time constant
  double eta = 0.5;
  double gamma = 1.0;
  double gamma1 = 2.0;
  double gamma2 = 2.0;
  double delta_lemma = 0.5;
};

// lhs <= rhs is the inequality with the constant set to 1; empirical_constant
// is the smallest constant for which it holds on this instance.
struct HarnackReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double empirical_constant = 0.0;
  bool pass = false;
  std::vector<std::pair<std::string, double>> extra;

  double get(const std::string& key) const;  // NaN when absent
};

// theta = c avg^{2-p}; avg <= 0 yields an infinite waiting time.
struct Theta {
  double value = 0.0;
  bool infinite = false;
};

inline double supercritical_lambda(int N, double p) { return N * (p - 2.0) + p; }

// Nodes of the lattice in the closed cube. GeometryError if the cube leaves it.
std::vector<Index> cube_nodes(const Lattice& lattice, const Cube& K);
// h^N * sum over cube_nodes at one slice.
double cube_integral(const Field& u, std::size_t slice, const Cube& K);
double cube_average(const Field& u, std::size_t slice, const Cube& K);

Theta intrinsic_theta(const Field& u, const Cube& K, double s, double c, double p);

// inf_{K_2rho(y)} u(., t) / avg_{K_2rho(y)} u(., s) minimized over recorded
// t in [s + 3/4 theta rho^p, s + theta rho^p]. Requires K_16rho(y) inside E
// and s + theta rho^p within the recorded horizon (GeometryError).
HarnackReport weak_harnack_ratio(const Field& u, const Point& y, double rho, double s, double c,
                                 double p);

// sup_{s<tau<t} int_{K_rho} u <= g inf_{s<tau<t} int_{K_2rho} u + g ((t-s)/rho^lambda)^{1/(2-p)}.
HarnackReport l1_harnack_gap(const Field& u, const Point& y, double rho, double s, double t,
                             double p);

// v = mu - u_k on Q = K_16rho(x_o) x [s, t], u_k the zero extension of (u-k)_+.
struct BoundarySuperSolution {
  Field v;
  double mu = 0.0;
  Cylinder Q;
};

BoundarySuperSolution boundary_supersolution(const Field& u, const Point& x_o, double rho,
                                             double s, double t, double k, double p);

// sup_{s<tau<t} int_{K_rho} v <= g int_{K_2rho} v(., t) + g ((t-s)/rho^lambda)^{1/(2-p)},
// plus the reduced form at s_bar = t - [int_{K_2rho} v(., t)]^{2-p} rho^lambda.
HarnackReport boundary_l1_harnack_gap(const Field& u, const Point& x_o, double rho, double s,
                                      double t, double k, double p);

// (1/rho) int_s^t int_{K_sigma rho} |Dv|^{p-1} <= delta sup int_{K_rho} v
//     + g / [delta^2 (1-sigma)^p]^{(p-1)/(2-p)} ((t-s)/rho^lambda)^{1/(2-p)}.
HarnackReport gradient_l1_estimate(const Field& v, const Point& x_o, double rho, double sigma,
                                   double delta, double s, double t, double p);

// mu delta^{1/(p-1)} against the average and the later infimum of v on K_2rho:
// empirical gamma_1 (constant) and gamma_2 (extra "gamma2").
HarnackReport density_lower_bound(const BoundarySuperSolution& sup, double delta_rho,
                                  const Point& x_o, double rho, double t_o, double c, double p);

}  // namespace plw
