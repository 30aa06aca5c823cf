#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plw/capacity.hpp"
#include "plw/geometry.hpp"
#include "plw/pde.hpp"
#include "plw/wiener.hpp"

namespace plw {

struct ExperimentConfig {
  std::string domain = "square_with_corner";   // benchmark name
  std::optional<GridDomain> raster;            // overrides `domain` when set
  BenchmarkParams geometry;

  FluxKind flux = FluxKind::prototype;
  double p = 1.8;
  double C_o = 1.0;
  double C_1 = 1.0;
  double Lambda = 0.0;
  std::string g = "(x^2+y^2+z^2)/2";
  std::string initial;                         // empty: g at t = 0

  Point point;                                 // feature point; origin when empty
  double t_o = -1.0;                           // < 0: final time
  double R_o = 0.5;
  int scales = 4;                              // rho_k = R_o / 2^k, k = 1..scales
  int wiener_scales = 6;

  ModulusParams constants;                     // N and p are taken from the run
  std::vector<double> gamma2_grid{1.5, 2.0, 4.0, 8.0};
  std::vector<double> c_grid{0.25, 0.5, 0.75};

  SolverControls solver = [] {
    SolverControls s;
    s.T = 0.5;
    s.dt = 0.05;
    return s;
  }();
  WienerOptions wiener;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ScaleRow {
  double rho = 0.0;
  double delta = 0.0;          // at the feature point, scale rho
  double A = 0.0;
  double bound = 0.0;          // modulus_bound with the reported constants
  double measured = 0.0;       // osc over Q_rho(omega_o) cap E_T
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t nodes = 0;       // space-time samples in the measurement
  bool r_exceeds_R_o = false;
  bool ok = true;
  std::string failure;
};

struct ExperimentReport {
  std::string domain;
  Point feature;
  Point probe;                 // nearest lateral-boundary node of the raster
  double t_o = 0.0;
  double omega_o = 0.0;
  double data_scale = 1.0;     // oscillations are reported multiplied by this
  std::vector<ScaleRow> rows;
  double measured_slope = 0.0; // NaN when fewer than two positive oscillations
  double bound_slope = 0.0;
  bool bound_holds = false;    // measured <= bound at every resolved scale
  bool decay_dominates = false;  // measured slope >= bound slope
  bool pass = false;
  double best_gamma2 = 0.0;
  double best_c = 0.0;
  ModulusParams constants;
  WienerClassification classification;
  SolveStats solve;
  double seconds = 0.0;
  std::vector<std::string> failures;
};

// Solves, measures the oscillation over the intrinsic cylinders at the probe,
// evaluates the modulus bound on the (gamma2, c) grid and classifies the
// feature point. Failures of single stages are reported, not thrown, except
// configuration errors.
ExperimentReport run_verification(const ExperimentConfig& config);

void write_report_csv(std::ostream& os, const ExperimentReport& report);
void write_report_json(std::ostream& os, const ExperimentReport& report);

struct PropertyEntry {
  std::string module;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct PropertyLedger {
  std::vector<PropertyEntry> entries;
  bool all_pass() const;
  int failures() const;
};

enum class SuiteSize { small, medium };

struct SuiteOptions {
  std::uint64_t seed = 0;
  SuiteSize size = SuiteSize::small;
  bool tamper_recursion = false;   // negate A in the recursion checks
};

PropertyLedger run_property_suite(const SuiteOptions& options);
void write_ledger(std::ostream& os, const PropertyLedger& ledger);

// Fits log(y) = a + slope log(x) over entries with x, y > 0.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace plw
