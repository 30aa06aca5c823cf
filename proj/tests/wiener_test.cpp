#include <doctest.h>

#include <cmath>
#include <random>

#include "plw/wiener.hpp"

using namespace plw;

TEST_CASE("constants of the modulus") {
  const ModulusParams P = make_modulus_params(2, 1.8, 2.0, 0.5, 0.5);
  CHECK(P.lambda_bar() == doctest::Approx(7.0 / 8.0));
  CHECK(P.alpha() == doctest::Approx(1.8 / (-0.2 * std::log2(7.0 / 8.0) + 1.8)));
  CHECK(P.alpha() > 0.0);
  CHECK(P.alpha() < 1.0);
  CHECK(P.gamma() == doctest::Approx(std::pow(2.0, 0.2 / 0.8)));
  CHECK(weight_A(1.0, 2.0, 1.8) == doctest::Approx(1.0 / 8.0));
  CHECK(weight_A(0.5, 2.0, 1.5) == doctest::Approx(0.25 / 8.0));
  CHECK(weight_A(0.0, 2.0, 1.5) == 0.0);

  CHECK_THROWS_AS(make_modulus_params(2, 2.0), InvalidArgument);
  CHECK_THROWS_AS(make_modulus_params(2, 1.8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_modulus_params(2, 1.8, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(make_modulus_params(2, 1.8, 2.0, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("oscillation recursion branches") {
  const ModulusParams P = make_modulus_params(2, 1.5, 2.0);
  // A = 1/8 for delta = 1
  const OscillationTrace tr = oscillation_iteration(0.8, {1.0, 1.0, 1.0, 0.0}, {0.0, 0.36, 0.5, 0.0}, P, 0.5);
  REQUIRE(tr.steps() == 4);
  CHECK(tr.branch[0] == Branch::decay);
  CHECK(tr.omega[1] == doctest::Approx(0.7));
  // 2 g = 0.72 > omega = 0.7
  CHECK(tr.branch[1] == Branch::saturated);
  CHECK(tr.omega[2] == doctest::Approx(0.7));
  // 2 g = 1.0 > omega
  CHECK(tr.branch[2] == Branch::saturated);
  CHECK(tr.omega[3] == doctest::Approx(0.7));
  CHECK(tr.omega[4] == doctest::Approx(0.7));
  CHECK(tr.r[0] == doctest::Approx(0.5));
  CHECK(tr.r[3] == doctest::Approx(0.0625));
  CHECK(tr.product_bound == doctest::Approx(0.8 * std::exp(-0.375) + 1.0));

  const OscillationTrace b = oscillation_iteration(0.8, {1.0}, {0.36}, P);
  CHECK(b.branch[0] == Branch::boundary);
  CHECK(b.omega[1] == doctest::Approx(0.72));
  CHECK(std::string(branch_name(Branch::boundary)) == "boundary");

  CHECK_THROWS_AS(oscillation_iteration(1.5, {1.0}, {0.0}, P), NormalizationError);
  CHECK_THROWS_AS(oscillation_iteration(0.5, {1.0}, {}, P), InvalidArgument);
  CHECK_THROWS_AS(oscillation_iteration(0.5, {1.0}, {-0.1}, P), InvalidArgument);
}

TEST_CASE("recursion invariants on random traces") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const ModulusParams P = make_modulus_params(2, 1.1 + 0.85 * U(rng), 1.1 + 6.9 * U(rng));
    const int m = 1 + static_cast<int>(20 * U(rng));
    const double w0 = 1e-3 + U(rng) * (1 - 1e-3);
    std::vector<double> d;
    std::vector<double> g;
    for (int j = 0; j < m; ++j) {
      d.push_back(U(rng));
      g.push_back(U(rng) < 0.3 ? 0.5 * w0 * U(rng) : 0.0);
    }
    const OscillationTrace tr = oscillation_iteration(w0, d, g, P);
    for (int j = 0; j < m; ++j) CHECK(tr.omega[j + 1] <= tr.omega[j]);
    for (int l = 0; l <= m; ++l) CHECK(tr.omega[l] >= std::pow(P.lambda_bar(), l) * w0 * (1 - 1e-14));
    CHECK(tr.omega.back() <= tr.product_bound);
  }
}

TEST_CASE("cylinders of a trace are nested") {
  const ModulusParams P = make_modulus_params(2, 1.8);
  const OscillationTrace tr = oscillation_iteration(1.0, std::vector<double>(6, 0.7), std::vector<double>(6, 0.0), P);
  const auto Qs = tr.cylinders(Point::Zero(2), 1.0, 0.5);
  REQUIRE(Qs.size() == 6);
  for (std::size_t j = 1; j < Qs.size(); ++j) CHECK(Qs[j - 1].contains(Qs[j]));
  CHECK(Qs[0].base.half_edge == doctest::Approx(0.5));
}

TEST_CASE("Wiener integral of simple profiles") {
  const double p = 1.8;
  // constant: A ln(hi / lo)
  const double A = weight_A(0.3, 2.0, p);
  CHECK(wiener_integral([](double) { return 0.3; }, 1e-4, 0.5, p, 2.0) ==
        doctest::Approx(A * std::log(0.5 / 1e-4)).epsilon(1e-12));

  // dyadic steps: ln 2 sum_j A_j
  const std::vector<double> deltas{0.9, 0.1, 0.5, 0.0, 0.7, 0.2};
  const DensityProfile prof = dyadic_profile(0.5, deltas);
  CHECK(prof(0.4) == 0.9);
  CHECK(prof(0.2) == 0.1);
  CHECK(prof(0.9) == 0.9);
  CHECK(prof(1e-9) == 0.2);
  const double I = wiener_integral(prof, 0.5 / 64, 0.5, p, 2.0);
  CHECK(I == doctest::Approx(std::log(2.0) * wiener_sum(deltas, p, 2.0)).epsilon(1e-10));

  // smooth profile: delta(s) = s gives int s^{1/(p-1)} ds / s / (4 gamma2)
  const double q = 1.0 / (p - 1);
  const double exact = (std::pow(0.5, q) - std::pow(0.01, q)) / q / 8.0;
  CHECK(wiener_integral([](double s) { return s; }, 0.01, 0.5, p, 2.0) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("dyadic comparability") {
  const ModulusParams P = make_modulus_params(2, 1.8);
  const ComparabilityReport c = check_dyadic_comparability([](double s) { return 0.4 + 0.5 * s; }, 0.5,
                                                           6, P);
  CHECK(c.comparable);
  CHECK(c.integral_within);
  CHECK(c.integral <= c.gamma * c.sum);
  CHECK(c.gamma == doctest::Approx(P.gamma()));
}

TEST_CASE("modulus bound for constant density") {
  const ModulusParams P = make_modulus_params(2, 1.8);
  const double go = 0.5;
  const double beta = holder_exponent(go, P);
  const double A = weight_A(go, P.gamma2, P.p);
  const double g = P.gamma();
  CHECK(beta == doctest::Approx(P.alpha() * (1 - P.nu) * A / (g * g)));
  for (double rho : {0.25, 1.0 / 64, 1e-4}) {
    const ModulusResult r = modulus_bound(0.8, [=](double) { return go; }, nullptr, rho, P, 1.0, Point::Zero(2));
    CHECK(r.integral == doctest::Approx(-A * P.alpha() * std::log(rho)).epsilon(1e-12));
    CHECK(r.decay_term == doctest::Approx(0.8 * std::pow(rho, beta)).epsilon(1e-12));
    CHECK(r.g_term == 0.0);
    CHECK(r.bound == r.decay_term);
    CHECK(r.r == doctest::Approx(std::pow(std::exp(-r.integral / g), P.nu)));
  }
  CHECK(holder_exponent(0.0, P) == 0.0);
  CHECK(holder_exponent(0.2, P) < holder_exponent(0.6, P));
  CHECK_THROWS_AS(holder_exponent(1.5, P), InvalidArgument);
}

TEST_CASE("modulus bound without density") {
  const ModulusParams P = make_modulus_params(2, 1.8);
  double seen = 0.0;
  const ModulusResult r = modulus_bound(
      0.5, [](double) { return 0.0; }, [&](const Cylinder& Q) { return seen = Q.base.half_edge; }, 0.01, P, 0.5,
      Point::Zero(2), 0.3);
  CHECK(r.integral == 0.0);
  CHECK(r.decay_term == 0.5);
  CHECK(r.r == doctest::Approx(1.0));
  CHECK(r.r_exceeds_R_o);
  CHECK(seen == doctest::Approx(2.0));
  CHECK(r.g_term == doctest::Approx(4.0));
  const double theta = P.c * std::pow(0.5, 2 - P.p);
  CHECK(r.cylinder.t_hi() == doctest::Approx(0.3 + theta * std::pow(2.0, P.p)));
  CHECK(r.cylinder.t_lo() == doctest::Approx(0.3 - 2 * theta * std::pow(2.0, P.p)));
  CHECK(cylinder_diameter(r.cylinder) > 4.0);

  CHECK_THROWS_AS(modulus_bound(0.5, [](double) { return 0.0; }, nullptr, 0.6, P, 0.5, Point::Zero(2)),
                  InvalidArgument);
  CHECK_THROWS_AS(modulus_bound(2.0, [](double) { return 0.0; }, nullptr, 0.1, P, 0.5, Point::Zero(2)),
                  NormalizationError);
}

TEST_CASE("cylinder diameter") {
  const Cylinder Q = make_cylinder(make_cube(Point::Zero(2), 0.5), 0.0, 0.0, 1.0, CylinderKind::forward, 2.0);
  // edge 1 per axis, duration 1/4
  CHECK(cylinder_diameter(Q) == doctest::Approx(std::sqrt(2.0 + 1.0 / 16)));
}

TEST_CASE("classification from densities") {
  const double p = 1.8;
  std::vector<double> scales;
  for (int k = 0; k < 8; ++k) scales.push_back(std::exp2(-k));

  const WienerClassification flat = classify_from_densities(scales, std::vector<double>(8, 0.5), p);
  CHECK(flat.label == WienerLabel::wiener);
  CHECK(flat.slope == doctest::Approx(weight_A(0.5, 2.0, p)));
  CHECK(flat.partial_sums.back() == doctest::Approx(8 * weight_A(0.5, 2.0, p)));

  std::vector<double> decaying;
  for (int k = 0; k < 8; ++k) decaying.push_back(0.5 * std::pow(0.01, k));
  CHECK(classify_from_densities(scales, decaying, p).label == WienerLabel::non_wiener_evidence);
  CHECK(classify_from_densities(scales, std::vector<double>(8, 0.0), p).label == WienerLabel::non_wiener_evidence);

  const std::vector<double> mixed{1, 1, 1, 1, 0.2, 0.2, 0.2, 0.001};
  CHECK(classify_from_densities(scales, mixed, p).label == WienerLabel::inconclusive);

  CHECK_THROWS_AS(classify_from_densities({1, 0.5, 0.25}, {0.5, 0.5, 0.5}, p), ResolutionError);
  CHECK_THROWS_AS(classify_from_densities(scales, {0.5}, p), InvalidArgument);
  CHECK(std::string(label_name(WienerLabel::non_wiener_evidence)) == "non-wiener-evidence");
}

TEST_CASE("classification of a flat boundary point") {
  const GridDomain E = benchmark_domain("half_space", {2, 1.0 / 32, 1.0});
  const WienerClassification c = classify_wiener_point(E, Point::Zero(2), 1.8, 0.25, 6);
  CHECK(c.analytic);
  CHECK(c.label == WienerLabel::wiener);
  REQUIRE(c.delta.size() == 6);
  for (double d : c.delta) CHECK(d == doctest::Approx(c.delta.front()).epsilon(1e-9));

  GridDomain raster = E;
  raster.shape = nullptr;
  CHECK_THROWS_AS(classify_wiener_point(raster, Point::Zero(2), 1.8, 0.25, 6), ResolutionError);
  CHECK_THROWS_AS(classify_wiener_point(E, Point::Zero(2), 1.8, 0.25, 5), ResolutionError);
}
