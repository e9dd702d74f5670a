#include <doctest.h>

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/ideal.hpp"
#include "oracles.hpp"

using namespace ebgas;

namespace {
TrapGeometry paper_trap() {
  TrapGeometry g;
  g.omega_perp = 2.0 * constants::pi * 2750.0;
  g.omega_z = 2.0 * constants::pi * 15.7;
  g.mass = 1.443e-25;
  g.scattering_length = 5.24e-9;
  g.probe_wavelength = 780.24e-9;
  return g;
}
}  // namespace

TEST_CASE("ideal linear density: mode-sum oracle at (mu=0.5, T=2.75)") {
  double got = ideal::linear_density_reduced(0.5, 2.75);
  double ref = oracles::ideal_linear_density_red(0.5, 2.75, 200, 100000);
  CHECK(got == doctest::Approx(ref).epsilon(1e-9));
  // frozen value from the oracle (30-digit arithmetic)
  CHECK(got == doctest::Approx(8.57907800938552034).epsilon(1e-10));

  ReducedUnits u = make_reduced_units(paper_trap());
  CHECK(ideal::linear_density(0.5, 2.75, u) == doctest::Approx(4.17149745646e7).epsilon(1e-8));
}

TEST_CASE("ideal linear density: limits and monotonicity") {
  ReducedUnits u = make_reduced_units(paper_trap());
  // empty trap: density collapses exponentially with mu -> -infinity
  double far = ideal::linear_density(-50.0, 2.75, u);
  double farther = ideal::linear_density(-80.0, 2.75, u);
  CHECK(far < 1.0);
  CHECK(farther < 1e-4 * far);
  // monotone in mu at fixed T
  double prev = 0.0;
  for (double mu : {-3.0, -1.0, 0.0, 0.5, 0.9}) {
    double n = ideal::linear_density(mu, 2.75, u);
    CHECK(n > prev);
    prev = n;
  }
  // divergence boundary
  CHECK_THROWS_AS(ideal::linear_density(1.0, 2.75, u), ValidationError);
  CHECK_THROWS_AS(ideal::linear_density(1.3, 2.75, u), ValidationError);
  CHECK_NOTHROW(ideal::linear_density(0.99, 2.75, u));  // still finite
}

TEST_CASE("ideal ladder: truncation bound") {
  // doubling the ladder changes nothing beyond the tail tolerance
  for (auto [mu, t] : {std::pair{0.5, 2.75}, std::pair{-2.0, 6.0}}) {
    int jcut = ideal::ladder_cutoff(mu, t);
    double base = oracles::ideal_linear_density_red(mu, t, jcut + 1, 200000);
    double twice = oracles::ideal_linear_density_red(mu, t, 2 * (jcut + 1), 200000);
    CHECK(std::abs(twice - base) <= 1e-8 * twice);
    // and the library value matches the doubled ladder
    CHECK(ideal::linear_density_reduced(mu, t) == doctest::Approx(twice).epsilon(1e-9));
  }
}

TEST_CASE("ideal profile: symmetry, peak, wings") {
  TrapGeometry g = paper_trap();
  ThermoState st{0.5, 2.75};
  Config cfg;
  ZGrid zg = ZGrid::for_state(st, g, cfg);
  LinearDensityProfile p = ideal::profile(st, g, zg);
  p.validate();

  const int n = p.size();
  int mid = n / 2;
  for (int i = 0; i < n; ++i) {
    CHECK(p.n[i] == doctest::Approx(p.n[n - 1 - i]).epsilon(1e-12));
    CHECK(p.n[i] <= p.n[mid] * (1.0 + 1e-12));
  }

  // classical wing tail: n ~ Lambda^-1 e^{(mu(z)-1)/T} / (1 - e^{-1/T})^2
  ReducedUnits u = make_reduced_units(g);
  double t = st.temperature;
  double target_drop = st.mu0 - 1.0 + 14.0 * t;  // mu(z) - 1 = -14 T
  double z = std::sqrt(2.0 * target_drop * u.energy_unit /
                       (g.mass * g.omega_z * g.omega_z));
  double mu_z = local_chemical_potential(st, g, z);
  double lambda = std::sqrt(2.0 * constants::pi / t) * u.transverse_length_unit;
  double q = std::exp(-1.0 / t);
  double asymptote = std::exp((mu_z - 1.0) / t) / ((1.0 - q) * (1.0 - q)) / lambda;
  double full = ideal::linear_density(mu_z, t, u);
  CHECK(full == doctest::Approx(asymptote).epsilon(0.02));
}

TEST_CASE("ideal profile: classical (Boltzmann) limit") {
  // replacing g_1/2(z) by z reproduces n within 1% when e^{(mu-1)/T} < 0.05
  double t = 2.75;
  double mu = 1.0 + t * std::log(0.04);
  double quantum = ideal::linear_density_reduced(mu, t);
  double classical = oracles::classical_linear_density_red(mu, t, 400);
  CHECK(classical == doctest::Approx(quantum).epsilon(0.01));
}

TEST_CASE("ideal profile: divergence propagates") {
  TrapGeometry g = paper_trap();
  Config cfg;
  ThermoState bad{1.2, 2.75};
  ZGrid zg = ZGrid::make(3e-4, 121);
  CHECK_THROWS_AS(ideal::profile(bad, g, zg), ValidationError);
}
