#include <doctest.h>

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/quasicondensate.hpp"

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

TEST_CASE("eos: anchors and inverse pair") {
  TrapGeometry g = paper_trap();
  CHECK(qc::mu_of_n(0.0, g) == doctest::Approx(1.0).epsilon(1e-15));
  // n a = 0.56 -> mu = sqrt(1 + 2.24) = 1.8 exactly
  double n56 = 0.56 / g.scattering_length;
  CHECK(qc::mu_of_n(n56, g) == doctest::Approx(1.8).epsilon(1e-13));

  CHECK(qc::n_of_mu(1.0, g) == 0.0);
  CHECK(qc::n_of_mu(0.2, g) == 0.0);
  // mu = 1.8, a = 5.24 nm -> 1.0687e8 per m = 641.2 atoms per 6 um pixel
  double n18 = qc::n_of_mu(1.8, g);
  CHECK(n18 == doctest::Approx(1.06870229008e8).epsilon(1e-9));
  CHECK(n18 * 6e-6 == doctest::Approx(641.221374046).epsilon(1e-9));

  for (double mu : {1.0001, 1.3, 1.8, 2.6}) {
    CHECK(qc::mu_of_n(qc::n_of_mu(mu, g), g) == doctest::Approx(mu).epsilon(1e-12));
  }

  // small-n expansion mu ~ 1 + 2 n a, relative error < 1e-4 for n a < 0.01
  for (double na : {1e-4, 1e-3, 0.009}) {
    double n = na / g.scattering_length;
    CHECK(qc::mu_of_n(n, g) == doctest::Approx(1.0 + 2.0 * na).epsilon(1e-4));
  }

  CHECK_THROWS_AS(qc::mu_of_n(-1.0, g), ValidationError);
}

TEST_CASE("qc profile: construction and support") {
  TrapGeometry g = paper_trap();
  ZGrid zg = ZGrid::make(2e-4, 801);

  double peak = 8e7;
  LinearDensityProfile p = qc::profile_from_peak(peak, g, zg);
  p.validate();
  CHECK(p.n[p.size() / 2] == doctest::Approx(peak).epsilon(1e-12));

  // support edge from algebra: 1/2 m wz^2 z_TF^2 = mu0 - 1
  double mu0 = 1.8;
  double z_tf = qc::support_half_length(mu0, g);
  double drop_at_edge = 0.5 * g.mass * g.omega_z * g.omega_z * z_tf * z_tf /
                        (constants::hbar * g.omega_perp);
  CHECK(drop_at_edge == doctest::Approx(mu0 - 1.0).epsilon(1e-12));
  double eps = 1e-8;
  ThermoState st{mu0, 1.0};
  CHECK(qc::n_of_mu(local_chemical_potential(st, g, z_tf * (1.0 - eps)), g) > 0.0);
  CHECK(qc::n_of_mu(local_chemical_potential(st, g, z_tf * (1.0 + eps)), g) == 0.0);

  // even, decreasing in |z|, continuous at the edge
  LinearDensityProfile pb = qc::profile_from_mu0(mu0, g, zg);
  const int n = pb.size();
  for (int i = 0; i < n; ++i) CHECK(pb.n[i] == doctest::Approx(pb.n[n - 1 - i]).epsilon(1e-12));
  for (int i = n / 2; i + 1 < n; ++i) CHECK(pb.n[i + 1] <= pb.n[i] + 1e-12);
  // near-edge samples are small (no jump): value at last in-support grid point
  for (int i = n / 2; i < n; ++i) {
    if (pb.n[i] == 0.0) {
      CHECK(pb.n[i - 1] < 0.02 * pb.peak_density());
      break;
    }
  }
}

TEST_CASE("qc profile: deep-1D Thomas-Fermi limit") {
  TrapGeometry g = paper_trap();
  double mu0 = 1.001;  // n a ~ 5e-4 at the peak
  double z_tf = qc::support_half_length(mu0, g);
  ZGrid zg = ZGrid::make(1.2 * z_tf, 2001);
  LinearDensityProfile p = qc::profile_from_mu0(mu0, g, zg);
  ThermoState st{mu0, 1.0};
  double peak = p.peak_density();
  for (int i = 0; i < p.size(); ++i) {
    double mu_z = local_chemical_potential(st, g, p.z[i]);
    double tf = mu_z > 1.0 ? (mu_z - 1.0) / (2.0 * g.scattering_length) : 0.0;
    if (p.n[i] > 0.05 * peak)
      CHECK(p.n[i] == doctest::Approx(tf).epsilon(0.02));
  }
}
