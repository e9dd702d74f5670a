#include "core/quasicondensate.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {
namespace qc {

double mu_of_n(double n_per_m, const TrapGeometry& geom) {
  if (n_per_m < 0.0) throw ValidationError("qc: linear density must be >= 0");
  return std::sqrt(1.0 + 4.0 * n_per_m * geom.scattering_length);
}

double n_of_mu(double mu, const TrapGeometry& geom) {
  if (mu <= 1.0) return 0.0;
  return (mu * mu - 1.0) / (4.0 * geom.scattering_length);
}

double support_half_length(double mu0, const TrapGeometry& geom) {
  if (mu0 <= 1.0) return 0.0;
  double drop = (mu0 - 1.0) * constants::hbar * geom.omega_perp;
  return std::sqrt(2.0 * drop / (geom.mass * geom.omega_z * geom.omega_z));
}

LinearDensityProfile profile_from_mu0(double mu0, const TrapGeometry& geom, const ZGrid& zgrid) {
  LinearDensityProfile p;
  p.z = zgrid.z;
  p.n.resize(zgrid.size());
  ThermoState st{mu0, 1.0};  // temperature unused by the T = 0 EOS
  for (int i = 0; i < zgrid.size(); ++i)
    p.n[i] = n_of_mu(local_chemical_potential(st, geom, zgrid.z[i]), geom);
  return p;
}

LinearDensityProfile profile_from_peak(double peak_n_per_m, const TrapGeometry& geom,
                                       const ZGrid& zgrid) {
  return profile_from_mu0(mu_of_n(peak_n_per_m, geom), geom, zgrid);
}

}  // namespace qc
}  // namespace ebgas
