#ifndef EBGAS_QUASICONDENSATE_HPP
#define EBGAS_QUASICONDENSATE_HPP

#include "core/profile.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace qc {

// Equation of state of the transversely trapped quasi-condensate:
// mu = sqrt(1 + 4 n a) in units of hbar omega_perp, n the linear density (1/m).
double mu_of_n(double n_per_m, const TrapGeometry& geom);

// Inverse: n = (mu^2 - 1) / (4 a) for mu > 1, else 0.
double n_of_mu(double mu, const TrapGeometry& geom);

// Zero-temperature LDA profile n(z) = n(mu0 - 1/2 m wz^2 z^2); compact support.
LinearDensityProfile profile_from_mu0(double mu0, const TrapGeometry& geom, const ZGrid& zgrid);
LinearDensityProfile profile_from_peak(double peak_n_per_m, const TrapGeometry& geom,
                                       const ZGrid& zgrid);

// Half-length of the support: 1/2 m wz^2 z^2 = mu0 - 1 (meters; 0 when mu0 <= 1).
double support_half_length(double mu0, const TrapGeometry& geom);

}  // namespace qc
}  // namespace ebgas

#endif
