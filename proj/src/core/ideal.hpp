#ifndef EBGAS_IDEAL_HPP
#define EBGAS_IDEAL_HPP

#include "core/profile.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace ideal {

// Linear density of the transversely trapped, longitudinally free ideal Bose
// gas: n = Lambda^-1 sum_j (j+1) g_{1/2}(e^{(mu-(j+1))/T}).  Inputs reduced,
// output atoms per meter.  The 2D-oscillator ladder is truncated adaptively;
// a geometric tail bound keeps the truncation error below tail_rel.
// Throws ValidationError when mu reaches the lowest level (divergence).
double linear_density(double mu, double temperature, const ReducedUnits& units,
                      double tail_rel = 1e-10);

// Same sum in reduced units (atoms per a_perp); shared by the HF g~=0 path.
double linear_density_reduced(double mu, double temperature, double tail_rel = 1e-10);

// Highest ladder index included at (mu, T); exposed for truncation tests.
int ladder_cutoff(double mu, double temperature, double tail_rel = 1e-10);

LinearDensityProfile profile(const ThermoState& state, const TrapGeometry& geom,
                             const ZGrid& zgrid, double tail_rel = 1e-10);

}  // namespace ideal
}  // namespace ebgas

#endif
