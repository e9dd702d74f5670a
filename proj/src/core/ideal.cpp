#include "core/ideal.hpp"

#include <cmath>
#include <string>

#include "core/bose.hpp"
#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {
namespace ideal {

namespace {

void check_below_saturation(double mu, double temperature) {
  double z0 = std::exp((mu - 1.0) / temperature);
  if (z0 > bose::fugacity_max)
    throw ValidationError("ideal gas: mu = " + std::to_string(mu) +
                          " is at the lowest transverse level (divergence); need mu < 1 with "
                          "e^{(mu-1)/T} <= " + std::to_string(bose::fugacity_max));
}

// sum_{j >= J} (j+1) w^{j+1} with w = e^{-1/T} geometric decay, exact closed form
double ladder_tail_bound(double wJ, double q, int J) {
  // sum (j+1) q^{j-J} * wJ for j >= J
  return wJ * ((J + 1) / (1.0 - q) + q / ((1.0 - q) * (1.0 - q)));
}

}  // namespace

double linear_density_reduced(double mu, double temperature, double tail_rel) {
  if (!(temperature > 0.0)) throw ValidationError("ideal gas: temperature must be > 0");
  check_below_saturation(mu, temperature);
  const double q = std::exp(-1.0 / temperature);
  double sum = 0.0;
  int j = 0;
  for (;; ++j) {
    if (j > 2000000) throw ConvergenceError("ideal gas: ladder sum did not terminate");
    double w = std::exp((mu - (j + 1)) / temperature);
    sum += (j + 1) * bose::polylog_half(std::min(w, bose::fugacity_max));
    // g_{1/2}(x) <= x/(1-x); bound the whole remaining ladder
    double wnext = w * q;
    if (wnext < 0.5) {
      double tail = ladder_tail_bound(wnext, q, j + 1) / (1.0 - wnext);
      if (tail <= tail_rel * sum) break;
    }
  }
  const double lambda = std::sqrt(2.0 * constants::pi / temperature);
  return sum / lambda;
}

int ladder_cutoff(double mu, double temperature, double tail_rel) {
  // mirror of linear_density_reduced's loop so both truncate identically
  check_below_saturation(mu, temperature);
  const double q = std::exp(-1.0 / temperature);
  double sum = 0.0;
  int j = 0;
  for (;; ++j) {
    double w = std::exp((mu - (j + 1)) / temperature);
    sum += (j + 1) * bose::polylog_half(std::min(w, bose::fugacity_max));
    double wnext = w * q;
    if (wnext < 0.5 && ladder_tail_bound(wnext, q, j + 1) / (1.0 - wnext) <= tail_rel * sum)
      return j;
  }
}

double linear_density(double mu, double temperature, const ReducedUnits& units, double tail_rel) {
  return linear_density_reduced(mu, temperature, tail_rel) / units.transverse_length_unit;
}

LinearDensityProfile profile(const ThermoState& state, const TrapGeometry& geom,
                             const ZGrid& zgrid, double tail_rel) {
  state.validate();
  check_below_saturation(state.mu0, state.temperature);
  const ReducedUnits units = make_reduced_units(geom);
  LinearDensityProfile p;
  p.z = zgrid.z;
  p.n.resize(zgrid.size());
  for (int i = 0; i < zgrid.size(); ++i) {
    double mu_z = local_chemical_potential(state, geom, zgrid.z[i]);
    p.n[i] = linear_density(mu_z, state.temperature, units, tail_rel);
  }
  return p;
}

}  // namespace ideal
}  // namespace ebgas
