#include "core/units.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {

TrapGeometry TrapGeometry::from_config(const Config& cfg) {
  TrapGeometry g;
  g.omega_perp = 2.0 * constants::pi * cfg.get("omega_perp_hz");
  g.omega_z = 2.0 * constants::pi * cfg.get("omega_z_hz");
  g.mass = cfg.get("mass_kg");
  g.scattering_length = cfg.get("scattering_length_m");
  g.probe_wavelength = cfg.get("probe_wavelength_m");
  g.validate();
  return g;
}

void TrapGeometry::validate() const {
  if (!(omega_perp > 0.0)) throw ValidationError("trap: omega_perp must be > 0");
  if (!(omega_z > 0.0)) throw ValidationError("trap: omega_z must be > 0");
  if (!(mass > 0.0)) throw ValidationError("trap: mass must be > 0");
  if (!(scattering_length > 0.0))
    throw ValidationError("trap: scattering_length must be > 0 (repulsive only)");
  if (!(probe_wavelength > 0.0)) throw ValidationError("trap: probe_wavelength must be > 0");
}

ReducedUnits make_reduced_units(const TrapGeometry& geom) {
  geom.validate();
  ReducedUnits u;
  u.energy_unit = constants::hbar * geom.omega_perp;
  u.transverse_length_unit = std::sqrt(constants::hbar / (geom.mass * geom.omega_perp));
  u.longitudinal_length_unit = std::sqrt(constants::hbar / (geom.mass * geom.omega_z));
  u.dimensionless_coupling = 4.0 * constants::pi * geom.scattering_length / u.transverse_length_unit;
  u.omega_ratio = geom.omega_z / geom.omega_perp;
  return u;
}

void ThermoState::validate() const {
  if (!(temperature > 0.0)) throw ValidationError("state: temperature must be > 0");
}

double local_chemical_potential(const ThermoState& state, const TrapGeometry& geom, double z_m) {
  double drop = 0.5 * geom.mass * geom.omega_z * geom.omega_z * z_m * z_m;
  return state.mu0 - drop / (constants::hbar * geom.omega_perp);
}

RadialGrid RadialGrid::make(int n_points, double r_max) {
  if (n_points < 9) throw ValidationError("radial grid: need at least 9 points");
  if (!(r_max > 0.0)) throw ValidationError("radial grid: r_max must be > 0");
  while ((n_points - 1) % 4 != 0) ++n_points;  // composite Boole blocks
  RadialGrid g;
  g.r_max = r_max;
  g.spacing = r_max / (n_points - 1);
  g.r.resize(n_points);
  g.weight.resize(n_points);
  for (int i = 0; i < n_points; ++i) g.r[i] = i * g.spacing;
  // composite Boole weights: O(h^6), needed for the oscillatory basis products
  const double s = 2.0 * g.spacing / 45.0;
  for (int i = 0; i < n_points; ++i) {
    int m = i % 4;
    double w = (m == 1 || m == 3) ? 32.0 : (m == 2 ? 12.0 : 14.0);
    if (i == 0 || i == n_points - 1) w = 7.0;
    g.weight[i] = s * w;
  }
  return g;
}

RadialGrid RadialGrid::from_config(const Config& cfg) {
  return make(cfg.get_int("radial_points"), cfg.get("radial_rmax"));
}

double RadialGrid::integrate_radial(const std::vector<double>& f) const {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += f[i] * 2.0 * constants::pi * r[i] * weight[i];
  return s;
}

ZGrid ZGrid::make(double half_width_m, int n_points) {
  if (n_points < 3) throw ValidationError("z grid: need at least 3 points");
  if (!(half_width_m > 0.0)) throw ValidationError("z grid: half width must be > 0");
  if (n_points % 2 == 0) ++n_points;  // keep z = 0 on the grid
  ZGrid g;
  g.spacing = 2.0 * half_width_m / (n_points - 1);
  g.z.resize(n_points);
  for (int i = 0; i < n_points; ++i) g.z[i] = -half_width_m + i * g.spacing;
  return g;
}

ZGrid ZGrid::for_state(const ThermoState& st, const TrapGeometry& geom, const Config& cfg,
                       double span_kt) {
  st.validate();
  double hw = cfg.get("zgrid_halfwidth_m");
  if (hw <= 0.0) {
    // 1/2 m wz^2 z^2 = span_kt * T  (reduced energies)
    double drop = span_kt * st.temperature * constants::hbar * geom.omega_perp;
    hw = std::sqrt(2.0 * drop / (geom.mass * geom.omega_z * geom.omega_z));
  }
  return make(hw, cfg.get_int("zgrid_points"));
}

}  // namespace ebgas
