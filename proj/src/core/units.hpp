#ifndef EBGAS_UNITS_HPP
#define EBGAS_UNITS_HPP

#include <vector>

#include "core/config.hpp"

namespace ebgas {

// Trap and atom parameters in SI units.
struct TrapGeometry {
  double omega_perp;         // rad/s
  double omega_z;            // rad/s
  double mass;               // kg
  double scattering_length;  // m
  double probe_wavelength;   // m

  static TrapGeometry from_config(const Config& cfg);
  void validate() const;  // throws ValidationError
};

// Reduced-unit system: energies in hbar*omega_perp, transverse lengths in
// a_perp = sqrt(hbar / m omega_perp).  Energies are referenced to the trap
// bottom, so the bare transverse ground state sits at 1.0.
struct ReducedUnits {
  double energy_unit;             // hbar * omega_perp, J
  double transverse_length_unit;  // a_perp, m
  double longitudinal_length_unit;  // a_z = sqrt(hbar / m omega_z), m
  double dimensionless_coupling;  // g~ = 4 pi a / a_perp
  double omega_ratio;             // omega_z / omega_perp

  double energy_to_si(double e_red) const { return e_red * energy_unit; }
  double energy_from_si(double e_si) const { return e_si / energy_unit; }
  double length_to_si(double r_red) const { return r_red * transverse_length_unit; }
  double length_from_si(double r_si) const { return r_si / transverse_length_unit; }

  // mu(z) = mu0 - 1/2 m omega_z^2 z^2, both sides in reduced units; z in a_perp.
  double trap_drop(double z_red) const { return 0.5 * omega_ratio * omega_ratio * z_red * z_red; }
};

ReducedUnits make_reduced_units(const TrapGeometry& geom);

// Chemical potential and temperature of one cloud, reduced units.
struct ThermoState {
  double mu0;          // hbar omega_perp, from trap bottom
  double temperature;  // k_B T in hbar omega_perp

  void validate() const;
};

// mu(z) = mu0 - 1/2 m omega_z^2 z^2 in reduced units; z in meters.
double local_chemical_potential(const ThermoState& state, const TrapGeometry& geom, double z_m);

// Uniform radial grid on [0, r_max] (units of a_perp) with Simpson weights.
struct RadialGrid {
  std::vector<double> r;
  std::vector<double> weight;  // Simpson quadrature weights (dr measure)
  double spacing = 0.0;
  double r_max = 0.0;

  static RadialGrid make(int n_points, double r_max);
  static RadialGrid from_config(const Config& cfg);
  int size() const { return static_cast<int>(r.size()); }
  // integral of f(r) * 2 pi r dr
  double integrate_radial(const std::vector<double>& f) const;
};

// Uniform symmetric longitudinal grid, z in meters.
struct ZGrid {
  std::vector<double> z;  // meters
  double spacing = 0.0;   // meters

  static ZGrid make(double half_width_m, int n_points);
  // Auto extent: mu(z_max) = mu0 - span_kt * T.
  static ZGrid for_state(const ThermoState& st, const TrapGeometry& geom, const Config& cfg,
                         double span_kt = 12.0);
  int size() const { return static_cast<int>(z.size()); }
};

}  // namespace ebgas

#endif
