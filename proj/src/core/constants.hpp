#ifndef EBGAS_CONSTANTS_HPP
#define EBGAS_CONSTANTS_HPP

// Physical constants (SI, CODATA 2018) and the Rb87 literature defaults
// used when a config file does not override them.

namespace ebgas::constants {

inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double pi = 3.14159265358979323846;

// Defaults for Rb87 in the F=2 ground state; overridable via config.
inline constexpr double default_mass_kg = 1.443e-25;
inline constexpr double default_scattering_length_m = 5.24e-9;
inline constexpr double default_probe_wavelength_m = 780.24e-9;
inline constexpr double default_omega_perp_hz = 2750.0;   // omega_perp / 2pi
inline constexpr double default_omega_z_hz = 15.7;        // omega_z / 2pi
inline constexpr double default_pixel_size_m = 6.0e-6;
inline constexpr double default_sigma_factor = 0.24;      // sigma_eff / (3 lambda^2 / 2pi)

}  // namespace ebgas::constants

#endif
