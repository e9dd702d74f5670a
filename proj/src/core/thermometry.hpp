#ifndef EBGAS_THERMOMETRY_HPP
#define EBGAS_THERMOMETRY_HPP

#include <vector>

#include "core/profile.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace thermometry {

struct WingFit {
  double mu0 = 0.0;      // reduced; may exceed 1 when the excluded core hides
                         // the divergence (the wings stay below saturation)
  double residual = 0.0;  // sum of squared density residuals (1/m^2)
  int wing_points = 0;
  bool ok = true;
};

// Least-squares fit of the ideal-gas profile to the wings only, excluding
// n_ex pixels on either side of the centroid; mu0 is the sole free parameter.
WingFit fit_mu0(const LinearDensityProfile& profile, double temperature, int n_ex,
                const TrapGeometry& geom);

struct WingFitGrid {
  std::vector<double> trial_temperatures;
  std::vector<int> n_ex;
  std::vector<std::vector<double>> mu0;      // [t][nex]; NaN where a fit failed
  std::vector<std::vector<double>> residual;
  std::vector<std::vector<bool>> ok;
};

WingFitGrid scan(const LinearDensityProfile& profile, const std::vector<double>& trial_t,
                 const std::vector<int>& n_ex, const TrapGeometry& geom);

struct ThermometryReport {
  double t_best = 0.0;
  double mu0_best = 0.0;
  double sigma_t = 0.0;
  double sigma_mu0 = 0.0;
  double mu_qc = 0.0;  // from the measured peak density
  std::vector<double> trial_temperatures;
  std::vector<double> slopes;      // d mu0 / d n_ex over the regression window
  std::vector<double> slope_errs;
  int nex_window_lo = 0, nex_window_hi = 0;
  bool t_interior = false;  // zero crossing strictly inside the trial range
};

// The cloud temperature is the trial T whose mu0(N_ex) has zero slope over
// the linear region N_ex > 10; T is interpolated between the bracketing
// trials and mu0 refitted there.
ThermometryReport select_temperature(const LinearDensityProfile& profile,
                                     const WingFitGrid& grid, const TrapGeometry& geom);

// mu_qc = sqrt(1 + 4 n0 a) from the refined profile peak.
double qc_mu_from_peak(const LinearDensityProfile& profile, const TrapGeometry& geom);

// default N_ex list: 0..N_max with >= 15 wing points left per side at N_max
std::vector<int> default_nex_list(const LinearDensityProfile& profile);

// default trial temperatures around a moment-based guess (+-20%, 9 steps)
std::vector<double> default_trial_temperatures(const LinearDensityProfile& profile,
                                               const TrapGeometry& geom);

}  // namespace thermometry
}  // namespace ebgas

#endif
