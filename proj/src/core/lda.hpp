#ifndef EBGAS_LDA_HPP
#define EBGAS_LDA_HPP

#include <memory>
#include <vector>

#include "core/hf.hpp"
#include "core/profile.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace lda {

struct LdaReport {
  double mu0 = 0.0;
  double temperature = 0.0;
  double e0_transverse = 0.0;    // lowest transverse HF level at mu0
  double e0_longitudinal = 0.0;  // ground state of the channel-0 effective Hamiltonian
  double delta_e = 0.0;          // gap to the first excited longitudinal state
  double mu_eff = 0.0;           // mu0 - e0_longitudinal
  double ratio = 0.0;            // |mu_eff| / delta_e
  double n_total = 0.0;          // atoms in the LDA profile
  double ground_state_population = 0.0;  // k_B T / (e0 - mu0)
  double ground_state_fraction = 0.0;
};

struct BeyondLdaResult {
  LinearDensityProfile lda;     // LDA reference on the same grid
  LinearDensityProfile beyond;  // quantized-channel reconstruction
  double max_deviation_rel_peak = 0.0;
  int channels_quantized = 0;
  double occupation_sum = 0.0;      // sum of discrete occupations
  double quantized_atoms = 0.0;     // integral of the quantized part
};

// Validity checks of the local density approximation at fixed temperature.
// One HF mu-table backs every query; mu0 may vary within [mu_lo, mu_hi].
class Validator {
 public:
  Validator(const TrapGeometry& geom, const Config& cfg, double temperature, double mu_lo,
            double mu_hi);

  // ratio |mu_eff|/Delta E, ground-state bookkeeping
  LdaReport report(double mu0) const;

  // adiabatic per-channel reconstruction vs the LDA profile
  BeyondLdaResult beyond_lda(double mu0) const;

  // Fig.-3-style scan: (mu0, ratio) rows
  std::vector<std::pair<double, double>> scan(double mu_lo, double mu_hi, int points) const;

  const hf::MuTable& table() const { return *table_; }
  const hf::Solver& solver() const { return *solver_; }

  // effective longitudinal potential of one tabulated channel on a z grid (a_perp)
  std::vector<double> channel_potential(int channel_idx, double mu0,
                                        const std::vector<double>& z_red) const;

 private:
  TrapGeometry geom_;
  ReducedUnits units_;
  double temperature_;
  double nmodes_kt_, state_cut_kt_, box_cut_kt_, long_step_;
  int long_points_override_;
  int zgrid_points_;
  std::unique_ptr<hf::Solver> solver_;
  std::unique_ptr<hf::MuTable> table_;
};

}  // namespace lda
}  // namespace ebgas

#endif
