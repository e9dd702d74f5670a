#ifndef EBGAS_HF_HPP
#define EBGAS_HF_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "core/numerics.hpp"
#include "core/profile.hpp"
#include "core/sector_basis.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace hf {

// Self-consistent 3D density of the longitudinally homogeneous gas, on the
// radial grid (units a_perp^-3) plus its transverse integral (units 1/a_perp).
// The linear density is the exact mode sum, not a quadrature of rho.
struct RadialDensity {
  std::vector<double> rho;
  double linear_density = 0.0;
};

struct SelfConsistencyReport {
  std::string method;      // "iterative" or "variational"
  double xi = 0.0;         // variational residual, or last relative L2 change
  int iterations = 0;      // iterations or function evaluations
  double nh = 0.0;         // linear density before the final map application
  double nh_prime = 0.0;   // ... and after it
  bool converged = false;
};

// rho_trial(r) = sum_p c_{2p} H_{2p}(r/r0) exp(-r^2 / 2 r0^2), p = 0..3
struct HermiteTrial {
  double r0 = 1.0;
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
  std::vector<double> evaluate(const RadialGrid& grid) const;
};

// Eigenpairs of the transverse HF Hamiltonian, by sector.
struct TransverseSpectrum {
  struct Mode {
    int l = 0, j = 0;
    double energy = 0.0;  // hbar omega_perp from trap bottom
  };
  std::vector<Mode> modes;   // ascending energy
  double lowest() const { return modes.empty() ? 0.0 : modes.front().energy; }
};

struct MapResult {
  RadialDensity density;
  TransverseSpectrum spectrum;
  bool clamped = false;  // a fugacity hit the cutoff (intermediate saturated iterate)
};

struct SolveResult {
  RadialDensity density;
  TransverseSpectrum spectrum;
  SelfConsistencyReport report;
  HermiteTrial trial;  // variational solutions only
};

struct SolverParams {
  double mix_alpha = 0.3;
  int max_iter = 500;
  double tol = 1e-8;             // relative L2 change of rho
  double tail_rel = 1e-10;       // mode-ladder truncation
  int extra_basis = 8;           // representation margin per sector
  int variational_starts = 3;
  int variational_max_evals = 1500;
  double xi_target = 1e-4;
  int threads = 0;

  static SolverParams from_config(const Config& cfg);
};

// Finite-temperature Hartree-Fock solver for the transversely trapped,
// longitudinally homogeneous gas.  All energies reduced; coupling g~ from the
// unit system (set_coupling overrides it, e.g. 0 for the ideal-limit checks).
class Solver {
 public:
  Solver(const TrapGeometry& geom, const Config& cfg);
  Solver(const ReducedUnits& units, const RadialGrid& grid, const SolverParams& params);

  const RadialGrid& grid() const { return cache_.grid(); }
  const ReducedUnits& units() const { return units_; }
  const SolverParams& params() const { return params_; }
  double coupling() const { return coupling_; }
  void set_coupling(double g) { coupling_ = g; }

  // One application of the thermal map: diagonalize H = H0 + 2 g~ rho_in per
  // sector and populate each transverse mode with a free 1D thermal gas.
  // Strict mode throws ValidationError if mu sits at or above the lowest
  // eigenvalue; clamped mode caps the fugacity instead (used while iterating).
  MapResult thermal_density(const std::vector<double>& rho_in, double mu, double temperature,
                            bool clamp = false, double min_energy_cap = 0.0) const;

  // Damped fixed-point iteration from rho = 0 (or a seed).  Throws
  // ConvergenceError on non-convergence and ValidationError on saturation.
  SolveResult solve_iterative(double mu, double temperature,
                              const std::vector<double>* seed = nullptr) const;

  // Non-throwing variant; on failure returns the last iterate with
  // report.converged = false.
  SolveResult solve_iterative_nothrow(double mu, double temperature,
                                      const std::vector<double>* seed = nullptr) const;

  // Five-parameter Hermite-Gaussian trial density minimizing the self-consistency
  // residual xi.  Result is returned even when xi misses the target; the
  // report carries the quality flag.
  SolveResult solve_variational(double mu, double temperature,
                                const std::vector<double>* seed = nullptr,
                                const HermiteTrial* start = nullptr) const;

  // xi functional of a given trial (diagnostics / tests)
  double xi_of_trial(const HermiteTrial& trial, double mu, double temperature) const;

 private:
  SolveResult assemble_result(const std::vector<double>& rho, double mu, double T,
                              SelfConsistencyReport rep) const;

  ReducedUnits units_;
  SolverParams params_;
  mutable SectorBasisCache cache_;
  double coupling_;
};

// Tabulated homogeneous solutions n_h(mu), e0(mu) and channel energies
// E_{l,j}(mu) on a mu-grid at fixed T, with monotone interpolation.
class MuTable {
 public:
  struct Channel {
    int l = 0, j = 0;
    double energy_at_mu0 = 0.0;
    Pchip energy;
  };

  MuTable() = default;
  // nodes ascending from mu_min to mu0; energies recorded for channels with
  // bare energy <= channel_energy_cap (0 = none).
  MuTable(const Solver& solver, double mu_min, double mu0, double temperature, int n_nodes,
          double channel_energy_cap);

  double temperature() const { return temperature_; }
  double mu_min() const { return mu_min_; }
  double mu0() const { return mu0_; }

  double nh(double mu) const;        // reduced linear density
  double e0(double mu) const;        // lowest transverse level
  const std::vector<Channel>& channels() const { return channels_; }
  double channel_energy(int idx, double mu) const { return channels_[idx].energy(mu); }

  const std::vector<SelfConsistencyReport>& reports() const { return reports_; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  double temperature_ = 0.0, mu_min_ = 0.0, mu0_ = 0.0;
  std::vector<double> nodes_;
  Pchip nh_, e0_;
  std::vector<Channel> channels_;
  std::vector<SelfConsistencyReport> reports_;
};

struct ProfileResult {
  LinearDensityProfile profile;
  std::vector<SelfConsistencyReport> reports;  // per mu node (g~ > 0 path)
  std::vector<double> report_mu;               // node positions for the reports
};

// LDA profile n(z) = n_h(mu(z), T).  Uses the mu table for g~ > 0; evaluates
// the mode sum directly when the coupling is zero (the table interpolation
// error would otherwise mask the exact ideal-gas limit).
ProfileResult profile(const Solver& solver, const ThermoState& state, const TrapGeometry& geom,
                      const ZGrid& zgrid, int table_points);

}  // namespace hf
}  // namespace ebgas

#endif
