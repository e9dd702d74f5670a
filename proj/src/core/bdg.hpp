#ifndef EBGAS_BDG_HPP
#define EBGAS_BDG_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "core/gpe.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace bdg {

// One Bogoliubov quasiparticle branch point: radial u, v (basis coefficients
// of the l sector) at longitudinal wavevector k.
struct Mode {
  double k = 0.0;       // 1/a_perp
  int l = 0, j = 0;     // sector and radial index
  double energy = 0.0;  // reduced
  double s_norm = 0.0;  // int |u+v|^2 2 pi r dr
  double norm_check = 0.0;  // int (u^2 - v^2) 2 pi r dr, 1 by construction
  Eigen::VectorXd u, v;
};

struct ModeSet {
  std::vector<double> kgrid;  // ascending, 1/a_perp
  std::vector<Mode> modes;
  int lmax = 0, jmax = 0;
};

struct BdgParams {
  int lmax = 6;
  int jmax = 8;
  int kpoints = 200;
  int basis_size = 40;
  double eps_cut_kt = 15.0;  // keep modes with eps <= this * T
  double k_min = 5e-3;       // 1/a_perp

  static BdgParams from_config(const Config& cfg);
};

// Coupled radial BdG eigenproblem around the condensate, sector by sector,
// reduced to the symmetric form S^{1/2} (A+B) S^{1/2} with S = A - B > 0.
// Modes are normalized to int (u^2 - v^2) 2 pi r dr = 1 exactly in basis space.
ModeSet solve_modes(const gpe::TransverseCondensate& cond, const ReducedUnits& units,
                    const RadialGrid& grid, const std::vector<double>& kgrid,
                    const BdgParams& params, double temperature_for_cut);

std::vector<double> make_kgrid(double k_min, double k_max, int points);

// F = (1/2pi) int dk sum_l d_l sum_j 2 n_B(eps) int |u+v|^2 2 pi r dr, thermal
// occupations at quasiparticle chemical potential zero; output is converted
// to 1/m.  Throws ConvergenceError when the k coverage leaves a tail above
// 0.1% of F (the estimate rides on the free-particle asymptote).
struct FluctuationResult {
  double f_per_m = 0.0;
  double tail_estimate_per_m = 0.0;
};
FluctuationResult fluctuation_integral(const ModeSet& modes, double temperature,
                                       const ReducedUnits& units);

struct CrossoverDiagnostics {
  std::vector<std::pair<double, double>> evaluations;  // (n, F(n))
  int iterations = 0;
  double k_max = 0.0;
  int kpoints = 0;
  std::string convention = "thermal-only (quantum term dropped)";
};

// Root of F(n) = n by bisection in log density.
double crossover_density(double temperature, const TrapGeometry& geom, const Config& cfg,
                         CrossoverDiagnostics* diag = nullptr);

// F(n) for a given linear density (used by the root finder and the tests).
double fluctuation_of_n(double n_per_m, double temperature, const TrapGeometry& geom,
                        const Config& cfg, double* k_max_out = nullptr);

}  // namespace bdg
}  // namespace ebgas

#endif
