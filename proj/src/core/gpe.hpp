#ifndef EBGAS_GPE_HPP
#define EBGAS_GPE_HPP

#include <Eigen/Dense>
#include <vector>

#include "core/sector_basis.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace gpe {

// Transverse condensate mode of the longitudinally homogeneous gas:
// [ -1/2 lap + r^2/2 + g~ n~ |psi|^2 ] psi = mu psi,  int psi^2 2 pi r dr = 1.
struct TransverseCondensate {
  std::vector<double> psi;   // on the radial grid, nodeless, positive
  Eigen::VectorXd coeffs;    // in the l = 0 oscillator basis
  double mu_gp = 0.0;        // reduced chemical potential
  double linear_density = 0.0;  // n (1/m)
  double n_red = 0.0;        // n * a_perp
  double residual = 0.0;     // basis-space GP residual norm
  int iterations = 0;
  // transverse energy per atom <H0> + (g~ n~ / 2) I4; mu = <H0> + g~ n~ I4
  double energy_per_atom = 0.0;
};

struct GpeParams {
  int basis_size = 60;
  double tol = 1e-12;   // relative change of the interaction potential
  double residual_target = 1e-8;
  int max_iter = 4000;
};

TransverseCondensate solve(double n_per_m, const ReducedUnits& units, const RadialGrid& grid,
                           const GpeParams& params = {});

}  // namespace gpe
}  // namespace ebgas

#endif
