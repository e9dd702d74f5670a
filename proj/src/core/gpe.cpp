#include "core/gpe.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {
namespace gpe {

TransverseCondensate solve(double n_per_m, const ReducedUnits& units, const RadialGrid& grid,
                           const GpeParams& params) {
  if (n_per_m < 0.0) throw ValidationError("gpe: linear density must be >= 0");
  const double n_red = n_per_m * units.transverse_length_unit;
  const double g = units.dimensionless_coupling;
  SectorBasis basis(0, params.basis_size, grid);
  const int nb = basis.size();
  const int ng = grid.size();

  TransverseCondensate out;
  out.n_red = n_red;
  out.linear_density = n_per_m;

  Eigen::VectorXd c = Eigen::VectorXd::Zero(nb);
  c[0] = 1.0;  // bare Gaussian start
  Eigen::VectorXd v_int = Eigen::VectorXd::Zero(ng);
  double mix = 0.5;
  double prev_res = 1e300;
  double mu = 1.0;

  auto psi_on_grid = [&](const Eigen::VectorXd& coef) {
    return (coef.transpose() * basis.functions()).transpose().eval();
  };

  int it = 0;
  for (; it < params.max_iter; ++it) {
    Eigen::MatrixXd h = basis.hamiltonian(v_int);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::VectorXd c_new = es.eigenvectors().col(0);
    if (c_new[0] < 0.0) c_new = -c_new;  // fix the sign convention

    Eigen::VectorXd psi = psi_on_grid(c_new);
    Eigen::VectorXd v_new(ng);
    for (int k = 0; k < ng; ++k) v_new[k] = g * n_red * psi[k] * psi[k];

    // true GP residual of the *new* state: H[v_new] c - mu c
    Eigen::MatrixXd h_self = basis.hamiltonian(v_new);
    Eigen::VectorXd hc = h_self * c_new;
    double mu_new = c_new.dot(hc);
    double res = (hc - mu_new * c_new).norm();

    double dv = (v_new - v_int).norm() / std::max(v_new.norm(), 1e-300);
    if (res > prev_res * 1.2 && mix > 0.05) mix *= 0.5;  // damp oscillation
    prev_res = res;
    v_int += mix * (v_new - v_int);
    c = c_new;
    mu = mu_new;
    out.residual = res;
    if (dv < params.tol && res < params.residual_target) {
      ++it;
      break;
    }
  }
  if (out.residual >= params.residual_target)
    throw ConvergenceError("gpe: no convergence after " + std::to_string(it) +
                           " iterations (n = " + std::to_string(n_per_m) + " /m, residual = " +
                           std::to_string(out.residual) + ")");

  Eigen::VectorXd psi = psi_on_grid(c);
  out.psi.assign(psi.data(), psi.data() + ng);
  out.coeffs = c;
  out.mu_gp = mu;
  out.iterations = it;

  // <H0> = mu - g n I4;  E/N = <H0> + (g n / 2) I4
  std::vector<double> psi4(ng);
  for (int k = 0; k < ng; ++k) psi4[k] = psi[k] * psi[k] * psi[k] * psi[k];
  double i4 = grid.integrate_radial(psi4);
  out.energy_per_atom = mu - 0.5 * g * n_red * i4;
  return out;
}

}  // namespace gpe
}  // namespace ebgas
