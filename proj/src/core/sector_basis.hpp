#ifndef EBGAS_SECTOR_BASIS_HPP
#define EBGAS_SECTOR_BASIS_HPP

#include <Eigen/Dense>
#include <map>
#include <memory>

#include "core/units.hpp"

namespace ebgas {

// Normalized radial eigenfunctions of the bare 2D isotropic oscillator in one
// angular-momentum sector, sampled on a RadialGrid:
//   phi_j(r) ~ r^l L_j^{(l)}(r^2) e^{-r^2/2},  int phi_j^2 2 pi r dr = 1,
//   bare energy 2j + l + 1.
// Radially symmetric operators are projected onto this basis by quadrature;
// the bare kinetic + trap part is diagonal and exact, so only the potential
// carries quadrature error.
class SectorBasis {
 public:
  SectorBasis(int l, int n_basis, const RadialGrid& grid);

  int l() const { return l_; }
  int size() const { return n_; }
  const RadialGrid& grid() const { return grid_; }

  // phi_(j, k) = phi_j(r_k)
  const Eigen::MatrixXd& functions() const { return phi_; }

  double bare_energy(int j) const { return 2.0 * j + l_ + 1.0; }

  // M_ij = int phi_i V phi_j 2 pi r dr for a potential sampled on the grid
  Eigen::MatrixXd project(const Eigen::VectorXd& v_on_grid) const;

  // H = diag(2j + l + 1) + project(V)
  Eigen::MatrixXd hamiltonian(const Eigen::VectorXd& v_on_grid) const;

  // Functions on the grid for basis-coefficient vectors (columns): C^T phi
  Eigen::MatrixXd on_grid(const Eigen::MatrixXd& coeffs) const { return coeffs.transpose() * phi_; }

 private:
  int l_;
  int n_;
  RadialGrid grid_;
  Eigen::MatrixXd phi_;    // n x grid
  Eigen::MatrixXd phi_w_;  // phi scaled by sqrt(2 pi r w)
};

// Lazily grown per-sector basis cache shared across solver iterations.
// Superseded (smaller) bases are kept alive so references handed out earlier
// stay valid under concurrent use.
class SectorBasisCache {
 public:
  explicit SectorBasisCache(const RadialGrid& grid) : grid_(grid) {}
  const SectorBasis& get(int l, int min_size);
  const RadialGrid& grid() const { return grid_; }

 private:
  RadialGrid grid_;
  std::map<int, std::vector<std::unique_ptr<SectorBasis>>> by_l_;
};

}  // namespace ebgas

#endif
