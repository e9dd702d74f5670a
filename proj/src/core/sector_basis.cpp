#include "core/sector_basis.hpp"

#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {

SectorBasis::SectorBasis(int l, int n_basis, const RadialGrid& grid)
    : l_(l), n_(n_basis), grid_(grid) {
  if (l < 0) throw ValidationError("sector basis: l must be >= 0");
  if (n_basis < 1) throw ValidationError("sector basis: need at least one function");
  const int ng = grid_.size();
  phi_.resize(n_, ng);

  // phi_0 in log space: N_0 r^l e^{-r^2/2}, N_0 = 1/sqrt(pi l!); high-l
  // prefactors overflow otherwise.
  const double ln_n0 = -0.5 * (std::log(constants::pi) + std::lgamma(l + 1.0));
  for (int k = 0; k < ng; ++k) {
    double r = grid_.r[k];
    if (r <= 0.0) {
      phi_(0, k) = (l == 0) ? std::exp(ln_n0) : 0.0;
    } else {
      phi_(0, k) = std::exp(ln_n0 + l * std::log(r) - 0.5 * r * r);
    }
  }
  if (n_ > 1) {
    for (int k = 0; k < ng; ++k) {
      double x = grid_.r[k] * grid_.r[k];
      phi_(1, k) = std::sqrt(1.0 / (l + 1.0)) * (l + 1.0 - x) * phi_(0, k);
    }
  }
  for (int j = 1; j + 1 < n_; ++j) {
    double a = std::sqrt((j + 1.0) / (j + l + 1.0)) / (j + 1.0);
    double b = std::sqrt((j + 1.0) * j * (j + l) / (j + l + 1.0)) / (j + 1.0);
    for (int k = 0; k < ng; ++k) {
      double x = grid_.r[k] * grid_.r[k];
      phi_(j + 1, k) = a * (2.0 * j + l + 1.0 - x) * phi_(j, k) - b * phi_(j - 1, k);
    }
  }

  phi_w_.resize(n_, ng);
  for (int k = 0; k < ng; ++k) {
    double s = std::sqrt(2.0 * constants::pi * grid_.r[k] * grid_.weight[k]);
    phi_w_.col(k) = phi_.col(k) * s;
  }
}

Eigen::MatrixXd SectorBasis::project(const Eigen::VectorXd& v_on_grid) const {
  Eigen::MatrixXd m = phi_w_ * v_on_grid.asDiagonal() * phi_w_.transpose();
  // enforce exact symmetry against rounding
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd SectorBasis::hamiltonian(const Eigen::VectorXd& v_on_grid) const {
  Eigen::MatrixXd h = project(v_on_grid);
  for (int j = 0; j < n_; ++j) h(j, j) += bare_energy(j);
  return h;
}

const SectorBasis& SectorBasisCache::get(int l, int min_size) {
  auto& stack = by_l_[l];
  if (stack.empty() || stack.back()->size() < min_size)
    stack.push_back(std::make_unique<SectorBasis>(l, min_size, grid_));
  return *stack.back();
}

}  // namespace ebgas
