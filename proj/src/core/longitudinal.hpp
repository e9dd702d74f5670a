#ifndef EBGAS_LONGITUDINAL_HPP
#define EBGAS_LONGITUDINAL_HPP

#include <vector>

namespace ebgas {
namespace longitudinal {

// Eigenstates of H = -1/2 d^2/dz^2 + V(z) on a uniform grid with Dirichlet
// walls (reduced units; z in a_perp).  psi rows are grid-normalized so that
// sum_i psi(i)^2 h = 1.
struct Spectrum {
  std::vector<double> energy;            // ascending
  std::vector<std::vector<double>> psi;  // one row per state (empty if not requested)
};

// All states with E <= e_max.  Eigenvalues are refined by a Rayleigh quotient
// with the exact (spectral) kinetic operator on the box, which removes the
// O(h^2) finite-difference dispersion bias; eigenvectors stay second order.
Spectrum solve(const std::vector<double>& v_on_grid, double spacing, double e_max,
               bool want_vectors);

// Lowest `count` states only.
Spectrum solve_lowest(const std::vector<double>& v_on_grid, double spacing, int count,
                      bool want_vectors);

}  // namespace longitudinal
}  // namespace ebgas

#endif
