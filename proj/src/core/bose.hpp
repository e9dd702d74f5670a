#ifndef EBGAS_BOSE_HPP
#define EBGAS_BOSE_HPP

#include "core/units.hpp"

namespace ebgas {
namespace bose {

// Largest fugacity accepted by polylog_half.  Every physical call site has
// mu_eff strictly below the lowest level, so z = 1 is never legitimate.
inline constexpr double fugacity_max = 0.9999;

// g_{1/2}(z) = sum_{k>=1} z^k / sqrt(k), relative accuracy 1e-10 on [0, fugacity_max].
// Throws ValidationError outside the domain.
double polylog_half(double z);

// 1 / (exp((energy - mu0)/T) - 1); requires energy > mu0.
double occupation(double energy, const ThermoState& state);

}  // namespace bose
}  // namespace ebgas

#endif
