#include "core/bose.hpp"

#include <cmath>
#include <string>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {
namespace bose {

namespace {

// zeta(1/2 - k), k = 0..35.  The expansion
//   Li_{1/2}(e^m) = sqrt(pi/-m) + sum_k zeta(1/2 - k) m^k / k!
// converges for |m| < 2 pi; with the series/expansion split at z = 0.5 the
// worst case is |m| = ln 2, where 30 terms reach ~1e-16.
constexpr double kZetaHalfMinus[] = {
    -1.460354508809586812889,    -0.2078862249773545660173,  -0.02548520188983303594954,
    0.008516928777850330542359,  0.004441011335479431958535, -0.003091669247215833844824,
    -0.002671458019899224598982, 0.002746767939536868758423, 0.003269039572600220021717,
    -0.004416032873004889808392, -0.006672172296466640756764, 0.01114612247394281413614,
    0.02039697871594279205555,   -0.04057496748119457841023, -0.08717525590621725146911,
    0.201174049384226882435,     0.4962712199120576078695,   -1.303229250705113953899,
    -3.629759299774574127859,    10.68732706902199364077,    33.16832578569460787885,
    -108.2174750587760554048,    -370.3018783754785995408,   1326.045811749015628106,
    4959.598315043043611382,     -19338.94198837462029113,   -78486.14856921768689113,
    331023.6487454503218051,     1448811.370582726429312,    -6571686.491569957521336,
    -30854533.47239676360956,    149774871.2779347548387,    750878449.9937009494232,
    -3883945551.454817014736,    -20707995961.81036106499,   113704407197.9548776998};

double series_small(double z) {
  // plain sum; at z < 0.5 fewer than 60 terms reach 1e-17
  double sum = 0.0, zk = 1.0;
  for (int k = 1; k <= 200; ++k) {
    zk *= z;
    double term = zk / std::sqrt(static_cast<double>(k));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double expansion_near_one(double z) {
  double m = std::log(z);  // in (-0.70, 0)
  double acc = std::sqrt(constants::pi / (-m));
  double mk = 1.0, fact = 1.0;
  for (int k = 0; k < 36; ++k) {
    if (k > 0) {
      mk *= m;
      fact *= k;
    }
    acc += kZetaHalfMinus[k] * mk / fact;
  }
  return acc;
}

}  // namespace

double polylog_half(double z) {
  if (!(z >= 0.0))
    throw ValidationError("polylog_half: fugacity must be in [0, " +
                          std::to_string(fugacity_max) + "], got " + std::to_string(z));
  if (z > fugacity_max)
    throw ValidationError(
        "polylog_half: fugacity " + std::to_string(z) + " exceeds " +
        std::to_string(fugacity_max) + " (state is at or beyond saturation)");
  if (z < 0.5) return series_small(z);
  return expansion_near_one(z);
}

double occupation(double energy, const ThermoState& state) {
  state.validate();
  if (!(energy > state.mu0))
    throw ValidationError("occupation: energy " + std::to_string(energy) +
                          " must lie above mu0 = " + std::to_string(state.mu0));
  double x = (energy - state.mu0) / state.temperature;
  return 1.0 / std::expm1(x);
}

}  // namespace bose
}  // namespace ebgas
