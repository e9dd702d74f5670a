#ifndef EBGAS_NUMERICS_HPP
#define EBGAS_NUMERICS_HPP

#include <functional>
#include <vector>

namespace ebgas {

// Monotonicity-preserving cubic interpolant (Fritsch-Carlson slopes).
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);  // x strictly ascending
  double operator()(double xq) const;                   // clamps outside [x0, xn]
  bool valid() const { return !x_.empty(); }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free simplex search.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& x0, const std::vector<double>& step,
                           int max_evals, double f_tol);

// Scalar minimum of f on [a, b] by golden-section/parabolic steps.
struct BrentResult {
  double x = 0.0;
  double f = 0.0;
  bool at_boundary = false;
};
BrentResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double x_tol, int max_iter = 200);

// Root of f on [a, b]; requires a sign change.  rel_tol applies to |x|.
double bisect_root(const std::function<double(double)>& f, double a, double b, double fa,
                   double fb, double rel_tol, int max_iter = 200);

}  // namespace ebgas

#endif
