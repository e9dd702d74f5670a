#include "core/longitudinal.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {
namespace longitudinal {

namespace {

std::mutex fftw_mutex;  // plan creation/destruction is not thread-safe

// <T>_exact via DST-I: the FD eigenvector lives on a Dirichlet box whose sine
// modes have exact kinetic energies k_m^2/2, k_m = pi m / L.
class KineticRefiner {
 public:
  explicit KineticRefiner(int n, double spacing) : n_(n), h_(spacing) {
    buf_in_ = fftw_alloc_real(n);
    buf_out_ = fftw_alloc_real(n);
    std::lock_guard<std::mutex> lk(fftw_mutex);
    plan_ = fftw_plan_r2r_1d(n, buf_in_, buf_out_, FFTW_RODFT00, FFTW_ESTIMATE);
  }
  ~KineticRefiner() {
    std::lock_guard<std::mutex> lk(fftw_mutex);
    fftw_destroy_plan(plan_);
    fftw_free(buf_in_);
    fftw_free(buf_out_);
  }
  KineticRefiner(const KineticRefiner&) = delete;
  KineticRefiner& operator=(const KineticRefiner&) = delete;

  double mean_kinetic(const double* psi) {
    for (int i = 0; i < n_; ++i) buf_in_[i] = psi[i];
    fftw_execute(plan_);
    const double box_len = (n_ + 1) * h_;
    double num = 0.0, den = 0.0;
    for (int m = 0; m < n_; ++m) {
      double k = constants::pi * (m + 1) / box_len;
      double a2 = buf_out_[m] * buf_out_[m];
      num += a2 * 0.5 * k * k;
      den += a2;
    }
    return den > 0.0 ? num / den : 0.0;
  }

 private:
  int n_;
  double h_;
  double* buf_in_;
  double* buf_out_;
  fftw_plan plan_;
};

Spectrum solve_range(const std::vector<double>& v, double h, char range, double vu, int iu,
                     bool want_vectors) {
  const int n = static_cast<int>(v.size());
  if (n < 16) throw ValidationError("longitudinal: grid too small");
  if (!(h > 0.0)) throw ValidationError("longitudinal: spacing must be > 0");

  std::vector<double> diag(n), off(n - 1, -0.5 / (h * h));
  for (int i = 0; i < n; ++i) diag[i] = 1.0 / (h * h) + v[i];

  // counting pass
  std::vector<double> d0 = diag, e0 = off;
  double vl = *std::min_element(v.begin(), v.end()) - 1.0;
  int m = 0;
  std::vector<double> w(n);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(n) + 2);
  lapack_int info;
  if (range == 'V') {
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', n, d0.data(), e0.data(), vl, vu, 1, 1,
                          0.0, &m, w.data(), nullptr, 1, isuppz.data());
    if (info != 0) throw ConvergenceError("longitudinal: eigenvalue count failed");
    if (m == 0) return {};
  } else {
    m = iu;
  }

  Spectrum out;
  out.energy.resize(m);
  std::vector<double> zmat;
  d0 = diag;
  e0 = off;
  if (want_vectors) {
    zmat.resize(static_cast<size_t>(n) * m);
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d0.data(), e0.data(), 0.0, 0.0, 1, m,
                          0.0, &m, w.data(), zmat.data(), n, isuppz.data());
  } else {
    info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'I', n, d0.data(), e0.data(), 0.0, 0.0, 1, m,
                          0.0, &m, w.data(), nullptr, 1, isuppz.data());
  }
  if (info != 0) throw ConvergenceError("longitudinal: eigensolve failed (dstevr)");

  for (int k = 0; k < m; ++k) out.energy[k] = w[k];

  if (want_vectors) {
    out.psi.assign(m, std::vector<double>(n));
    KineticRefiner refiner(n, h);
    const double invsqrt_h = 1.0 / std::sqrt(h);
    for (int k = 0; k < m; ++k) {
      const double* col = zmat.data() + static_cast<size_t>(k) * n;
      // Rayleigh refinement: <V> from the vector, <T> from the sine modes
      double pot = 0.0;
      for (int i = 0; i < n; ++i) pot += col[i] * col[i] * v[i];
      out.energy[k] = refiner.mean_kinetic(col) + pot;
      for (int i = 0; i < n; ++i) out.psi[k][i] = col[i] * invsqrt_h;
    }
    // refinement can reorder near-degenerate pairs
    for (int k = 1; k < m; ++k)
      if (out.energy[k] < out.energy[k - 1]) {
        std::swap(out.energy[k], out.energy[k - 1]);
        std::swap(out.psi[k], out.psi[k - 1]);
      }
  }
  return out;
}

}  // namespace

Spectrum solve(const std::vector<double>& v_on_grid, double spacing, double e_max,
               bool want_vectors) {
  return solve_range(v_on_grid, spacing, 'V', e_max, 0, want_vectors);
}

Spectrum solve_lowest(const std::vector<double>& v_on_grid, double spacing, int count,
                      bool want_vectors) {
  if (count < 1) throw ValidationError("longitudinal: count must be >= 1");
  if (count > static_cast<int>(v_on_grid.size()))
    throw ValidationError("longitudinal: more states than grid points");
  return solve_range(v_on_grid, spacing, 'I', 0.0, count, want_vectors);
}

}  // namespace longitudinal
}  // namespace ebgas
