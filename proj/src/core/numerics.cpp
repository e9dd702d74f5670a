#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace ebgas {

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw ValidationError("pchip: need >= 2 matching samples");
  for (size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw ValidationError("pchip: x must be strictly ascending");
  d_.assign(n, 0.0);
  std::vector<double> h(n - 1), delta(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = delta[0];
    return;
  }
  for (size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      double w1 = 2.0 * h[i] + h[i - 1];
      double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  };
  d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double Pchip::operator()(double xq) const {
  const size_t n = x_.size();
  if (xq <= x_[0]) xq = x_[0];
  if (xq >= x_[n - 1]) xq = x_[n - 1];
  size_t i = std::upper_bound(x_.begin(), x_.end(), xq) - x_.begin();
  if (i > 0) --i;
  if (i >= n - 1) i = n - 2;
  double h = x_[i + 1] - x_[i];
  double t = (xq - x_[i]) / h;
  double t2 = t * t, t3 = t2 * t;
  double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& x0, const std::vector<double>& step,
                           int max_evals, double f_tol) {
  const int n = static_cast<int>(x0.size());
  MinimizeResult res;
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  int evals = 0;
  for (int i = 0; i < n; ++i) pts[i + 1][i] += step[i] != 0.0 ? step[i] : 1e-3;
  for (int i = 0; i <= n; ++i) {
    fv[i] = f(pts[i]);
    ++evals;
  }
  auto order = [&]() {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> f2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      f2[i] = fv[idx[i]];
    }
    pts.swap(p2);
    fv.swap(f2);
  };
  order();
  while (evals < max_evals) {
    if (std::abs(fv[n] - fv[0]) <= f_tol * (std::abs(fv[0]) + f_tol)) break;
    std::vector<double> cen(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cen[j] += pts[i][j] / n;
    auto blend = [&](double coef) {
      std::vector<double> p(n);
      for (int j = 0; j < n; ++j) p[j] = cen[j] + coef * (pts[n][j] - cen[j]);
      return p;
    };
    auto xr = blend(-1.0);
    double fr = f(xr);
    ++evals;
    if (fr < fv[0]) {
      auto xe = blend(-2.0);
      double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[n] = xe;
        fv[n] = fe;
      } else {
        pts[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      pts[n] = xr;
      fv[n] = fr;
    } else {
      auto xc = blend(fr < fv[n] ? -0.5 : 0.5);
      double fc = f(xc);
      ++evals;
      if (fc < std::min(fr, fv[n])) {
        pts[n] = xc;
        fv[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int j = 0; j < n; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          fv[i] = f(pts[i]);
          ++evals;
        }
      }
    }
    order();
  }
  res.x = pts[0];
  res.f = fv[0];
  res.evaluations = evals;
  res.converged = std::abs(fv[n] - fv[0]) <= f_tol * (std::abs(fv[0]) + f_tol);
  return res;
}

BrentResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                           double x_tol, int max_iter) {
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    double m = 0.5 * (a + b);
    double tol = x_tol * (std::abs(x) + 1e-12) + 1e-15;
    if (std::abs(x - m) <= 2.0 * tol - 0.5 * (b - a)) break;
    double p = 0.0, q = 0.0, r = 0.0;
    bool use_para = false;
    if (std::abs(e) > tol) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      if (std::abs(p) < std::abs(0.5 * q * e) && p > q * (a - x) && p < q * (b - x)) {
        use_para = true;
        e = d;
        d = p / q;
      }
    }
    if (!use_para) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    double u = x + (std::abs(d) >= tol ? d : (d > 0 ? tol : -tol));
    double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw; w = x; fw = fx; x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw; w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  BrentResult res;
  res.x = x;
  res.f = fx;
  res.at_boundary = false;
  return res;
}

double bisect_root(const std::function<double(double)>& f, double a, double b, double fa,
                   double fb, double rel_tol, int max_iter) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0) throw ConvergenceError("bisect: no sign change in bracket");
  for (int it = 0; it < max_iter; ++it) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if (fa * fm < 0.0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
    if ((b - a) <= rel_tol * std::abs(m)) return 0.5 * (a + b);
  }
  throw ConvergenceError("bisect: max iterations reached");
}

}  // namespace ebgas
