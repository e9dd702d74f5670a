#include "core/thermometry.hpp"

#include <algorithm>
#include <cmath>

#include "core/bose.hpp"
#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/ideal.hpp"
#include "core/numerics.hpp"
#include "core/parallel.hpp"

namespace ebgas {
namespace thermometry {

namespace {

double pixel_of(const LinearDensityProfile& p) {
  return p.pixel_size > 0.0 ? p.pixel_size : p.spacing();
}

struct WingData {
  std::vector<double> drop;  // trap energy drop at each wing point, reduced
  std::vector<double> n;     // measured density
};

WingData wing_points(const LinearDensityProfile& profile, int n_ex, const TrapGeometry& geom) {
  double zc = profile.centroid();
  double delta = pixel_of(profile);
  double excl = n_ex * delta;
  WingData w;
  const double scale =
      0.5 * geom.mass * geom.omega_z * geom.omega_z / (constants::hbar * geom.omega_perp);
  for (int i = 0; i < profile.size(); ++i) {
    double dz = profile.z[i] - zc;
    if (std::abs(dz) <= excl) continue;
    w.drop.push_back(scale * dz * dz);
    w.n.push_back(profile.n[i]);
  }
  return w;
}

}  // namespace

WingFit fit_mu0(const LinearDensityProfile& profile, double temperature, int n_ex,
                const TrapGeometry& geom) {
  profile.validate(/*allow_negative=*/true);
  if (n_ex < 0) throw ValidationError("fit: n_ex must be >= 0");
  if (!(temperature > 0.0)) throw ValidationError("fit: temperature must be > 0");
  if (n_ex >= profile.size() / 2)
    throw ValidationError("fit: n_ex exceeds half the profile length");

  WingData w = wing_points(profile, n_ex, geom);
  const int npts = static_cast<int>(w.n.size());
  if (npts < 20)
    throw ValidationError("fit: only " + std::to_string(npts) +
                          " wing points left (need >= 20, ~10 per side)");

  ReducedUnits units = make_reduced_units(geom);
  auto ssr = [&](double mu0) {
    double s = 0.0;
    for (int i = 0; i < npts; ++i) {
      double model = ideal::linear_density(mu0 - w.drop[i], temperature, units);
      double d = model - w.n[i];
      s += d * d;
    }
    return s;
  };

  // every evaluated point must stay below saturation: the bound on mu0 is
  // set by the innermost wing point, so mu0 itself may exceed 1
  double min_drop = w.drop[0];
  for (double d : w.drop) min_drop = std::min(min_drop, d);
  const double mu_hi = 1.0 + temperature * std::log(bose::fugacity_max) + min_drop;
  const double mu_lo = 1.0 - 30.0 * temperature;
  BrentResult br = brent_minimize(ssr, mu_lo, mu_hi, 1e-10);
  // a pinned minimizer sits within the line-search resolution of a bound
  double eps_lo = 1e-6 * (1.0 + std::abs(mu_lo));
  double eps_hi = 1e-6 * (1.0 + std::abs(mu_hi));
  if (br.x - mu_lo < eps_lo || mu_hi - br.x < eps_hi)
    throw ConvergenceError("fit: mu0 minimizer at the search boundary (mu0 = " +
                           std::to_string(br.x) + ")");
  WingFit f;
  f.mu0 = br.x;
  f.residual = br.f;
  f.wing_points = npts;
  return f;
}

WingFitGrid scan(const LinearDensityProfile& profile, const std::vector<double>& trial_t,
                 const std::vector<int>& n_ex, const TrapGeometry& geom) {
  WingFitGrid g;
  g.trial_temperatures = trial_t;
  g.n_ex = n_ex;
  g.mu0.assign(trial_t.size(), std::vector<double>(n_ex.size(), 0.0));
  g.residual.assign(trial_t.size(), std::vector<double>(n_ex.size(), 0.0));
  g.ok.assign(trial_t.size(), std::vector<bool>(n_ex.size(), false));
  const int total = static_cast<int>(trial_t.size() * n_ex.size());
  parallel_for(total, [&](int idx) {
    int it = idx / static_cast<int>(n_ex.size());
    int ix = idx % static_cast<int>(n_ex.size());
    try {
      WingFit f = fit_mu0(profile, trial_t[it], n_ex[ix], geom);
      g.mu0[it][ix] = f.mu0;
      g.residual[it][ix] = f.residual;
      g.ok[it][ix] = true;
    } catch (const ConvergenceError&) {
      // marked failed (e.g. boundary-pinned fit at a hopeless trial T)
      g.mu0[it][ix] = std::nan("");
      g.residual[it][ix] = std::nan("");
    }
  });
  return g;
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, slope_err = 0.0;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double denom = n * sxx - sx * sx;
  LineFit lf;
  lf.slope = (n * sxy - sx * sy) / denom;
  lf.intercept = (sy - lf.slope * sx) / n;
  if (n > 2) {
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
      double r = y[i] - (lf.intercept + lf.slope * x[i]);
      ss += r * r;
    }
    lf.slope_err = std::sqrt(ss / (n - 2) * n / denom);
  }
  return lf;
}

}  // namespace

ThermometryReport select_temperature(const LinearDensityProfile& profile,
                                     const WingFitGrid& grid, const TrapGeometry& geom) {
  const auto& ts = grid.trial_temperatures;
  if (ts.size() < 4) throw ValidationError("select: need >= 4 trial temperatures");

  // regression window: N_ex > 10
  std::vector<int> widx;
  for (size_t i = 0; i < grid.n_ex.size(); ++i)
    if (grid.n_ex[i] > 10) widx.push_back(static_cast<int>(i));
  if (widx.size() < 6)
    throw ValidationError("select: need >= 6 exclusion counts above 10 (have " +
                          std::to_string(widx.size()) + ")");

  ThermometryReport rep;
  rep.trial_temperatures = ts;
  rep.nex_window_lo = grid.n_ex[widx.front()];
  rep.nex_window_hi = grid.n_ex[widx.back()];

  std::vector<double> xs, ys;
  for (size_t t = 0; t < ts.size(); ++t) {
    xs.clear();
    ys.clear();
    bool row_ok = true;
    for (int i : widx) {
      if (!grid.ok[t][i]) {
        row_ok = false;
        break;
      }
      xs.push_back(grid.n_ex[i]);
      ys.push_back(grid.mu0[t][i]);
    }
    if (!row_ok) {
      rep.slopes.push_back(std::nan(""));
      rep.slope_errs.push_back(std::nan(""));
      continue;
    }
    LineFit lf = line_fit(xs, ys);
    rep.slopes.push_back(lf.slope);
    rep.slope_errs.push_back(lf.slope_err);
  }

  // zero crossing of slope(T) over consecutive valid rows
  int ia = -1;
  for (size_t t = 0; t + 1 < ts.size(); ++t) {
    if (std::isnan(rep.slopes[t]) || std::isnan(rep.slopes[t + 1])) continue;
    if (rep.slopes[t] == 0.0 ||
        (rep.slopes[t] < 0.0) != (rep.slopes[t + 1] < 0.0)) {
      ia = static_cast<int>(t);
      break;
    }
  }
  if (ia < 0)
    throw ValidationError("select: slope(T) does not change sign over the trial range; "
                          "widen --t-range");
  double s0 = rep.slopes[ia], s1 = rep.slopes[ia + 1];
  double frac = s0 == s1 ? 0.0 : s0 / (s0 - s1);
  rep.t_best = ts[ia] + frac * (ts[ia + 1] - ts[ia]);
  rep.t_interior = ia > 0 && ia + 2 < static_cast<int>(ts.size());

  // refit at T_best over the window; mu0_best is the window mean
  std::vector<double> mu_win;
  for (int i : widx) {
    WingFit f = fit_mu0(profile, rep.t_best, grid.n_ex[i], geom);
    mu_win.push_back(f.mu0);
  }
  double mean = 0.0;
  for (double m : mu_win) mean += m;
  mean /= mu_win.size();
  double var = 0.0;
  for (double m : mu_win) var += (m - mean) * (m - mean);
  rep.mu0_best = mean;
  rep.sigma_mu0 = mu_win.size() > 1 ? std::sqrt(var / (mu_win.size() - 1)) : 0.0;

  // T uncertainty: regression scatter mapped through d slope / d T
  double dsdt = (s1 - s0) / (ts[ia + 1] - ts[ia]);
  double serr = 0.5 * (rep.slope_errs[ia] + rep.slope_errs[ia + 1]);
  rep.sigma_t = dsdt != 0.0 ? std::abs(serr / dsdt) : 0.0;

  rep.mu_qc = qc_mu_from_peak(profile, geom);
  return rep;
}

double qc_mu_from_peak(const LinearDensityProfile& profile, const TrapGeometry& geom) {
  double n0 = profile.peak_density();
  if (!(n0 > 0.0)) throw ValidationError("qc_mu_from_peak: peak density must be > 0");
  return std::sqrt(1.0 + 4.0 * n0 * geom.scattering_length);
}

std::vector<int> default_nex_list(const LinearDensityProfile& profile) {
  // keep >= 15 wing points per side at the largest exclusion
  int half = profile.size() / 2;
  int n_max = std::max(12, half - 16);
  std::vector<int> out;
  for (int n = 0; n <= n_max; ++n) out.push_back(n);
  return out;
}

std::vector<double> default_trial_temperatures(const LinearDensityProfile& profile,
                                               const TrapGeometry& geom) {
  // classical equipartition guess from the cloud variance
  double zc = profile.centroid();
  double sw = 0.0, swz2 = 0.0;
  for (int i = 0; i < profile.size(); ++i) {
    double w = std::max(profile.n[i], 0.0);
    sw += w;
    swz2 += w * (profile.z[i] - zc) * (profile.z[i] - zc);
  }
  if (!(sw > 0.0)) throw ValidationError("thermometry: profile has no weight");
  double var = swz2 / sw;
  double t_guess = geom.mass * geom.omega_z * geom.omega_z * var /
                   (constants::hbar * geom.omega_perp);
  std::vector<double> ts;
  for (int i = 0; i < 9; ++i) ts.push_back(t_guess * (0.8 + 0.05 * i));
  return ts;
}

}  // namespace thermometry
}  // namespace ebgas
