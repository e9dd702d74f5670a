#include "core/bdg.hpp"

#include <algorithm>
#include <cmath>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/numerics.hpp"
#include "core/parallel.hpp"

namespace ebgas {
namespace bdg {

BdgParams BdgParams::from_config(const Config& cfg) {
  BdgParams p;
  p.lmax = cfg.get_int("bdg_lmax");
  p.jmax = cfg.get_int("bdg_jmax");
  p.kpoints = cfg.get_int("bdg_kpoints");
  p.basis_size = cfg.get_int("bdg_basis");
  p.eps_cut_kt = cfg.get("bdg_eps_cut_kt");
  return p;
}

std::vector<double> make_kgrid(double k_min, double k_max, int points) {
  if (!(k_min > 0.0) || !(k_max > k_min)) throw ValidationError("bdg: bad k grid bounds");
  if (points < 8) throw ValidationError("bdg: need at least 8 k points");
  std::vector<double> k(points);
  double lr = std::log(k_max / k_min);
  for (int i = 0; i < points; ++i) k[i] = k_min * std::exp(lr * i / (points - 1.0));
  return k;
}

ModeSet solve_modes(const gpe::TransverseCondensate& cond, const ReducedUnits& units,
                    const RadialGrid& grid, const std::vector<double>& kgrid,
                    const BdgParams& params, double temperature_for_cut) {
  const double g = units.dimensionless_coupling;
  const double eps_keep = temperature_for_cut > 0.0
                              ? params.eps_cut_kt * temperature_for_cut
                              : 1e300;
  const int ng = grid.size();

  // interaction profile g n psi0^2 on the grid
  Eigen::VectorXd v_int(ng);
  for (int k = 0; k < ng; ++k) v_int[k] = g * cond.n_red * cond.psi[k] * cond.psi[k];

  ModeSet out;
  out.kgrid = kgrid;
  out.lmax = params.lmax;
  out.jmax = params.jmax;

  struct SectorResult {
    std::vector<Mode> modes;
  };
  std::vector<SectorResult> per_l(params.lmax + 1);

  auto run_sector = [&](int l) {
    SectorBasis basis(l, params.basis_size, grid);
    Eigen::MatrixXd proj = basis.project(v_int);
    Eigen::MatrixXd h_gp = proj;
    for (int j = 0; j < basis.size(); ++j) h_gp(j, j) += basis.bare_energy(j);

    for (double kz : kgrid) {
      // S = H_gp - mu + k^2/2,  T = S + 2 B with B the pair projection
      Eigen::MatrixXd s = h_gp;
      double shift = 0.5 * kz * kz - cond.mu_gp;
      for (int j = 0; j < basis.size(); ++j) s(j, j) += shift;
      Eigen::MatrixXd t = s + 2.0 * proj;

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
      double s_min = es.eigenvalues().minCoeff();
      if (s_min <= 0.0)
        throw ConvergenceError("bdg: S = A - B not positive definite at k = " +
                               std::to_string(kz) + ", l = " + std::to_string(l) +
                               " (min eig " + std::to_string(s_min) + ")");
      Eigen::VectorXd sq = es.eigenvalues().cwiseSqrt();
      Eigen::MatrixXd s_half = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
      Eigen::MatrixXd s_half_inv =
          es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();

      Eigen::MatrixXd m = s_half * t * s_half;
      m = 0.5 * (m + m.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(m);

      int take = std::min(params.jmax, static_cast<int>(em.eigenvalues().size()));
      for (int j = 0; j < take; ++j) {
        double e2 = em.eigenvalues()[j];
        if (e2 < -1e-10)
          throw ConvergenceError("bdg: negative eps^2 = " + std::to_string(e2) +
                                 " at k = " + std::to_string(kz) + ", l = " + std::to_string(l));
        double eps = std::sqrt(std::max(e2, 0.0));
        if (eps > eps_keep) break;
        if (eps <= 0.0) continue;  // numerically zero mode

        Eigen::VectorXd y = em.eigenvectors().col(j);
        y /= std::sqrt(eps * y.squaredNorm());
        Eigen::VectorXd s_vec = s_half * y;
        Eigen::VectorXd d_vec = eps * (s_half_inv * y);
        Mode mode;
        mode.k = kz;
        mode.l = l;
        mode.j = j;
        mode.energy = eps;
        mode.u = 0.5 * (s_vec + d_vec);
        mode.v = 0.5 * (s_vec - d_vec);
        mode.s_norm = s_vec.squaredNorm();
        mode.norm_check = mode.u.squaredNorm() - mode.v.squaredNorm();
        per_l[l].modes.push_back(std::move(mode));
      }
    }
  };
  parallel_for(params.lmax + 1, run_sector);

  for (auto& sr : per_l)
    out.modes.insert(out.modes.end(), std::make_move_iterator(sr.modes.begin()),
                     std::make_move_iterator(sr.modes.end()));
  return out;
}

FluctuationResult fluctuation_integral(const ModeSet& modes, double temperature,
                                       const ReducedUnits& units) {
  if (!(temperature > 0.0)) throw ValidationError("bdg: temperature must be > 0");
  const auto& kg = modes.kgrid;
  const int nk = static_cast<int>(kg.size());

  // integrand per k: sum over sectors/branches of d_l * 2 n_B(eps) * |u+v|^2
  std::vector<double> integrand(nk, 0.0);
  for (const auto& m : modes.modes) {
    int ik = static_cast<int>(std::lower_bound(kg.begin(), kg.end(), m.k) - kg.begin());
    if (ik >= nk || kg[ik] != m.k) continue;
    double deg = m.l == 0 ? 1.0 : 2.0;
    double occ = 1.0 / std::expm1(m.energy / temperature);
    integrand[ik] += deg * 2.0 * occ * m.s_norm;
  }

  // trapezoid over k plus the flat continuation down to k = 0 (the integrand
  // approaches a constant there: n_B ~ T/eps and |u+v|^2 ~ eps/E_k)
  double integral = integrand[0] * kg[0];
  for (int i = 1; i < nk; ++i)
    integral += 0.5 * (integrand[i] + integrand[i - 1]) * (kg[i] - kg[i - 1]);

  // tail beyond k_max: free asymptote eps ~ k^2/2, occupation e^{-eps/T}
  double k_top = kg[nk - 1];
  double eps_top = 0.5 * k_top * k_top;
  double tail = integrand[nk - 1] * temperature / std::max(k_top, 1e-12);

  FluctuationResult res;
  res.f_per_m = integral / (2.0 * constants::pi) / units.transverse_length_unit;
  res.tail_estimate_per_m = tail / (2.0 * constants::pi) / units.transverse_length_unit;
  if (res.tail_estimate_per_m > 1e-3 * std::max(res.f_per_m, 1e-300))
    throw ConvergenceError("bdg: k grid too short, tail estimate " +
                           std::to_string(res.tail_estimate_per_m) + " /m vs F = " +
                           std::to_string(res.f_per_m) + " /m (eps_top = " +
                           std::to_string(eps_top) + ")");
  return res;
}

double fluctuation_of_n(double n_per_m, double temperature, const TrapGeometry& geom,
                        const Config& cfg, double* k_max_out) {
  ReducedUnits units = make_reduced_units(geom);
  RadialGrid grid = RadialGrid::from_config(cfg);
  BdgParams params = BdgParams::from_config(cfg);
  gpe::GpeParams gp;
  gp.basis_size = std::max(params.basis_size, 40);
  gpe::TransverseCondensate cond = gpe::solve(n_per_m, units, grid, gp);

  // k_max from the free asymptote: eps(k_max) ~ k^2/2 ~ cut * T + mean field
  double mean_field = 2.0 * units.dimensionless_coupling * cond.n_red;  // upper-ish bound
  double k_max = std::sqrt(2.0 * (params.eps_cut_kt * temperature + mean_field + 2.0));
  std::vector<double> kg = make_kgrid(params.k_min, k_max, params.kpoints);
  ModeSet modes = solve_modes(cond, units, grid, kg, params, temperature);
  if (k_max_out) *k_max_out = k_max;
  return fluctuation_integral(modes, temperature, units).f_per_m;
}

double crossover_density(double temperature, const TrapGeometry& geom, const Config& cfg,
                         CrossoverDiagnostics* diag) {
  if (!(temperature > 0.0)) throw ValidationError("crossover: temperature must be > 0");
  double lo = cfg.get("crossover_bracket_lo_per_m");
  double hi = cfg.get("crossover_bracket_hi_per_m");
  double tol = cfg.get("crossover_tol_rel");
  CrossoverDiagnostics local;
  CrossoverDiagnostics* d = diag ? diag : &local;

  auto excess = [&](double ln_n) {
    double n = std::exp(ln_n);
    double kmax = 0.0;
    double f = fluctuation_of_n(n, temperature, geom, cfg, &kmax);
    d->evaluations.push_back({n, f});
    d->k_max = kmax;
    ++d->iterations;
    return std::log(f / n);  // log keeps the decades tame; same root
  };

  double la = std::log(lo), lb = std::log(hi);
  double fa = excess(la), fb = excess(lb);
  if (fa * fb > 0.0)
    throw ConvergenceError("crossover: no sign change of F(n) - n on the bracket [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "] /m");
  // bisection on log n until the density interval is within the tolerance
  for (int it = 0; it < 200; ++it) {
    double lm = 0.5 * (la + lb);
    double fm = excess(lm);
    if (fa * fm <= 0.0) {
      lb = lm;
      fb = fm;
    } else {
      la = lm;
      fa = fm;
    }
    if ((lb - la) <= std::log1p(tol)) break;
  }
  d->kpoints = cfg.get_int("bdg_kpoints");
  return std::exp(0.5 * (la + lb));
}

}  // namespace bdg
}  // namespace ebgas
