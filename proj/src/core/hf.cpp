#include "core/hf.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "core/bose.hpp"
#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/ideal.hpp"
#include "core/parallel.hpp"

namespace ebgas {
namespace hf {

SolverParams SolverParams::from_config(const Config& cfg) {
  SolverParams p;
  p.mix_alpha = cfg.get("hf_mix_alpha");
  p.max_iter = cfg.get_int("hf_max_iter");
  p.tol = cfg.get("hf_tol");
  p.tail_rel = cfg.get("hf_tail_rel");
  p.variational_starts = cfg.get_int("variational_starts");
  p.variational_max_evals = cfg.get_int("variational_max_evals");
  p.xi_target = cfg.get("variational_xi_target");
  p.threads = cfg.get_int("threads");
  return p;
}

std::vector<double> HermiteTrial::evaluate(const RadialGrid& grid) const {
  // physicists' Hermite H_0, H_2, H_4, H_6 via upward recurrence
  std::vector<double> out(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    double x = grid.r[k] / r0;
    double H[7];
    H[0] = 1.0;
    H[1] = 2.0 * x;
    for (int n = 1; n < 6; ++n) H[n + 1] = 2.0 * x * H[n] - 2.0 * n * H[n - 1];
    double val = c[0] * H[0] + c[1] * H[2] + c[2] * H[4] + c[3] * H[6];
    out[k] = val * std::exp(-0.5 * x * x);
  }
  return out;
}

Solver::Solver(const TrapGeometry& geom, const Config& cfg)
    : units_(make_reduced_units(geom)),
      params_(SolverParams::from_config(cfg)),
      cache_(RadialGrid::from_config(cfg)),
      coupling_(units_.dimensionless_coupling) {}

Solver::Solver(const ReducedUnits& units, const RadialGrid& grid, const SolverParams& params)
    : units_(units), params_(params), cache_(grid), coupling_(units.dimensionless_coupling) {}

MapResult Solver::thermal_density(const std::vector<double>& rho_in, double mu,
                                  double temperature, bool clamp, double min_energy_cap) const {
  if (!(temperature > 0.0)) throw ValidationError("hf: temperature must be > 0");
  const RadialGrid& grid = cache_.grid();
  if (static_cast<int>(rho_in.size()) != grid.size())
    throw ValidationError("hf: rho_in size does not match the radial grid");

  // Bare-ladder cutoff is conservative: the mean-field term is positive
  // semidefinite, so every HF level lies at or above its bare parent and the
  // ideal-gas tail bound caps the HF tail too.
  const double mu_eff = std::min(mu, 1.0 - 1e-3 * temperature);
  double e_cut = ideal::ladder_cutoff(mu_eff, temperature, params_.tail_rel) + 1.0;
  if (mu > mu_eff) e_cut += (mu - mu_eff) + 2.0;  // clamped iterates above saturation
  e_cut = std::max(e_cut, min_energy_cap);
  const int l_max = static_cast<int>(std::floor(e_cut - 1.0));
  const double lambda_t = std::sqrt(2.0 * constants::pi / temperature);
  const bool zero_coupling = coupling_ == 0.0 ||
      *std::max_element(rho_in.begin(), rho_in.end()) == 0.0;

  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(rho_in.data(), rho_in.size());
  v *= 2.0 * coupling_;

  struct SectorOut {
    std::vector<double> rho;
    double nh = 0.0;
    std::vector<TransverseSpectrum::Mode> modes;
    bool clamped = false;
  };
  std::vector<SectorOut> out(l_max + 1);

  std::mutex basis_mtx;
  auto run_sector = [&](int l) {
    const int j_count = static_cast<int>(std::floor((e_cut - l - 1.0) / 2.0)) + 1;
    if (j_count < 1) return;
    const SectorBasis* basis;
    {
      std::lock_guard<std::mutex> lk(basis_mtx);
      basis = &cache_.get(l, j_count + params_.extra_basis);
    }
    const int nb = basis->size();
    Eigen::VectorXd energies(nb);
    Eigen::MatrixXd funcs;  // modes x grid
    if (zero_coupling) {
      for (int j = 0; j < nb; ++j) energies[j] = basis->bare_energy(j);
      funcs = basis->functions();
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(basis->hamiltonian(v));
      energies = es.eigenvalues();
      funcs = basis->on_grid(es.eigenvectors());
    }
    SectorOut& so = out[l];
    so.rho.assign(cache_.grid().size(), 0.0);
    const double deg = (l == 0) ? 1.0 : 2.0;
    for (int j = 0; j < nb && j < j_count; ++j) {
      double e = energies[j];
      double z = std::exp((mu - e) / temperature);
      if (z > bose::fugacity_max) {
        if (!clamp)
          throw ValidationError("hf: saturation, mu = " + std::to_string(mu) +
                                " reaches level E = " + std::to_string(e) + " (l=" +
                                std::to_string(l) + ", j=" + std::to_string(j) + ")");
        z = bose::fugacity_max;
        so.clamped = true;
      }
      double occ = bose::polylog_half(z) / lambda_t;  // 1D line density of this mode
      so.nh += deg * occ;
      for (int k = 0; k < cache_.grid().size(); ++k) {
        double f = funcs(j, k);
        so.rho[k] += deg * occ * f * f;
      }
      so.modes.push_back({l, j, e});
    }
  };
  parallel_for(l_max + 1, run_sector, params_.threads);

  MapResult res;
  res.density.rho.assign(grid.size(), 0.0);
  for (const auto& so : out) {
    if (so.rho.empty()) continue;
    for (int k = 0; k < grid.size(); ++k) res.density.rho[k] += so.rho[k];
    res.density.linear_density += so.nh;
    res.clamped = res.clamped || so.clamped;
    res.spectrum.modes.insert(res.spectrum.modes.end(), so.modes.begin(), so.modes.end());
  }
  std::sort(res.spectrum.modes.begin(), res.spectrum.modes.end(),
            [](const auto& a, const auto& b) { return a.energy < b.energy; });
  if (!clamp && !res.spectrum.modes.empty() && mu >= res.spectrum.modes.front().energy)
    throw ValidationError("hf: saturation, mu above the lowest transverse level");
  return res;
}

SolveResult Solver::assemble_result(const std::vector<double>& rho, double mu, double T,
                                    SelfConsistencyReport rep) const {
  // final strict map fixes the spectrum and the fixed-point check
  MapResult once = thermal_density(rho, mu, T, /*clamp=*/false);
  MapResult twice = thermal_density(once.density.rho, mu, T, /*clamp=*/true);
  rep.nh = once.density.linear_density;
  rep.nh_prime = twice.density.linear_density;
  SolveResult res;
  res.density = once.density;
  res.spectrum = std::move(once.spectrum);
  res.report = std::move(rep);
  return res;
}

SolveResult Solver::solve_iterative_nothrow(double mu, double temperature,
                                            const std::vector<double>* seed) const {
  const RadialGrid& grid = cache_.grid();
  std::vector<double> rho = seed ? *seed : std::vector<double>(grid.size(), 0.0);
  if (static_cast<int>(rho.size()) != grid.size())
    throw ValidationError("hf: seed size does not match the radial grid");

  if (coupling_ == 0.0) {
    // the map does not depend on rho; its first application is the fixed point
    MapResult m = thermal_density(rho, mu, temperature, /*clamp=*/true);
    SelfConsistencyReport rep;
    rep.method = "iterative";
    rep.iterations = 2;
    rep.xi = 0.0;
    rep.converged = !m.clamped;
    if (!rep.converged) {
      SolveResult res;
      res.density = std::move(m.density);
      res.report = rep;
      return res;
    }
    return assemble_result(m.density.rho, mu, temperature, rep);
  }

  double change = 1.0;
  int it = 0;
  bool last_clamped = false;
  for (; it < params_.max_iter; ++it) {
    MapResult m = thermal_density(rho, mu, temperature, /*clamp=*/true);
    last_clamped = m.clamped;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
      double d = m.density.rho[k] - rho[k];
      double w = 2.0 * constants::pi * grid.r[k] * grid.weight[k];
      num += d * d * w;
      den += rho[k] * rho[k] * w;
    }
    change = std::sqrt(num) / (std::sqrt(den) + 1e-300);
    for (int k = 0; k < grid.size(); ++k)
      rho[k] += params_.mix_alpha * (m.density.rho[k] - rho[k]);
    if (change < params_.tol) {
      ++it;
      break;
    }
  }

  SelfConsistencyReport rep;
  rep.method = "iterative";
  rep.iterations = it;
  rep.xi = change;
  rep.converged = change < params_.tol && !last_clamped;
  if (!rep.converged) {
    SolveResult res;
    res.density.rho = rho;
    res.density.linear_density = 0.0;
    res.report = rep;
    return res;
  }
  return assemble_result(rho, mu, temperature, rep);
}

SolveResult Solver::solve_iterative(double mu, double temperature,
                                    const std::vector<double>* seed) const {
  SolveResult res = solve_iterative_nothrow(mu, temperature, seed);
  if (!res.report.converged)
    throw ConvergenceError("hf: iterative solve did not converge after " +
                           std::to_string(res.report.iterations) + " iterations (mu = " +
                           std::to_string(mu) + ", T = " + std::to_string(temperature) + ")");
  return res;
}

namespace {

// weighted linear least squares of rho(r) on the Hermite-Gaussian family at
// fixed r0; returns the four coefficients
std::array<double, 4> fit_coeffs(const RadialGrid& grid, const std::vector<double>& rho,
                                 double r0) {
  Eigen::MatrixXd a(grid.size(), 4);
  Eigen::VectorXd b(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    double x = grid.r[k] / r0;
    double H[7];
    H[0] = 1.0;
    H[1] = 2.0 * x;
    for (int n = 1; n < 6; ++n) H[n + 1] = 2.0 * x * H[n] - 2.0 * n * H[n - 1];
    double g = std::exp(-0.5 * x * x);
    double w = std::sqrt(std::max(grid.r[k], 0.0) * grid.weight[k]);
    a(k, 0) = H[0] * g * w;
    a(k, 1) = H[2] * g * w;
    a(k, 2) = H[4] * g * w;
    a(k, 3) = H[6] * g * w;
    b(k) = rho[k] * w;
  }
  Eigen::Vector4d c = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  return {c[0], c[1], c[2], c[3]};
}

double rms_radius(const RadialGrid& grid, const std::vector<double>& rho) {
  double num = 0.0, den = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    double w = 2.0 * constants::pi * grid.r[k] * grid.weight[k];
    num += rho[k] * grid.r[k] * grid.r[k] * w;
    den += rho[k] * w;
  }
  return den > 0.0 ? std::sqrt(num / den) : 1.0;
}

}  // namespace

double Solver::xi_of_trial(const HermiteTrial& trial, double mu, double temperature) const {
  const RadialGrid& grid = cache_.grid();
  std::vector<double> rho_t = trial.evaluate(grid);
  double den = 0.0, pen = 0.0;
  std::vector<double> rho_pos(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    double w = grid.r[k] * grid.weight[k];
    den += rho_t[k] * rho_t[k] * w;
    if (rho_t[k] < 0.0) pen += rho_t[k] * rho_t[k] * w;
    rho_pos[k] = std::max(rho_t[k], 0.0);
  }
  if (den <= 0.0) return 1e6;
  MapResult m = thermal_density(rho_pos, mu, temperature, /*clamp=*/true);
  double num = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    double d = m.density.rho[k] - rho_t[k];
    num += d * d * grid.r[k] * grid.weight[k];
  }
  // negative-density penalty keeps the family physical without hard walls
  return num / den + 1e4 * pen / den;
}

SolveResult Solver::solve_variational(double mu, double temperature,
                                      const std::vector<double>* seed,
                                      const HermiteTrial* start) const {
  const RadialGrid& grid = cache_.grid();

  // shape seed: caller-provided density, else the last iterate of a
  // best-effort damped iteration
  std::vector<double> shape;
  if (seed && !seed->empty()) {
    shape = *seed;
  } else {
    SolveResult it = solve_iterative_nothrow(mu, temperature);
    shape = it.density.rho;
  }
  double smax = *std::max_element(shape.begin(), shape.end());
  if (!(smax > 0.0)) {
    shape.assign(grid.size(), 0.0);
    for (int k = 0; k < grid.size(); ++k) shape[k] = std::exp(-grid.r[k] * grid.r[k]);
  }

  double r0_guess = start ? start->r0 : std::max(0.3, rms_radius(grid, shape) / std::sqrt(2.0));

  auto pack = [](const HermiteTrial& t) {
    return std::vector<double>{t.r0, t.c[0], t.c[1], t.c[2], t.c[3]};
  };
  auto unpack = [](const std::vector<double>& x) {
    HermiteTrial t;
    t.r0 = std::abs(x[0]) > 1e-3 ? std::abs(x[0]) : 1e-3;
    t.c = {x[1], x[2], x[3], x[4]};
    return t;
  };
  auto objective = [&](const std::vector<double>& x) {
    return xi_of_trial(unpack(x), mu, temperature);
  };

  MinimizeResult best;
  best.f = 1e300;
  int total_evals = 0;
  const int n_starts = std::max(1, params_.variational_starts);
  for (int s = 0; s < n_starts; ++s) {
    double amp = 1.0 + 0.2 * (s - (n_starts - 1) / 2.0);  // ..., 0.8, 1.0, 1.2, ...
    HermiteTrial t0;
    if (start) {
      t0 = *start;
      for (auto& ci : t0.c) ci *= amp;
    } else {
      std::vector<double> scaled(shape.size());
      for (size_t k = 0; k < shape.size(); ++k) scaled[k] = amp * shape[k];
      t0.r0 = r0_guess;
      t0.c = fit_coeffs(grid, scaled, t0.r0);
    }
    std::vector<double> x0 = pack(t0);
    std::vector<double> step{0.15 * t0.r0, 0.0, 0.0, 0.0, 0.0};
    double cscale = std::max({std::abs(t0.c[0]), std::abs(t0.c[1]), std::abs(t0.c[2]),
                              std::abs(t0.c[3]), 1e-6});
    for (int i = 1; i < 5; ++i) step[i] = 0.1 * cscale;
    MinimizeResult r = nelder_mead(objective, x0, step,
                                   params_.variational_max_evals, 1e-14);
    total_evals += r.evaluations;
    if (r.f < best.f) best = r;
    if (best.f < 0.01 * params_.xi_target) break;  // already far below target
  }

  HermiteTrial t_best = unpack(best.x);
  std::vector<double> rho_t = t_best.evaluate(grid);
  std::vector<double> rho_pos(grid.size());
  for (int k = 0; k < grid.size(); ++k) rho_pos[k] = std::max(rho_t[k], 0.0);

  MapResult once = thermal_density(rho_pos, mu, temperature, /*clamp=*/false);

  SelfConsistencyReport rep;
  rep.method = "variational";
  rep.iterations = total_evals;
  rep.xi = best.f;
  double nh_trial = grid.integrate_radial(rho_pos);
  rep.nh = nh_trial;
  rep.nh_prime = once.density.linear_density;
  rep.converged = best.f < params_.xi_target &&
                  std::abs(rep.nh - rep.nh_prime) <= 0.005 * std::max(rep.nh, 1e-300);

  SolveResult res;
  res.density.rho = rho_pos;
  res.density.linear_density = once.density.linear_density;
  res.spectrum = std::move(once.spectrum);
  res.report = std::move(rep);
  res.trial = t_best;
  return res;
}

MuTable::MuTable(const Solver& solver, double mu_min, double mu0, double temperature,
                 int n_nodes, double channel_energy_cap) {
  if (!(mu0 > mu_min)) throw ValidationError("mu table: mu0 must exceed mu_min");
  if (n_nodes < 8) throw ValidationError("mu table: need at least 8 nodes");
  temperature_ = temperature;
  mu_min_ = mu_min;
  mu0_ = mu0;

  nodes_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    nodes_[i] = mu_min + (mu0 - mu_min) * i / static_cast<double>(n_nodes - 1);

  std::vector<double> nh_v(n_nodes), e0_v(n_nodes);
  reports_.resize(n_nodes);

  // channel bookkeeping: modes with bare energy below the cap
  struct ChanAccum {
    int l, j;
    std::vector<double> e;
  };
  std::vector<ChanAccum> accum;
  if (channel_energy_cap > 0.0) {
    for (int l = 0;; ++l) {
      if (l + 1.0 > channel_energy_cap) break;
      for (int j = 0; 2.0 * j + l + 1.0 <= channel_energy_cap; ++j)
        accum.push_back({l, j, std::vector<double>(n_nodes, 0.0)});
    }
  }

  // solve bottom-up so each node warm-starts from the previous solution
  std::vector<double> warm;
  HermiteTrial warm_trial;
  bool have_trial = false;
  for (int i = 0; i < n_nodes; ++i) {
    double mu = nodes_[i];
    SolveResult sr = solver.solve_iterative_nothrow(mu, temperature,
                                                    warm.empty() ? nullptr : &warm);
    if (!sr.report.converged) {
      sr = solver.solve_variational(mu, temperature, warm.empty() ? nullptr : &warm,
                                    have_trial ? &warm_trial : nullptr);
      warm_trial = sr.trial;
      have_trial = true;
    }
    if (!sr.report.converged && sr.report.method == "variational" &&
        sr.report.xi >= 1e-2)
      throw ConvergenceError("hf: mu table node failed to converge at mu = " +
                             std::to_string(mu));
    warm = sr.density.rho;
    nh_v[i] = sr.density.linear_density;
    e0_v[i] = sr.spectrum.lowest();
    reports_[i] = sr.report;
    if (!accum.empty()) {
      // index spectrum by (l, j)
      for (auto& ch : accum) {
        double e = 0.0;
        bool found = false;
        for (const auto& m : sr.spectrum.modes) {
          if (m.l == ch.l && m.j == ch.j) {
            e = m.energy;
            found = true;
            break;
          }
        }
        ch.e[i] = found ? e : (2.0 * ch.j + ch.l + 1.0);
      }
    }
  }

  nh_ = Pchip(nodes_, nh_v);
  e0_ = Pchip(nodes_, e0_v);
  for (auto& ch : accum) {
    Channel c;
    c.l = ch.l;
    c.j = ch.j;
    c.energy_at_mu0 = ch.e.back();
    c.energy = Pchip(nodes_, ch.e);
    channels_.push_back(std::move(c));
  }
  std::sort(channels_.begin(), channels_.end(),
            [](const Channel& a, const Channel& b) { return a.energy_at_mu0 < b.energy_at_mu0; });
}

double MuTable::nh(double mu) const {
  if (mu < mu_min_ - 1e-9 || mu > mu0_ + 1e-9)
    throw ValidationError("mu table: query outside the tabulated range");
  return nh_(mu);
}

double MuTable::e0(double mu) const {
  if (mu < mu_min_ - 1e-9 || mu > mu0_ + 1e-9)
    throw ValidationError("mu table: query outside the tabulated range");
  return e0_(mu);
}

ProfileResult profile(const Solver& solver, const ThermoState& state, const TrapGeometry& geom,
                      const ZGrid& zgrid, int table_points) {
  state.validate();
  const ReducedUnits& units = solver.units();
  ProfileResult out;
  out.profile.z = zgrid.z;
  out.profile.n.resize(zgrid.size());

  if (solver.coupling() == 0.0) {
    // exact ideal-limit path: per-z mode sum, no interpolation
    for (int i = 0; i < zgrid.size(); ++i) {
      double mu_z = local_chemical_potential(state, geom, zgrid.z[i]);
      out.profile.n[i] =
          ideal::linear_density_reduced(mu_z, state.temperature, solver.params().tail_rel) /
          units.transverse_length_unit;
    }
    return out;
  }

  double mu_min = state.mu0;
  for (double z : zgrid.z)
    mu_min = std::min(mu_min, local_chemical_potential(state, geom, z));
  MuTable table(solver, mu_min - 1e-6, state.mu0, state.temperature, table_points, 0.0);

  for (int i = 0; i < zgrid.size(); ++i) {
    double mu_z = local_chemical_potential(state, geom, zgrid.z[i]);
    out.profile.n[i] = table.nh(mu_z) / units.transverse_length_unit;
  }
  out.reports = table.reports();
  out.report_mu = table.nodes();
  return out;
}

}  // namespace hf
}  // namespace ebgas
