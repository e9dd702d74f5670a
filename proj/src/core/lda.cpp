#include "core/lda.hpp"

#include <algorithm>
#include <cmath>

#include "core/bose.hpp"
#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/longitudinal.hpp"
#include "core/parallel.hpp"

namespace ebgas {
namespace lda {

namespace {

// uniform symmetric grid in a_perp units
std::vector<double> symmetric_grid(double half_width, double step, int forced_points,
                                   double* h_out) {
  int n;
  if (forced_points > 0) {
    n = forced_points;
  } else {
    n = static_cast<int>(std::ceil(2.0 * half_width / step)) + 1;
  }
  if (n % 2 == 0) ++n;
  double h = 2.0 * half_width / (n - 1);
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = -half_width + i * h;
  *h_out = h;
  return z;
}

}  // namespace

Validator::Validator(const TrapGeometry& geom, const Config& cfg, double temperature,
                     double mu_lo, double mu_hi)
    : geom_(geom), units_(make_reduced_units(geom)), temperature_(temperature) {
  if (!(temperature > 0.0)) throw ValidationError("lda: temperature must be > 0");
  if (!(mu_hi >= mu_lo)) throw ValidationError("lda: mu_hi must be >= mu_lo");
  nmodes_kt_ = cfg.get("lda_nmodes_kt");
  state_cut_kt_ = cfg.get("lda_state_cut_kt");
  box_cut_kt_ = cfg.get("lda_box_cut_kt");
  long_step_ = cfg.get("lda_long_step");
  long_points_override_ = cfg.get_int("lda_long_points");
  zgrid_points_ = cfg.get_int("zgrid_points");

  solver_ = std::make_unique<hf::Solver>(geom, cfg);
  // The table must reach every mu(z) queried by the channel potentials:
  // box extends to V - mu0 = box_cut * T with V >= 1/2 wz^2 z^2 + 1.
  double span = box_cut_kt_ * temperature + std::max(0.0, mu_hi - 1.0) + 1.0;
  double mu_min = mu_lo - span - 0.5;
  double cap = mu_hi + (nmodes_kt_ + 1.0) * temperature + 2.0;
  int points = cfg.get_int("hf_mu_table_points");
  table_ = std::make_unique<hf::MuTable>(*solver_, mu_min, mu_hi, temperature, points, cap);
}

std::vector<double> Validator::channel_potential(int channel_idx, double mu0,
                                                 const std::vector<double>& z_red) const {
  const double wr = units_.omega_ratio;
  std::vector<double> v(z_red.size());
  for (size_t i = 0; i < z_red.size(); ++i) {
    double drop = 0.5 * wr * wr * z_red[i] * z_red[i];
    v[i] = drop + table_->channel_energy(channel_idx, mu0 - drop);
  }
  return v;
}

LdaReport Validator::report(double mu0) const {
  if (mu0 > table_->mu0() + 1e-9) throw ValidationError("lda: mu0 above the tabulated range");
  const double T = temperature_;
  const double wr = units_.omega_ratio;

  LdaReport rep;
  rep.mu0 = mu0;
  rep.temperature = T;
  rep.e0_transverse = table_->e0(mu0);

  // channel-0 effective potential; box out to V - mu0 > box_cut * T
  double half_width =
      std::sqrt(2.0 * (box_cut_kt_ * T + std::max(0.0, mu0 - 1.0) + 1.0)) / wr;
  double h;
  std::vector<double> z = symmetric_grid(half_width, long_step_, long_points_override_, &h);
  std::vector<double> v = channel_potential(0, mu0, z);
  longitudinal::Spectrum sp = longitudinal::solve_lowest(v, h, 2, /*want_vectors=*/true);
  if (sp.energy.size() < 2) throw ConvergenceError("lda: longitudinal solve returned < 2 states");
  rep.e0_longitudinal = sp.energy[0];
  rep.delta_e = sp.energy[1] - sp.energy[0];
  if (!(rep.delta_e > 0.0)) throw ConvergenceError("lda: non-positive longitudinal gap");
  rep.mu_eff = mu0 - rep.e0_longitudinal;
  rep.ratio = std::abs(rep.mu_eff) / rep.delta_e;

  // atom number from the LDA profile over the 12 k_B T wings
  {
    double zmax = std::sqrt(2.0 * 12.0 * T) / wr;
    const int n = 4001;
    double hh = 2.0 * zmax / (n - 1);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double zz = -zmax + i * hh;
      double mu_z = mu0 - 0.5 * wr * wr * zz * zz;
      double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
      total += w * table_->nh(std::max(mu_z, table_->mu_min())) * hh;
    }
    rep.n_total = total;
  }

  if (!(rep.e0_longitudinal > mu0))
    throw ValidationError("lda: mu0 reaches the longitudinal ground state (saturated)");
  rep.ground_state_population = T / (rep.e0_longitudinal - mu0);
  rep.ground_state_fraction = rep.ground_state_population / rep.n_total;
  return rep;
}

std::vector<std::pair<double, double>> Validator::scan(double mu_lo, double mu_hi,
                                                       int points) const {
  if (points < 2) throw ValidationError("lda: scan needs >= 2 points");
  std::vector<std::pair<double, double>> out(points);
  for (int i = 0; i < points; ++i) {
    double mu = mu_lo + (mu_hi - mu_lo) * i / (points - 1.0);
    LdaReport r = report(mu);
    out[i] = {mu, r.ratio};
  }
  return out;
}

BeyondLdaResult Validator::beyond_lda(double mu0) const {
  const double T = temperature_;
  const double wr = units_.omega_ratio;
  const double a_perp = units_.transverse_length_unit;
  const double lambda_t = std::sqrt(2.0 * constants::pi / T);
  const double e_state_cut = mu0 + state_cut_kt_ * T;

  // output grid: the standard profile grid (z in meters)
  ThermoState st{mu0, T};
  double zmax_m = std::sqrt(2.0 * 12.0 * T * units_.energy_unit /
                            (geom_.mass * geom_.omega_z * geom_.omega_z));
  ZGrid zg = ZGrid::make(zmax_m, zgrid_points_);
  const int nz = zg.size();

  BeyondLdaResult res;
  res.lda.z = zg.z;
  res.lda.n.resize(nz);
  res.beyond.z = zg.z;

  // LDA reference from the table
  std::vector<double> mu_z(nz);
  for (int i = 0; i < nz; ++i) {
    mu_z[i] = local_chemical_potential(st, geom_, zg.z[i]);
    res.lda.n[i] = table_->nh(std::max(mu_z[i], table_->mu_min())) / a_perp;
  }

  // channels entering the quantized treatment
  std::vector<int> chans;
  for (size_t c = 0; c < table_->channels().size(); ++c) {
    double b = table_->channel_energy(static_cast<int>(c), mu0);
    if (b - mu0 < nmodes_kt_ * T) chans.push_back(static_cast<int>(c));
  }

  struct ChannelOut {
    std::vector<double> delta;  // (quantized+tail - LDA) on the output grid, reduced
    double occ_sum = 0.0;
    double atoms = 0.0;
    int quantized = 0;
  };
  std::vector<ChannelOut> per_channel(chans.size());

  auto run_channel = [&](int ci) {
    const int c = chans[ci];
    const auto& ch = table_->channels()[c];
    const double deg = ch.l == 0 ? 1.0 : 2.0;
    const double bare = 2.0 * ch.j + ch.l + 1.0;
    ChannelOut& co = per_channel[ci];
    co.delta.assign(nz, 0.0);

    // LDA density of this channel on the output grid
    std::vector<double> lda_ch(nz);
    for (int i = 0; i < nz; ++i) {
      double e = table_->channel_energy(c, std::max(mu_z[i], table_->mu_min()));
      double zfug = std::exp((mu_z[i] - e) / T);
      lda_ch[i] = deg * bose::polylog_half(std::min(zfug, bose::fugacity_max)) / lambda_t;
    }

    // box: V ~ 1/2 wr^2 z^2 + bare in the wings; quantize only if the box exists
    double cap = mu0 + box_cut_kt_ * T - bare;
    longitudinal::Spectrum sp;
    std::vector<double> z_red;
    double h = 0.0;
    if (cap > 0.0) {
      double half_width = std::sqrt(2.0 * cap) / wr;
      z_red = symmetric_grid(half_width, long_step_, long_points_override_, &h);
      std::vector<double> v = channel_potential(c, mu0, z_red);
      sp = longitudinal::solve(v, h, e_state_cut, /*want_vectors=*/true);
      if (!sp.energy.empty() && sp.energy[0] <= mu0)
        throw ValidationError("lda: longitudinal eigenvalue at or below mu0 (channel l=" +
                              std::to_string(ch.l) + " j=" + std::to_string(ch.j) + ")");

      // quantized part, accumulated on the channel grid
      std::vector<double> nq(z_red.size(), 0.0);
      ThermoState occ_state{mu0, T};
      for (size_t k = 0; k < sp.energy.size(); ++k) {
        double occ = bose::occupation(sp.energy[k], occ_state);
        co.occ_sum += deg * occ;
        const auto& psi = sp.psi[k];
        for (size_t i = 0; i < z_red.size(); ++i) nq[i] += deg * occ * psi[i] * psi[i];
      }
      co.quantized = static_cast<int>(sp.energy.size());
      for (size_t i = 0; i < z_red.size(); ++i) co.atoms += nq[i] * h;

      // semiclassical tail above the state cut + map onto the output grid
      std::vector<double> v_out = channel_potential(c, mu0, [&] {
        std::vector<double> zr(nz);
        for (int i = 0; i < nz; ++i) zr[i] = zg.z[i] / a_perp;
        return zr;
      }());
      for (int i = 0; i < nz; ++i) {
        double z_r = zg.z[i] / a_perp;
        // linear interpolation of the quantized density
        double q = 0.0;
        if (!z_red.empty() && z_r >= z_red.front() && z_r <= z_red.back()) {
          double t = (z_r - z_red.front()) / h;
          int i0 = std::min(static_cast<int>(t), static_cast<int>(z_red.size()) - 2);
          double frac = t - i0;
          q = nq[i0] * (1.0 - frac) + nq[i0 + 1] * frac;
        }
        // tail: 1/pi int_{k_c}^inf dk n_B(k^2/2 + V - mu0)
        double tail = 0.0;
        double vv = v_out[i];
        double kc2 = 2.0 * std::max(0.0, e_state_cut - vv);
        double kc = std::sqrt(kc2);
        for (int p = 1; p <= 400; ++p) {
          double term = std::exp(-p * (vv - mu0) / T) / std::sqrt(2.0 * p / T) *
                        std::erfc(kc * std::sqrt(0.5 * p / T));
          tail += term;
          if (term < 1e-14 * std::max(tail, 1e-30)) break;
        }
        tail *= deg / std::sqrt(constants::pi);
        co.delta[i] = q + tail - lda_ch[i];
      }
    } else {
      // no quantized box: channel is purely semiclassical, delta = 0
    }
  };
  parallel_for(static_cast<int>(chans.size()), run_channel, solver_->params().threads);

  res.beyond.n = res.lda.n;
  for (const auto& co : per_channel) {
    if (co.delta.empty()) continue;
    for (int i = 0; i < nz; ++i) res.beyond.n[i] += co.delta[i] / a_perp;
    res.occupation_sum += co.occ_sum;
    res.quantized_atoms += co.atoms;
    res.channels_quantized += co.quantized > 0 ? 1 : 0;
  }

  double peak = res.lda.peak_density();
  double dev = 0.0;
  for (int i = 0; i < nz; ++i)
    dev = std::max(dev, std::abs(res.beyond.n[i] - res.lda.n[i]));
  res.max_deviation_rel_peak = peak > 0.0 ? dev / peak : 0.0;
  return res;
}

}  // namespace lda
}  // namespace ebgas
