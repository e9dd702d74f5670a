#include "core/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {
namespace imaging {

void ImageFrame::validate() const {
  if (rows < 1 || cols < 1) throw DataError("frame: empty");
  if (intensity.size() != static_cast<size_t>(rows) * cols)
    throw DataError("frame: size mismatch");
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (!(at(r, c) > 0.0))
        throw DataError("frame: nonpositive intensity at pixel (" + std::to_string(r) + "," +
                        std::to_string(c) + ")");
  if (!(pixel_size > 0.0)) throw DataError("frame: pixel size must be > 0");
}

double resonant_cross_section(double wavelength_m) {
  return 3.0 * wavelength_m * wavelength_m / (2.0 * constants::pi);
}

CrossSection CrossSection::from_factor(double factor, double wavelength_m) {
  if (!(factor > 0.0) || factor > 1.0)
    throw ValidationError("cross section: calibration factor must be in (0, 1]");
  CrossSection cs;
  cs.calibration_factor = factor;
  cs.sigma_eff = factor * resonant_cross_section(wavelength_m);
  return cs;
}

double estimate_probe_gain(const ImageFrame& with_atoms, const ImageFrame& without_atoms,
                           int margin_rows) {
  with_atoms.validate();
  without_atoms.validate();
  if (with_atoms.rows != without_atoms.rows || with_atoms.cols != without_atoms.cols)
    throw DataError("probe gain: frame dimensions differ");
  if (margin_rows < 1 || 2 * margin_rows >= with_atoms.rows)
    throw ValidationError("probe gain: margin rows do not fit the frame");
  double s1 = 0.0, s2 = 0.0;
  auto add_row = [&](int r) {
    for (int c = 0; c < with_atoms.cols; ++c) {
      s1 += with_atoms.at(r, c);
      s2 += without_atoms.at(r, c);
    }
  };
  for (int r = 0; r < margin_rows; ++r) {
    add_row(r);
    add_row(with_atoms.rows - 1 - r);
  }
  return s2 / s1;
}

CountMatrix atoms_per_pixel(const ImageFrame& with_atoms, const ImageFrame& without_atoms,
                            const CrossSection& sigma, double probe_gain) {
  with_atoms.validate();
  without_atoms.validate();
  if (with_atoms.rows != without_atoms.rows || with_atoms.cols != without_atoms.cols)
    throw DataError("atoms_per_pixel: frame dimensions differ");
  if (std::abs(with_atoms.pixel_size - without_atoms.pixel_size) >
      1e-12 * with_atoms.pixel_size)
    throw DataError("atoms_per_pixel: pixel sizes differ");
  if (!(sigma.sigma_eff > 0.0)) throw ValidationError("atoms_per_pixel: sigma must be > 0");
  if (!(probe_gain > 0.0)) throw ValidationError("atoms_per_pixel: probe gain must be > 0");

  CountMatrix m;
  m.rows = with_atoms.rows;
  m.cols = with_atoms.cols;
  m.counts.resize(static_cast<size_t>(m.rows) * m.cols);
  const double scale = with_atoms.pixel_size * with_atoms.pixel_size / sigma.sigma_eff;
  const double log_gain = std::log(probe_gain);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) {
      double v = scale * (std::log(without_atoms.at(r, c) / with_atoms.at(r, c)) - log_gain);
      if (v < 0.0) ++m.negative_pixels;
      m.counts[static_cast<size_t>(r) * m.cols + c] = v;
    }
  return m;
}

LinearDensityProfile linear_profile(const CountMatrix& counts, double pixel_size) {
  if (!(pixel_size > 0.0)) throw ValidationError("linear_profile: pixel size must be > 0");
  LinearDensityProfile p;
  p.pixel_size = pixel_size;
  p.z.resize(counts.cols);
  p.n.resize(counts.cols);
  const double z0 = -0.5 * (counts.cols - 1) * pixel_size;
  for (int c = 0; c < counts.cols; ++c) {
    double col = 0.0;
    for (int r = 0; r < counts.rows; ++r)
      col += counts.counts[static_cast<size_t>(r) * counts.cols + c];
    p.z[c] = z0 + c * pixel_size;
    p.n[c] = col / pixel_size;
  }
  return p;
}

CrossSection calibrate_cross_section(double detuned_total_raw, double resonant_tof_total,
                                     double wavelength_m) {
  if (!(detuned_total_raw > 0.0) || !(resonant_tof_total > 0.0))
    throw ValidationError("calibrate: totals must be > 0");
  double factor = detuned_total_raw / resonant_tof_total;
  if (factor > 1.0)
    throw ValidationError("calibrate: factor " + std::to_string(factor) +
                          " outside (0, 1]; detuned absorption cannot exceed resonant");
  return CrossSection::from_factor(factor, wavelength_m);
}

namespace {

// atoms deposited in a pixel-wide z bin by trapezoid integration of n(z)
double atoms_in_bin(const LinearDensityProfile& p, double z_lo, double z_hi) {
  const double h = p.spacing();
  const int n = p.size();
  auto value = [&](double z) -> double {
    double t = (z - p.z[0]) / h;
    if (t <= 0.0 || t >= n - 1) return 0.0;
    int i = static_cast<int>(t);
    double f = t - i;
    return p.n[i] * (1.0 - f) + p.n[i + 1] * f;
  };
  const int sub = 8;
  double dz = (z_hi - z_lo) / sub, s = 0.0;
  for (int i = 0; i <= sub; ++i) {
    double w = (i == 0 || i == sub) ? 0.5 : 1.0;
    s += w * value(z_lo + i * dz);
  }
  return s * dz;
}

}  // namespace

SynthesisResult synthesize_frames(const LinearDensityProfile& profile, double pixel_size,
                                  const CrossSection& sigma, const NoiseModel& noise,
                                  const SynthesisParams& params) {
  profile.validate();
  if (!(pixel_size > 0.0)) throw ValidationError("synthesize: pixel size must be > 0");
  if (params.rows < 3) throw ValidationError("synthesize: need at least 3 rows");

  const int cols = static_cast<int>(
      std::ceil((profile.z.back() - profile.z.front()) / pixel_size)) + 1;
  const int rows = params.rows;
  const double row_center = 0.5 * (rows - 1);
  const double z_start = 0.5 * (profile.z.front() + profile.z.back()) -
                         0.5 * cols * pixel_size;

  // transverse weights: discrete Gaussian, normalized over the frame rows
  auto row_weights = [&](double center, double sigma_px, int nrows) {
    std::vector<double> w(nrows);
    double sum = 0.0;
    for (int r = 0; r < nrows; ++r) {
      double d = (r - center) / sigma_px;
      w[r] = std::exp(-0.5 * d * d);
      sum += w[r];
    }
    for (auto& x : w) x /= sum;
    return w;
  };

  SynthesisResult out;
  auto& i1 = out.with_atoms;
  auto& i2 = out.without_atoms;
  i1.rows = i2.rows = rows;
  i1.cols = i2.cols = cols;
  i1.pixel_size = i2.pixel_size = pixel_size;
  i1.role = "with_atoms";
  i2.role = "without_atoms";
  i1.intensity.assign(static_cast<size_t>(rows) * cols, 0.0);
  i2.intensity.assign(static_cast<size_t>(rows) * cols, 0.0);

  const double od_scale = sigma.sigma_eff / (pixel_size * pixel_size);

  std::vector<double> od(static_cast<size_t>(rows) * cols, 0.0);
  if (!params.supersample) {
    std::vector<double> wrow = row_weights(row_center, params.transverse_sigma_px, rows);
    for (int c = 0; c < cols; ++c) {
      double n_col = atoms_in_bin(profile, z_start + c * pixel_size,
                                  z_start + (c + 1) * pixel_size);
      for (int r = 0; r < rows; ++r)
        od[static_cast<size_t>(r) * cols + c] = n_col * wrow[r] * od_scale;
    }
  } else {
    // 8x8 sub-pixel deposition with intensity averaging, reproducing the
    // high-optical-density underestimate of coarse pixels
    const int s = 8;
    std::vector<double> wrow =
        row_weights(row_center * s + 0.5 * (s - 1), params.transverse_sigma_px * s, rows * s);
    for (int c = 0; c < cols; ++c) {
      for (int r = 0; r < rows; ++r) {
        double mean_trans = 0.0;
        for (int rs = 0; rs < s; ++rs) {
          for (int cs = 0; cs < s; ++cs) {
            double zl = z_start + (c + cs / static_cast<double>(s)) * pixel_size;
            double n_sub = atoms_in_bin(profile, zl, zl + pixel_size / s) * s;  // per su-col
            double od_sub = n_sub * wrow[r * s + rs] * s * od_scale;
            mean_trans += std::exp(-od_sub);
          }
        }
        mean_trans /= s * s;
        od[static_cast<size_t>(r) * cols + c] = -std::log(mean_trans);
      }
    }
  }

  for (double v : od) out.peak_od = std::max(out.peak_od, v);
  for (double v : od)
    if (v > 4.0) ++out.saturated_pixels;

  std::mt19937_64 rng1(noise.seed * 0x9E3779B97F4A7C15ULL + 1ULL);
  std::mt19937_64 rng2(noise.seed * 0xC2B2AE3D27D4EB4FULL + 2ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double drift1 = 1.0, drift2 = 1.0;
  if (noise.drift_frac > 0.0) {
    drift1 += noise.drift_frac * gauss(rng1);
    drift2 += noise.drift_frac * gauss(rng2);
  }

  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      size_t idx = static_cast<size_t>(r) * cols + c;
      double clean2 = params.i2_counts * drift2;
      double clean1 = params.i2_counts * drift1 * std::exp(-od[idx]);
      if (noise.shot_scale > 0.0) {
        clean2 *= 1.0 + noise.shot_scale * gauss(rng2);
        clean1 *= 1.0 + noise.shot_scale * gauss(rng1);
      }
      i2.intensity[idx] = std::max(1.0, std::round(clean2));
      i1.intensity[idx] = std::max(1.0, std::round(clean1));
    }
  return out;
}

void write_pgm(const std::string& path, const ImageFrame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("pgm: cannot write '" + path + "'");
  out << "P5\n" << frame.cols << " " << frame.rows << "\n65535\n";
  for (int r = 0; r < frame.rows; ++r)
    for (int c = 0; c < frame.cols; ++c) {
      double v = std::clamp(frame.at(r, c), 0.0, 65535.0);
      std::uint16_t u = static_cast<std::uint16_t>(std::lround(v));
      unsigned char hi = static_cast<unsigned char>(u >> 8);
      unsigned char lo = static_cast<unsigned char>(u & 0xFF);
      out.put(static_cast<char>(hi));
      out.put(static_cast<char>(lo));
    }
}

ImageFrame read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("pgm: cannot open '" + path + "'");
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P2") throw DataError("pgm: '" + path + "' is not P2/P5");
  auto next_token = [&in, &path]() {
    std::string tok;
    for (;;) {
      if (!(in >> tok)) throw DataError("pgm: truncated header in '" + path + "'");
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
  };
  int cols = std::stoi(next_token());
  int rows = std::stoi(next_token());
  int maxval = std::stoi(next_token());
  if (cols < 1 || rows < 1 || maxval < 1 || maxval > 65535)
    throw DataError("pgm: bad header in '" + path + "'");

  ImageFrame f;
  f.rows = rows;
  f.cols = cols;
  f.intensity.resize(static_cast<size_t>(rows) * cols);
  if (magic == "P2") {
    for (auto& v : f.intensity) {
      long x;
      if (!(in >> x)) throw DataError("pgm: truncated P2 data in '" + path + "'");
      v = static_cast<double>(x);
    }
  } else {
    in.get();  // single whitespace after maxval
    const bool two_bytes = maxval > 255;
    for (auto& v : f.intensity) {
      int hi = in.get();
      if (hi == EOF) throw DataError("pgm: truncated P5 data in '" + path + "'");
      if (two_bytes) {
        int lo = in.get();
        if (lo == EOF) throw DataError("pgm: truncated P5 data in '" + path + "'");
        v = static_cast<double>((hi << 8) | lo);
      } else {
        v = static_cast<double>(hi);
      }
    }
  }
  return f;
}

}  // namespace imaging
}  // namespace ebgas
