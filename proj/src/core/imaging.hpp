#ifndef EBGAS_IMAGING_HPP
#define EBGAS_IMAGING_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/profile.hpp"
#include "core/units.hpp"

namespace ebgas {
namespace imaging {

// Absorption-image frame; intensities in camera counts, z along columns.
struct ImageFrame {
  int rows = 0, cols = 0;
  std::vector<double> intensity;  // row-major
  double pixel_size = 0.0;        // meters
  std::string role;               // "with_atoms" (I1) or "without_atoms" (I2)

  double& at(int r, int c) { return intensity[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return intensity[static_cast<size_t>(r) * cols + c]; }
  void validate() const;  // strictly positive, sizes consistent
};

struct CrossSection {
  double sigma_eff = 0.0;           // m^2
  double calibration_factor = 0.0;  // multiplies 3 lambda^2 / 2 pi

  static CrossSection from_factor(double factor, double wavelength_m);
};

double resonant_cross_section(double wavelength_m);  // 3 lambda^2 / 2 pi

struct NoiseModel {
  double shot_scale = 0.0;   // relative per-pixel Gaussian scale
  double drift_frac = 0.0;   // relative per-frame intensity drift
  std::uint64_t seed = 0;
};

// Probe gain I2/I1 estimated on atom-free margin rows (top and bottom);
// multiplying I1 by it removes per-frame intensity drift before the
// absorption formula is applied.
double estimate_probe_gain(const ImageFrame& with_atoms, const ImageFrame& without_atoms,
                           int margin_rows = 2);

// N_at = (Delta^2 / sigma) ln(I2/I1), elementwise.  Negative counts (noise)
// are preserved; their number is reported, not clipped.
struct CountMatrix {
  int rows = 0, cols = 0;
  std::vector<double> counts;  // row-major
  int negative_pixels = 0;
};
CountMatrix atoms_per_pixel(const ImageFrame& with_atoms, const ImageFrame& without_atoms,
                            const CrossSection& sigma, double probe_gain = 1.0);

// column sums / pixel size; z grid centered on the frame
LinearDensityProfile linear_profile(const CountMatrix& counts, double pixel_size);

// calibration_factor = detuned_total / resonant_total, must land in (0, 1]
CrossSection calibrate_cross_section(double detuned_total_raw, double resonant_tof_total,
                                     double wavelength_m);

struct SynthesisResult {
  ImageFrame with_atoms;     // I1
  ImageFrame without_atoms;  // I2
  int saturated_pixels = 0;  // optical density above 4
  double peak_od = 0.0;
};

struct SynthesisParams {
  double transverse_sigma_px = 1.4;
  int rows = 16;
  double i2_counts = 20000.0;
  bool supersample = false;  // 8x8 sub-pixel intensity averaging (high-OD bias demo)
};

SynthesisResult synthesize_frames(const LinearDensityProfile& profile, double pixel_size,
                                  const CrossSection& sigma, const NoiseModel& noise,
                                  const SynthesisParams& params);

// 16-bit PGM, P5 written, P2/P5 read.
void write_pgm(const std::string& path, const ImageFrame& frame);
ImageFrame read_pgm(const std::string& path);

}  // namespace imaging
}  // namespace ebgas

#endif
