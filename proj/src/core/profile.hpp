#ifndef EBGAS_PROFILE_HPP
#define EBGAS_PROFILE_HPP

#include <string>
#include <vector>

namespace ebgas {

// Sampled longitudinal density n(z) on a uniform grid; the common currency
// between the model solvers, the imaging pipeline and the wing fits.
struct LinearDensityProfile {
  std::vector<double> z;  // meters, uniform ascending
  std::vector<double> n;  // atoms per meter
  double pixel_size = 0.0;  // meters; 0 when not pixel-binned

  int size() const { return static_cast<int>(z.size()); }
  double spacing() const { return z.size() > 1 ? z[1] - z[0] : 0.0; }
  void validate(bool allow_negative = false) const;

  double total_atoms() const;          // trapezoid integral of n dz
  double centroid() const;             // intensity-weighted mean z
  double peak_density() const;         // max with 3-point parabolic refinement
  double peak_position() const;

  // CSV with header "z_m,n_per_m"; extra columns ignored on read.
  static LinearDensityProfile read_csv(const std::string& path);
  void write_csv(const std::string& path) const;
};

}  // namespace ebgas

#endif
