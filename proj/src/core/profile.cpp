#include "core/profile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace ebgas {

void LinearDensityProfile::validate(bool allow_negative) const {
  if (z.size() != n.size()) throw ValidationError("profile: z/n size mismatch");
  if (z.size() < 3) throw ValidationError("profile: need at least 3 samples");
  double h = z[1] - z[0];
  if (!(h > 0.0)) throw ValidationError("profile: grid must be ascending");
  for (size_t i = 1; i < z.size(); ++i) {
    if (std::abs((z[i] - z[i - 1]) - h) > 1e-6 * std::abs(h))
      throw ValidationError("profile: grid must be uniform");
  }
  if (!allow_negative) {
    for (double v : n)
      if (v < 0.0) throw ValidationError("profile: negative density");
  }
}

double LinearDensityProfile::total_atoms() const {
  double s = 0.0;
  for (size_t i = 1; i < z.size(); ++i) s += 0.5 * (n[i] + n[i - 1]) * (z[i] - z[i - 1]);
  return s;
}

double LinearDensityProfile::centroid() const {
  double sw = 0.0, swz = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    double w = n[i] > 0.0 ? n[i] : 0.0;
    sw += w;
    swz += w * z[i];
  }
  if (sw <= 0.0) return 0.0;
  return swz / sw;
}

namespace {
// Parabola through the peak sample and its neighbours.
void refine_peak(const LinearDensityProfile& p, double& zpk, double& npk) {
  int imax = 0;
  for (int i = 1; i < p.size(); ++i)
    if (p.n[i] > p.n[imax]) imax = i;
  zpk = p.z[imax];
  npk = p.n[imax];
  if (imax == 0 || imax == p.size() - 1) return;
  double ym = p.n[imax - 1], y0 = p.n[imax], yp = p.n[imax + 1];
  double denom = ym - 2.0 * y0 + yp;
  if (denom >= 0.0) return;  // not concave, keep the sample
  double d = 0.5 * (ym - yp) / denom;
  if (std::abs(d) > 1.0) return;
  double h = p.z[1] - p.z[0];
  zpk = p.z[imax] + d * h;
  npk = y0 - 0.25 * (ym - yp) * d;
}
}  // namespace

double LinearDensityProfile::peak_density() const {
  double zp, np;
  refine_peak(*this, zp, np);
  return np;
}

double LinearDensityProfile::peak_position() const {
  double zp, np;
  refine_peak(*this, zp, np);
  return zp;
}

LinearDensityProfile LinearDensityProfile::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("profile: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("profile: empty file '" + path + "'");
  // locate z_m and n_per_m columns in the header
  int zcol = -1, ncol = -1, col = 0;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "z_m") zcol = col;
      if (cell == "n_per_m") ncol = col;
      ++col;
    }
  }
  if (zcol < 0 || ncol < 0)
    throw DataError("profile: '" + path + "' lacks z_m/n_per_m header columns");
  LinearDensityProfile p;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    int c = 0;
    double zv = 0.0, nv = 0.0;
    bool have_n = false;
    while (std::getline(ss, cell, ',')) {
      if (c == zcol) zv = std::strtod(cell.c_str(), nullptr);
      if (c == ncol) {
        if (cell.empty()) { have_n = false; break; }
        nv = std::strtod(cell.c_str(), nullptr);
        have_n = true;
      }
      ++c;
    }
    if (!have_n) continue;  // blank model cell (e.g. diverging ideal region)
    p.z.push_back(zv);
    p.n.push_back(nv);
  }
  if (p.z.size() < 3) throw DataError("profile: too few rows in '" + path + "'");
  return p;
}

void LinearDensityProfile::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("profile: cannot write '" + path + "'");
  out << "z_m,n_per_m\n";
  char buf[64];
  for (int i = 0; i < size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", z[i], n[i]);
    out << buf;
  }
}

}  // namespace ebgas
