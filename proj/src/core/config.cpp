#include "core/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "core/constants.hpp"
#include "core/errors.hpp"

namespace ebgas {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config::Config() {
  using namespace constants;
  auto def = [this](const std::string& k, const std::string& v) {
    entries_[k] = Entry{v, Source::builtin};
  };
  auto defd = [&](const std::string& k, double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    def(k, os.str());
  };

  // trap / atom
  defd("omega_perp_hz", default_omega_perp_hz);
  defd("omega_z_hz", default_omega_z_hz);
  defd("mass_kg", default_mass_kg);
  defd("scattering_length_m", default_scattering_length_m);
  defd("probe_wavelength_m", default_probe_wavelength_m);

  // grids
  def("radial_points", "561");
  defd("radial_rmax", 10.0);       // units of a_perp
  def("zgrid_points", "241");
  defd("zgrid_halfwidth_m", 0.0);  // 0 = auto: mu(z) spans 12 k_B T

  // Hartree-Fock solver
  defd("hf_mix_alpha", 0.3);
  def("hf_max_iter", "500");
  defd("hf_tol", 1e-8);
  def("hf_mu_table_points", "200");
  defd("hf_tail_rel", 1e-10);
  def("variational_starts", "3");
  def("variational_max_evals", "1500");
  defd("variational_xi_target", 1e-4);

  // LDA validation
  defd("lda_nmodes_kt", 10.0);     // channels with E_n(center)-mu0 < this * T
  defd("lda_state_cut_kt", 10.0);  // quantized longitudinal states up to mu0 + this * T
  defd("lda_box_cut_kt", 12.0);    // grid extends to V - mu0 > this * T
  defd("lda_long_step", 0.3);      // longitudinal grid step, units of a_perp
  def("lda_long_points", "0");     // 0 = auto from lda_long_step

  // Bogoliubov
  def("bdg_lmax", "6");
  def("bdg_jmax", "8");
  def("bdg_kpoints", "200");
  def("bdg_basis", "40");
  defd("bdg_eps_cut_kt", 15.0);
  defd("crossover_bracket_lo_per_m", 1e4);
  defd("crossover_bracket_hi_per_m", 1e9);
  defd("crossover_tol_rel", 0.01);

  // imaging
  defd("pixel_size_m", default_pixel_size_m);
  defd("sigma_factor", default_sigma_factor);
  def("frame_rows", "16");
  defd("synth_transverse_sigma_px", 1.4);
  defd("synth_i2_counts", 20000.0);
  defd("noise_shot", 0.018);
  defd("noise_drift", 0.01);

  def("threads", "0");  // 0 = hardware concurrency
}

Config Config::from_file(const std::string& path) {
  Config c;
  c.load_file(path);
  return c;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw DataError("config: missing '=' at " + path + ":" + std::to_string(lineno));
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty())
      throw DataError("config: empty key or value at " + path + ":" + std::to_string(lineno));
    if (!entries_.count(key))
      throw ValidationError("config: unknown key '" + key + "' at " + path + ":" +
                            std::to_string(lineno));
    entries_[key] = Entry{val, Source::file};
  }
}

void Config::set(const std::string& key, const std::string& value) {
  if (!entries_.count(key)) throw ValidationError("config: unknown key '" + key + "'");
  entries_[key] = Entry{value, Source::set};
}

double Config::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ValidationError("config: unknown key '" + key + "'");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(it->second.value.c_str(), &end);
  if (errno || end == it->second.value.c_str() || *end != '\0')
    throw ValidationError("config: key '" + key + "' is not a number: '" + it->second.value + "'");
  return v;
}

int Config::get_int(const std::string& key) const {
  double v = get(key);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ValidationError("config: key '" + key + "' is not an integer");
  return i;
}

std::string Config::get_str(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ValidationError("config: unknown key '" + key + "'");
  return it->second.value;
}

Config::Source Config::source(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ValidationError("config: unknown key '" + key + "'");
  return it->second.src;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, v] : entries_) out.push_back(k);
  return out;
}

std::string Config::provenance_text() const {
  std::ostringstream os;
  for (const auto& [k, e] : entries_) {
    const char* src = e.src == Source::builtin ? "default" : (e.src == Source::file ? "file" : "set");
    os << k << " = " << e.value << "  [" << src << "]\n";
  }
  return os.str();
}

}  // namespace ebgas
