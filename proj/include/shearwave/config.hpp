#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shearwave/profile.hpp"
#include "shearwave/rayleigh.hpp"

namespace shearwave {

// Flat dotted-key configuration. Two interchangeable file forms: a line-based
// key-value format with [section] headers, and JSON (detected by a leading
// '{'). See docs/config.md for the grammar.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_text(const std::string& text);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double dflt) const;
  std::string str(const std::string& key) const;
  std::string str_or(const std::string& key, const std::string& dflt) const;
  std::vector<double> list(const std::string& key) const;
  std::vector<double> list_or(const std::string& key,
                              const std::vector<double>& dflt) const;
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> kv_;
};

struct SpectrumConfig {
  double k_min = 0.1, k_max = 50.0;
  int k_count = 64;
  double rect_re_lo = 0.0, rect_re_hi = 0.0, rect_im_lo = -1.0, rect_im_hi = 1.0;
  bool rect_given = false;
  int modes_at = 8;  // number of k stations with eigenfunction traces
};

struct Omega0Spec {
  std::string kind = "gaussian";  // gaussian bump family or table
  double center = -0.5, width = 0.1, amplitude = 1.0;
  std::vector<double> table_x;
  std::vector<double> table_re, table_im;
};

struct EvolveConfig {
  double k = 1.0;
  double dt = 1e-3;
  double t_final = 200.0;
  std::vector<double> checkpoints;
  Omega0Spec omega0;
  double eta0_re = 0.0, eta0_im = 0.0;
  std::string init_bc = "zero_b";  // b chosen so the initial state is plain
};

struct ThresholdsConfig {
  double k_max = 50.0;
};

struct VerifyConfig {
  std::vector<std::string> suites;  // empty = all
};

struct RunConfig {
  ProfileSpec profile;
  double g = 1.0, sigma = 1.0;
  BoundaryKind bc_kind = BoundaryKind::free_surface;
  Numerics numerics;
  SpectrumConfig spectrum;
  EvolveConfig evolve;
  ThresholdsConfig thresholds;
  VerifyConfig verify;

  static RunConfig from_kv(const KeyValueConfig& kv);
  static RunConfig load(const std::string& path);
};

// Deterministic number formatting, "%.17g" equivalent.
std::string format_g17(double v);

std::vector<cplx> make_omega0(const Omega0Spec& spec,
                              const std::vector<double>& grid);

}  // namespace shearwave
