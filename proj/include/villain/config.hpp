#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "villain/lattice.hpp"

namespace villain {

/// Fully resolved run configuration. Every field has a default; a config file
/// overrides them with `key = value` lines under `[section]` headers.
///
///   [lattice]   Lx Lt delta
///   [couplings] I J
///   [chain]     seed therm sweeps bin rep windings width
///   [greens]    form method fit_min fit_max
///   [sample]    separations xi x bound_check
///   [oracle]    K quad_points max_shift tol threshold tail_tol max_height max_winding xi x disorder
///   [bounds]    source input separations xi x statement_form
///
/// Lists are comma separated; separations are `dx:dt` pairs, e.g. `1:0, 2:0`.
struct RunConfig {
  // lattice
  int lx = 2;
  int lt = 2;
  double delta = 1.0;
  // couplings
  double inertia = 1.0;
  double coupling = 1.0;
  // chain
  std::uint64_t seed = 1;
  int therm = 1000;
  int sweeps = 16000;
  int bin = 1000;
  std::string rep = "angle";
  bool windings = true;
  double width = 1.0;
  // greens
  std::string form = "primal";
  std::string method = "auto";
  double fit_min = 8.0;
  double fit_max = 32.0;
  // sample
  std::vector<Separation> sample_separations{{1, 0}};
  double sample_xi = 1.0;
  std::vector<int> sample_x;
  std::string bound_check = "none";
  // oracle
  int max_current = 8;
  int quad_points = 24;
  int max_shift = 8;
  double tol = 1e-12;
  double threshold = 1e-6;
  double tail_tol = 1e-10;
  int max_height = 8;
  int max_winding = 8;
  double oracle_xi = 1.0;
  int oracle_x = 1;
  bool disorder = true;
  // bounds
  std::string source = "exact";
  std::string input;
  std::vector<Separation> bound_separations{{1, 0}};
  std::vector<double> bound_xi{0.5, 1.0};
  int bound_x = 1;
  bool statement_form = false;
};

/// Parses config text; unknown sections or keys and malformed values throw ValidationError.
RunConfig parse_config(const std::string& text);

/// Reads either a plain config file or a run summary JSON (via its embedded config_text).
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text of every key; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

}  // namespace villain
