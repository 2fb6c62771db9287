#pragma once

// Run configuration: an INI-style document with sections
//
//   [network] scheme, length_km, attenuation_db_per_km, eta_ah, eta_av,
//             eta_bh, eta_bv, hbs_extra_loss, hbs_lossy_mode, t_mode,
//             eta1..eta8, nu, bsm_patterns
//   [pump]    mu1..mu4
//   [angles]  a0, a1, a2, b1, b2
//   [search]  objective, mu_min, mu_max, mu_lower1..mu_lower4, budget, seed,
//             refine_rounds, refine_budget, refine_starts, refine_radius,
//             vary, threads
//   [scan]    lengths_km, schemes, mode
//   [threshold] policy, start, lo, hi, tol
//   [oracle]  mu, n_max, max_pairs, random_configs, seed, tolerance
//   [output]  path, format
//
// Unknown sections or keys are errors. Missing keys keep the defaults of
// the library structs; canonical_text() echoes every resolved value.

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swapsim/optimizer.hpp"

namespace swapsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanSettings {
  std::vector<double> lengths_km{0.0};
  std::vector<Scheme> schemes{Scheme::kCenter};
  bool fixed = false;  // evaluate [pump]/[angles] instead of optimizing
};

struct ThresholdSettings {
  ThresholdPolicy policy = ThresholdPolicy::kRefine;
  // "search": global search at eta = hi first; "config": start from
  // [pump]/[angles].
  std::string start = "search";
  double lo = 0.5;
  double hi = 1.0;
  double tol = 1e-4;
};

struct OracleSettings {
  double mu = 1e-3;  // every source
  int n_max = 3;
  int max_pairs = 5;
  int random_configs = 5;
  std::uint64_t seed = 1;
  double tolerance = 1e-3;
};

struct OutputSettings {
  std::string path;  // empty: stdout only
  std::string format = "csv";
};

struct RunConfig {
  NetworkConfig network;
  PumpConfig pump;
  MeasurementAngles angles;
  SearchSpec search;
  // Which parameters the search varies: "all", "angles" (pump held at
  // [pump]) or "pump" (angles held at [angles]).
  std::string vary = "all";
  ScanSettings scan;
  ThresholdSettings threshold;
  OracleSettings oracle;
  OutputSettings output;
};

// Throws ConfigError naming the offending line or key.
RunConfig parse_config(std::istream& in, const std::string& source_name = "<config>");
RunConfig load_config(const std::string& path);

// Every physics and search setting as "key = value" lines under section
// headers, floats with 17 significant digits. Output and thread settings
// are left out because they do not change results.
std::string canonical_text(const RunConfig& config);

// SHA-256 of canonical_text, hex.
std::string config_hash(const RunConfig& config);

// 17-significant-digit, locale-independent rendering.
std::string format_double(double v);

std::string scheme_name(Scheme s);

}  // namespace swapsim
