#pragma once

// Comparison of the covariance-matrix pipeline against the Fock-space
// oracle on randomly drawn loss configurations.

#include <cstdint>
#include <vector>

#include "swapsim/oracle.hpp"

namespace swapsim {

struct CrosscheckCase {
  NetworkConfig config;
  PumpConfig pump;
  MeasurementAngles angles;
  double p_success_gaussian = 0.0;
  double p_success_oracle = 0.0;
  double rel_p_success = 0.0;
  double rel_outcomes = 0.0;  // worst over the 16 outcomes of the four CHSH settings
  double rel_pdm_diagonal = 0.0;
};

struct CrosscheckReport {
  std::vector<CrosscheckCase> cases;
  double max_rel_p_success = 0.0;
  double max_rel_outcomes = 0.0;
  double max_rel_pdm_diagonal = 0.0;
  double max_rel() const;
};

// |a - b| / |b|, or |a - b| when |b| < floor.
double relative_difference(double a, double b, double floor = 1e-12);

// A random lossy network: scheme alternates CH/SH with `index`, channel
// transmittances in [0.3, 1], eta_1..eta_8 in [0.5, 1], T_mode in [0.8, 1],
// nu in [0, 1e-4] and either BSM pattern set. Angles are uniform in [0, pi).
CrosscheckCase random_crosscheck_case(std::uint64_t seed, std::uint64_t index, double mu);

// Fills the comparison fields of `c`.
void run_crosscheck(CrosscheckCase& c, const oracle::OracleOptions& options);

// `count` random cases with every mu equal to `mu`.
CrosscheckReport crosscheck(std::uint64_t seed, int count, double mu,
                            const oracle::OracleOptions& options, int threads = 0);

}  // namespace swapsim
