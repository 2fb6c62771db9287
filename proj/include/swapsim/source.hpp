#pragma once

// Two Sagnac-loop polarization-entangled SPDC sources, each a pair of
// two-mode squeezed vacua (TMSV) parameterized by mean photon number.
//
//   source A: TMSV1 couples H1-V2 (mu1), TMSV2 couples V1-H2 (mu2)
//   source B: TMSV3 couples H3-V4 (mu3), TMSV4 couples V3-H4 (mu4)
//
// Pump phases are fixed at (0, 0, 0, pi), so the post-selected two-photon
// components are |Psi+>_12 and |Psi->_34.

#include "swapsim/gaussian.hpp"

namespace swapsim {

inline constexpr double kMaxMeanPhotonNumber = 1e2;

struct PumpConfig {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
};

// Throws std::invalid_argument unless every mu is in [0, 1e2).
void validate(const PumpConfig& pump);

// Register (H1, V1, H2, V2).
GaussianState source_a_covariance(double mu1, double mu2);

// Register (H3, V3, H4, V4).
GaussianState source_b_covariance(double mu3, double mu4);

// Register (H1, V1, H2, V2, H3, V3, H4, V4).
GaussianState combined_input(const PumpConfig& pump);

// Mean photon number of one mode, (gamma_xx + gamma_pp - 2) / 4.
double mean_photon_number(const GaussianState& state, std::string_view mode);

}  // namespace swapsim
