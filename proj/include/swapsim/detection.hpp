#pragma once

// Local polarization measurements on the heralded modes, on/off detection
// statistics, the CHSH value, QBER and device-independent key rate, and
// HOM visibility between the two sources.
//
// Detectors: D1 on H1 and D3 on V1 (Alice), D2 on H4 and D4 on V4 (Bob).
// A click pattern is a 4-bit mask, bit 0 = D1, bit 1 = D2, bit 2 = D3,
// bit 3 = D4. Outcome a = -1 iff D1 clicks and D3 does not; every other
// pattern (no click, D3 only, double click) gives a = +1. Same for b with
// D2 and D4.

#include <array>
#include <cstdint>

#include "swapsim/network.hpp"
#include "swapsim/source.hpp"

namespace swapsim {

inline constexpr std::uint32_t kD1 = 1u;
inline constexpr std::uint32_t kD2 = 2u;
inline constexpr std::uint32_t kD3 = 4u;
inline constexpr std::uint32_t kD4 = 8u;

inline constexpr double kProbabilityTolerance = 1e-9;

struct MeasurementAngles {
  double a0 = 0.0;  // Alice's key setting (QBER with b1)
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

// Every angle reduced to [0, pi).
MeasurementAngles normalized(const MeasurementAngles& angles);

struct OutcomeDistribution {
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::array<double, 16> p{};  // indexed by click mask, conditioned on the herald

  double total() const;
};

// Polarizer rotations and detector losses on the components of a heralded
// state: beamsplitter theta_a on (H1, V1), theta_b on (H4, V4), then
// eta_1..eta_4 on H1, H4, V1, V4.
HeraldedState apply_measurement(const HeraldedState& heralded, double theta_a, double theta_b,
                                const std::array<double, 8>& eta);

// Outcome distribution from the signed components, literally
// sum_k w_k * (inclusion-exclusion over vacuum overlaps) / p_success.
// Loses about eps / p_success absolute precision; fine for checks at
// moderate pump power.
OutcomeDistribution outcome_distribution(const HeraldedState& heralded, double theta_a,
                                         double theta_b, const NetworkConfig& config);

// Same distribution evaluated directly on the pre-BSM state with nested
// conditioning; accurate for weak pumps. Throws PhysicalityError if a
// probability leaves [-1e-9, 1 + 1e-9].
OutcomeDistribution outcome_distribution(const GaussianState& pre_bsm, double theta_a,
                                         double theta_b, const NetworkConfig& config);

// The probabilities behind correlator and error_rate, conditioned on the
// herald: P(a = -1), P(b = -1) and P(a = -1, b = -1).
struct BinnedProbabilities {
  double a_minus = 0.0;
  double b_minus = 0.0;
  double both_minus = 0.0;
};

BinnedProbabilities binned(const OutcomeDistribution& dist);

// Same numbers straight from the pre-BSM state without resolving all 16
// click patterns (cheaper; used by chsh_value).
BinnedProbabilities binned_probabilities(const GaussianState& pre_bsm, double theta_a,
                                         double theta_b, const NetworkConfig& config);

double correlator(const BinnedProbabilities& b);
double error_rate(const BinnedProbabilities& b);

// <ab> with the binning above.
double correlator(const OutcomeDistribution& dist);

// P(a != b).
double error_rate(const OutcomeDistribution& dist);

double binary_entropy(double x);

// h[(1 + sqrt((S/2)^2 - 1)) / 2]; requires S >= 2.
double holevo_chi(double s);

struct KeyRate {
  double qber = 0.0;
  double raw = 0.0;   // 1 - h(Q) - chi(S); -inf when S < 2
  double rate = 0.0;  // max(raw, 0), per heralded event
};

// Throws std::invalid_argument when qber leaves [0, 1] by more than 1e-9.
KeyRate key_rate(double qber, double s);

struct ChshReport {
  double s = 0.0;
  // <a1 b1>, <a2 b1>, <a1 b2>, <a2 b2>
  std::array<double, 4> correlators{};
  double p_success = 0.0;
  KeyRate key;
  double key_rate_per_pulse = 0.0;  // key.rate * p_success
};

// S = <a1b1> + <a2b1> + <a1b2> - <a2b2>. With `with_key`, also the QBER at
// (a0, b1) and the key rate.
ChshReport chsh_value(const NetworkConfig& config, const PumpConfig& pump,
                      const MeasurementAngles& angles, bool with_key = true);

// QBER at (a0, b1) and the key rate built on chsh_value.
KeyRate qber_and_key_rate(const NetworkConfig& config, const PumpConfig& pump,
                          const MeasurementAngles& angles);

struct HomReport {
  double visibility = 0.0;
  double coincidence = 0.0;      // four-fold rate at the configured T_mode
  double coincidence_far = 0.0;  // same with T_mode = 0 (fully distinguishable)
};

// Four-fold HOM dip between the sources: both trigger detectors D1, D2 set
// to V (theta = pi/2) and both H-output groups of the HBS click.
// V = (C_far - C) / C_far.
HomReport hom_visibility(const NetworkConfig& config, const PumpConfig& pump);

}  // namespace swapsim
