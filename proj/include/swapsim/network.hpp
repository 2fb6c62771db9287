#pragma once

// Entanglement-swapping relay network: channel losses, mode-mismatch
// ancillas, the half beamsplitter (HBS) of the Bell-state measurement,
// heralding-detector losses, and the heralded state of (H1, V1, H4, V4).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "swapsim/gaussian.hpp"
#include "swapsim/source.hpp"

namespace swapsim {

enum class Scheme { kCenter, kSide };           // CH, SH
enum class BsmPatterns { kSingle, kBoth };      // D5V&D6H only, or + D5H&D6V

struct ChannelTransmittances {
  double eta_ah = 1.0;
  double eta_av = 1.0;
  double eta_bh = 1.0;
  double eta_bv = 1.0;
};

struct NetworkConfig {
  Scheme scheme = Scheme::kCenter;
  double length_km = 0.0;
  double attenuation_db_per_km = 0.2;
  // Replaces the length-derived transmittances when set.
  std::optional<ChannelTransmittances> channel_override;
  // Extra transmittance of one lossy HBS input port, applied to the mode
  // named by hbs_lossy_mode (one of H2, V2, H3, V3).
  double hbs_extra_loss = 1.0;
  std::string hbs_lossy_mode = "H3";
  double t_mode = 1.0;
  // eta[0..7] = eta_1 .. eta_8.
  std::array<double, 8> eta{1, 1, 1, 1, 1, 1, 1, 1};
  double nu = 0.0;
  BsmPatterns bsm_patterns = BsmPatterns::kBoth;
};

// Throws std::invalid_argument for out-of-range fields.
void validate(const NetworkConfig& config);

// eta_T = 10^(-attenuation * L / 10).
double total_transmittance(double length_km, double attenuation_db_per_km = 0.2);

// CH: all four = sqrt(eta_T); SH: (eta_T, eta_T, 1, 1).
ChannelTransmittances derive_channel_transmittances(Scheme scheme, double length_km,
                                                    double attenuation_db_per_km = 0.2);

// Effective per-arm transmittances including overrides and hbs_extra_loss.
// eta_ah, eta_av, eta_bh, eta_bv act on H2, V2, H3, V3.
ChannelTransmittances effective_channels(const NetworkConfig& config);

// Mode labels.
const ModeList& signal_modes();        // H1 V1 H2 V2 H3 V3 H4 V4
const ModeList& network_modes();       // signal modes then the 8 ancillas
const ModeList& heralded_modes();      // H1 V1 H4 V4

// A coincidence pattern of the Bell-state measurement: both detector
// groups must click. Each group lists the three modes (signal and its two
// mode-mismatch ancillas) that reach one detector.
struct BsmPattern {
  ModeList first;
  ModeList second;
};
BsmPattern pattern_d5v_d6h();  // {V3,V3a,V3b} & {H2,H2a,H2b}
BsmPattern pattern_d5h_d6v();  // {H3,H3a,H3b} & {V2,V2a,V2b}
std::vector<BsmPattern> active_patterns(BsmPatterns patterns);

// 16-mode state just before the heralding detectors' on/off projection.
GaussianState build_pre_bsm_state(const NetworkConfig& config, const PumpConfig& pump);

struct HeraldProbabilities {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p = 0.0;  // p0 - p1 + p2 - p3, computed stably
};

// On/off coincidence probability of one pattern with dark counts nu.
HeraldProbabilities herald_probability(const GaussianState& pre_bsm, double nu,
                                       const BsmPattern& pattern);

// Sum over the configured patterns.
double success_probability(const GaussianState& pre_bsm, double nu, BsmPatterns patterns);

// One Gaussian term of the heralded state, carrying its signed weight
// (-1)^i P_i.
struct HeraldComponent {
  double weight;
  GaussianState state;
};

// rho = (1 / p_success) * sum_k weight_k * rho(gamma_k) on (H1, V1, H4, V4).
struct HeraldedState {
  std::vector<HeraldComponent> components;
  std::vector<HeraldProbabilities> per_pattern;
  double p_success = 0.0;
};

inline constexpr double kMinSuccessProbability = 1e-30;

// Throws NeverHeraldsError when p_success <= 1e-30.
HeraldedState heralded_state(const GaussianState& pre_bsm, double nu, BsmPatterns patterns);

// Convenience: build_pre_bsm_state + heralded_state with the config's nu
// and patterns.
HeraldedState herald(const NetworkConfig& config, const PumpConfig& pump);

}  // namespace swapsim
