#include "swapsim/network.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swapsim/clicks.hpp"
#include "swapsim/errors.hpp"

namespace swapsim {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string("network: ") + name + " must lie in [0, 1]");
  }
}

const ModeList& ancilla_modes() {
  static const ModeList modes{"H2a", "H3a", "V2a", "V3a", "H2b", "H3b", "V2b", "V3b"};
  return modes;
}

// Both detector groups of the pattern click, with per-click dark counts.
HeraldProbabilities coincidence(const GaussianState& state, double nu, const ModeList& first,
                                const ModeList& second) {
  ModeList both = first;
  both.insert(both.end(), second.begin(), second.end());
  const double off3 = std::pow(1.0 - nu, 3.0);
  HeraldProbabilities h;
  h.p0 = 1.0;
  h.p1 = off3 * vacuum_overlap(state, first);
  h.p2 = off3 * off3 * vacuum_overlap(state, both);
  h.p3 = off3 * vacuum_overlap(state, second);
  // Same value as p0 - p1 + p2 - p3, evaluated without the cancellation
  // that swamps it for weak pumps.
  h.p = coincidence_probability(state, {first, second}, nu);
  return h;
}

}  // namespace

void validate(const NetworkConfig& config) {
  if (!(config.length_km >= 0.0)) throw std::invalid_argument("network: length must be >= 0");
  if (!(config.attenuation_db_per_km >= 0.0)) {
    throw std::invalid_argument("network: attenuation must be >= 0");
  }
  if (config.channel_override) {
    check_unit(config.channel_override->eta_ah, "eta_AH");
    check_unit(config.channel_override->eta_av, "eta_AV");
    check_unit(config.channel_override->eta_bh, "eta_BH");
    check_unit(config.channel_override->eta_bv, "eta_BV");
  }
  check_unit(config.hbs_extra_loss, "hbs_extra_loss");
  if (config.hbs_lossy_mode != "H2" && config.hbs_lossy_mode != "V2" &&
      config.hbs_lossy_mode != "H3" && config.hbs_lossy_mode != "V3") {
    throw std::invalid_argument("network: hbs_lossy_mode must be H2, V2, H3 or V3");
  }
  check_unit(config.t_mode, "T_mode");
  for (double e : config.eta) check_unit(e, "detector efficiency");
  if (!(config.nu >= 0.0 && config.nu < 1.0)) {
    throw std::invalid_argument("network: dark-count probability must lie in [0, 1)");
  }
}

double total_transmittance(double length_km, double attenuation_db_per_km) {
  if (!(length_km >= 0.0)) throw std::invalid_argument("network: length must be >= 0");
  return std::pow(10.0, -attenuation_db_per_km * length_km / 10.0);
}

ChannelTransmittances derive_channel_transmittances(Scheme scheme, double length_km,
                                                    double attenuation_db_per_km) {
  const double eta_t = total_transmittance(length_km, attenuation_db_per_km);
  if (scheme == Scheme::kCenter) {
    const double half = std::sqrt(eta_t);
    return {half, half, half, half};
  }
  return {eta_t, eta_t, 1.0, 1.0};
}

ChannelTransmittances effective_channels(const NetworkConfig& config) {
  ChannelTransmittances ch =
      config.channel_override
          ? *config.channel_override
          : derive_channel_transmittances(config.scheme, config.length_km,
                                          config.attenuation_db_per_km);
  const std::string& m = config.hbs_lossy_mode;
  if (m == "H2") ch.eta_ah *= config.hbs_extra_loss;
  else if (m == "V2") ch.eta_av *= config.hbs_extra_loss;
  else if (m == "H3") ch.eta_bh *= config.hbs_extra_loss;
  else if (m == "V3") ch.eta_bv *= config.hbs_extra_loss;
  else throw std::invalid_argument("network: hbs_lossy_mode must be H2, V2, H3 or V3");
  return ch;
}

const ModeList& signal_modes() {
  static const ModeList modes{"H1", "V1", "H2", "V2", "H3", "V3", "H4", "V4"};
  return modes;
}

const ModeList& network_modes() {
  static const ModeList modes = [] {
    ModeList all = signal_modes();
    all.insert(all.end(), ancilla_modes().begin(), ancilla_modes().end());
    return all;
  }();
  return modes;
}

const ModeList& heralded_modes() {
  static const ModeList modes{"H1", "V1", "H4", "V4"};
  return modes;
}

BsmPattern pattern_d5v_d6h() { return {{"V3", "V3a", "V3b"}, {"H2", "H2a", "H2b"}}; }
BsmPattern pattern_d5h_d6v() { return {{"H3", "H3a", "H3b"}, {"V2", "V2a", "V2b"}}; }

std::vector<BsmPattern> active_patterns(BsmPatterns patterns) {
  if (patterns == BsmPatterns::kSingle) return {pattern_d5v_d6h()};
  return {pattern_d5v_d6h(), pattern_d5h_d6v()};
}

GaussianState build_pre_bsm_state(const NetworkConfig& config, const PumpConfig& pump) {
  validate(config);
  const ChannelTransmittances ch = effective_channels(config);

  GaussianState state = combined_input(pump);
  state = apply_loss(state, "H2", ch.eta_ah);
  state = apply_loss(state, "V2", ch.eta_av);
  state = apply_loss(state, "H3", ch.eta_bh);
  state = apply_loss(state, "V3", ch.eta_bv);

  state = direct_sum(state, vacuum(ModeRegister(ancilla_modes())));

  // Virtual beamsplitters split each pulse into an interfering part and a
  // part that only meets vacuum at the HBS.
  const double theta_mode = std::acos(std::sqrt(config.t_mode));
  for (auto [s, a] : {std::pair{"H2", "H2a"}, {"H3", "H3a"}, {"V2", "V2a"}, {"V3", "V3a"}}) {
    state = apply_beamsplitter(state, theta_mode, s, a);
  }

  constexpr double kHalf = std::numbers::pi / 4.0;
  for (auto [i, j] : {std::pair{"H2", "H3"}, {"H2a", "H3b"}, {"H3a", "H2b"}, {"V2", "V3"},
                      {"V2a", "V3b"}, {"V3a", "V2b"}}) {
    state = apply_beamsplitter(state, kHalf, i, j);
  }

  const auto& eta = config.eta;
  for (const char* m : {"H2", "H2a", "H2b"}) state = apply_loss(state, m, eta[7]);
  for (const char* m : {"V2", "V2a", "V2b"}) state = apply_loss(state, m, eta[6]);
  for (const char* m : {"H3", "H3a", "H3b"}) state = apply_loss(state, m, eta[5]);
  for (const char* m : {"V3", "V3a", "V3b"}) state = apply_loss(state, m, eta[4]);
  return state;
}

HeraldProbabilities herald_probability(const GaussianState& pre_bsm, double nu,
                                       const BsmPattern& pattern) {
  if (!(nu >= 0.0 && nu < 1.0)) {
    throw std::invalid_argument("herald_probability: nu must lie in [0, 1)");
  }
  return coincidence(pre_bsm, nu, pattern.first, pattern.second);
}

double success_probability(const GaussianState& pre_bsm, double nu, BsmPatterns patterns) {
  double p = 0.0;
  for (const auto& pattern : active_patterns(patterns)) {
    p += herald_probability(pre_bsm, nu, pattern).p;
  }
  return p;
}

HeraldedState heralded_state(const GaussianState& pre_bsm, double nu, BsmPatterns patterns) {
  HeraldedState out;
  const ModeList& keep = heralded_modes();
  double p0_weight = 0.0;
  std::vector<HeraldComponent> conditioned;
  for (const auto& pattern : active_patterns(patterns)) {
    const HeraldProbabilities h = herald_probability(pre_bsm, nu, pattern);
    out.per_pattern.push_back(h);
    out.p_success += h.p;
    p0_weight += h.p0;

    ModeList both = pattern.first;
    both.insert(both.end(), pattern.second.begin(), pattern.second.end());
    conditioned.push_back({-h.p1, condition_on_vacuum(pre_bsm, pattern.first, keep)});
    conditioned.push_back({+h.p2, condition_on_vacuum(pre_bsm, both, keep)});
    conditioned.push_back({-h.p3, condition_on_vacuum(pre_bsm, pattern.second, keep)});
  }
  if (!(out.p_success > kMinSuccessProbability)) {
    throw NeverHeraldsError("the network never heralds (p_success = " +
                            std::to_string(out.p_success) + ")");
  }
  // The unconditioned term is shared between patterns.
  out.components.push_back({p0_weight, extract(pre_bsm, keep)});
  for (auto& c : conditioned) out.components.push_back(std::move(c));
  return out;
}

HeraldedState herald(const NetworkConfig& config, const PumpConfig& pump) {
  return heralded_state(build_pre_bsm_state(config, pump), config.nu, config.bsm_patterns);
}

}  // namespace swapsim
