#include "swapsim/detection.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "swapsim/clicks.hpp"
#include "swapsim/errors.hpp"

namespace swapsim {

namespace {

// Detector d (bit position) -> heralded mode.
constexpr std::array<const char*, 4> kDetectorModes{"H1", "H4", "V1", "V4"};
// eta index (0-based) of each detector.
constexpr std::array<int, 4> kDetectorEta{0, 1, 2, 3};

double wrap_angle(double theta) {
  const double pi = std::numbers::pi;
  double r = std::fmod(theta, pi);
  if (r < 0.0) r += pi;
  if (r >= pi) r -= pi;
  return r;
}

GaussianState measure_modes(GaussianState state, double theta_a, double theta_b,
                            const std::array<double, 8>& eta) {
  state = apply_beamsplitter(state, theta_a, "H1", "V1");
  state = apply_beamsplitter(state, theta_b, "H4", "V4");
  for (std::size_t d = 0; d < 4; ++d) {
    state = apply_loss(state, kDetectorModes[d], eta[static_cast<std::size_t>(kDetectorEta[d])]);
  }
  return state;
}

std::vector<ModeList> detector_groups() {
  std::vector<ModeList> groups;
  for (const char* m : kDetectorModes) groups.push_back({m});
  return groups;
}

void check_distribution(const OutcomeDistribution& dist) {
  for (std::size_t m = 0; m < dist.p.size(); ++m) {
    const double v = dist.p[m];
    if (!(v >= -kProbabilityTolerance && v <= 1.0 + kProbabilityTolerance)) {
      throw PhysicalityError("outcome probability " + std::to_string(v) + " for click pattern " +
                             std::to_string(m) + " is outside [0, 1]");
    }
  }
}

bool alice_minus(std::uint32_t m) { return (m & kD1) && !(m & kD3); }
bool bob_minus(std::uint32_t m) { return (m & kD2) && !(m & kD4); }

double expectation(const OutcomeDistribution& dist, bool use_a, bool use_b) {
  double e = 0.0;
  for (std::uint32_t m = 0; m < 16; ++m) {
    const double a = (use_a && alice_minus(m)) ? -1.0 : 1.0;
    const double b = (use_b && bob_minus(m)) ? -1.0 : 1.0;
    e += a * b * dist.p[m];
  }
  return e;
}

}  // namespace

MeasurementAngles normalized(const MeasurementAngles& angles) {
  return {wrap_angle(angles.a0), wrap_angle(angles.a1), wrap_angle(angles.a2),
          wrap_angle(angles.b1), wrap_angle(angles.b2)};
}

double OutcomeDistribution::total() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

HeraldedState apply_measurement(const HeraldedState& heralded, double theta_a, double theta_b,
                                const std::array<double, 8>& eta) {
  HeraldedState out;
  out.per_pattern = heralded.per_pattern;
  out.p_success = heralded.p_success;
  for (const auto& c : heralded.components) {
    out.components.push_back({c.weight, measure_modes(c.state, theta_a, theta_b, eta)});
  }
  return out;
}

OutcomeDistribution outcome_distribution(const HeraldedState& heralded, double theta_a,
                                         double theta_b, const NetworkConfig& config) {
  const HeraldedState measured = apply_measurement(heralded, theta_a, theta_b, config.eta);
  const double off = 1.0 - config.nu;
  OutcomeDistribution dist;
  dist.theta_a = theta_a;
  dist.theta_b = theta_b;
  for (const auto& comp : measured.components) {
    // Q[v] = vacuum overlap of the detectors in v.
    std::array<double, 16> q{};
    q[0] = 1.0;
    for (std::uint32_t v = 1; v < 16; ++v) {
      ModeList modes;
      for (std::size_t d = 0; d < 4; ++d) {
        if (v & (1u << d)) modes.push_back(kDetectorModes[d]);
      }
      q[v] = vacuum_overlap(comp.state, modes);
    }
    for (std::uint32_t clicked = 0; clicked < 16; ++clicked) {
      const std::uint32_t silent = 15u & ~clicked;
      double sum = 0.0;
      for (std::uint32_t t = clicked;; t = (t - 1) & clicked) {
        const int n = std::popcount(silent) + std::popcount(t);
        const double sign = (std::popcount(t) % 2) ? -1.0 : 1.0;
        sum += sign * std::pow(off, n) * q[silent | t];
        if (t == 0) break;
      }
      dist.p[clicked] += comp.weight * sum;
    }
  }
  for (double& v : dist.p) v /= heralded.p_success;
  return dist;
}

OutcomeDistribution outcome_distribution(const GaussianState& pre_bsm, double theta_a,
                                         double theta_b, const NetworkConfig& config) {
  OutcomeDistribution dist;
  dist.theta_a = theta_a;
  dist.theta_b = theta_b;
  double p_success = 0.0;
  for (const auto& pattern : active_patterns(config.bsm_patterns)) {
    ModeList modes = pattern.first;
    modes.insert(modes.end(), pattern.second.begin(), pattern.second.end());
    modes.insert(modes.end(), heralded_modes().begin(), heralded_modes().end());
    const GaussianState local =
        measure_modes(extract(pre_bsm, modes), theta_a, theta_b, config.eta);
    ClickEngine engine(local, {pattern.first, pattern.second}, detector_groups(), config.nu);
    p_success += engine.required_probability();
    const auto joint = engine.joint_distribution();
    for (std::size_t m = 0; m < 16; ++m) dist.p[m] += joint[m];
  }
  if (!(p_success > kMinSuccessProbability)) {
    throw NeverHeraldsError("the network never heralds (p_success = " +
                            std::to_string(p_success) + ")");
  }
  for (double& v : dist.p) v /= p_success;
  check_distribution(dist);
  return dist;
}

BinnedProbabilities binned(const OutcomeDistribution& dist) {
  BinnedProbabilities b;
  for (std::uint32_t m = 0; m < 16; ++m) {
    if (alice_minus(m)) b.a_minus += dist.p[m];
    if (bob_minus(m)) b.b_minus += dist.p[m];
    if (alice_minus(m) && bob_minus(m)) b.both_minus += dist.p[m];
  }
  return b;
}

BinnedProbabilities binned_probabilities(const GaussianState& pre_bsm, double theta_a,
                                         double theta_b, const NetworkConfig& config) {
  BinnedProbabilities b;
  double p_success = 0.0;
  for (const auto& pattern : active_patterns(config.bsm_patterns)) {
    ModeList modes = pattern.first;
    modes.insert(modes.end(), pattern.second.begin(), pattern.second.end());
    modes.insert(modes.end(), heralded_modes().begin(), heralded_modes().end());
    const GaussianState local =
        measure_modes(extract(pre_bsm, modes), theta_a, theta_b, config.eta);
    ClickEngine engine(local, {pattern.first, pattern.second}, detector_groups(), config.nu);
    p_success += engine.required_probability();
    b.a_minus += engine.probability(kD1, kD3);
    b.b_minus += engine.probability(kD2, kD4);
    b.both_minus += engine.probability(kD1 | kD2, kD3 | kD4);
  }
  if (!(p_success > kMinSuccessProbability)) {
    throw NeverHeraldsError("the network never heralds (p_success = " +
                            std::to_string(p_success) + ")");
  }
  b.a_minus /= p_success;
  b.b_minus /= p_success;
  b.both_minus /= p_success;
  for (double v : {b.a_minus, b.b_minus, b.both_minus}) {
    if (!(v >= -kProbabilityTolerance && v <= 1.0 + kProbabilityTolerance)) {
      throw PhysicalityError("binned probability " + std::to_string(v) + " is outside [0, 1]");
    }
  }
  return b;
}

double correlator(const BinnedProbabilities& b) {
  return 1.0 - 2.0 * b.a_minus - 2.0 * b.b_minus + 4.0 * b.both_minus;
}

double error_rate(const BinnedProbabilities& b) {
  return b.a_minus + b.b_minus - 2.0 * b.both_minus;
}

double correlator(const OutcomeDistribution& dist) { return expectation(dist, true, true); }

double error_rate(const OutcomeDistribution& dist) {
  double e = 0.0;
  for (std::uint32_t m = 0; m < 16; ++m) {
    if (alice_minus(m) != bob_minus(m)) e += dist.p[m];
  }
  return e;
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("binary_entropy: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double holevo_chi(double s) {
  if (!(s >= 2.0)) throw std::invalid_argument("holevo_chi: needs S >= 2");
  const double r = std::sqrt(std::max(0.0, std::min(1.0, s * s / 4.0 - 1.0)));
  return binary_entropy((1.0 + r) / 2.0);
}

KeyRate key_rate(double qber, double s) {
  if (!(qber >= -kProbabilityTolerance && qber <= 1.0 + kProbabilityTolerance)) {
    throw std::invalid_argument("key_rate: QBER outside [0, 1]");
  }
  KeyRate k;
  k.qber = qber;
  if (!(s >= 2.0)) {
    k.raw = -std::numeric_limits<double>::infinity();
    k.rate = 0.0;
    return k;
  }
  const double q = std::min(1.0, std::max(0.0, qber));
  k.raw = 1.0 - binary_entropy(q) - holevo_chi(s);
  k.rate = std::max(0.0, k.raw);
  return k;
}

ChshReport chsh_value(const NetworkConfig& config, const PumpConfig& pump,
                      const MeasurementAngles& angles, bool with_key) {
  const GaussianState pre = build_pre_bsm_state(config, pump);
  ChshReport report;
  report.p_success = success_probability(pre, config.nu, config.bsm_patterns);
  if (!(report.p_success > kMinSuccessProbability)) {
    throw NeverHeraldsError("the network never heralds (p_success = " +
                            std::to_string(report.p_success) + ")");
  }
  const std::array<std::pair<double, double>, 4> settings{
      std::pair{angles.a1, angles.b1}, {angles.a2, angles.b1}, {angles.a1, angles.b2},
      {angles.a2, angles.b2}};
  for (std::size_t i = 0; i < 4; ++i) {
    report.correlators[i] =
        correlator(binned_probabilities(pre, settings[i].first, settings[i].second, config));
  }
  const auto& e = report.correlators;
  report.s = e[0] + e[1] + e[2] - e[3];
  if (with_key) {
    const double q = error_rate(binned_probabilities(pre, angles.a0, angles.b1, config));
    report.key = key_rate(q, report.s);
    report.key_rate_per_pulse = report.key.rate * report.p_success;
  }
  return report;
}

KeyRate qber_and_key_rate(const NetworkConfig& config, const PumpConfig& pump,
                          const MeasurementAngles& angles) {
  return chsh_value(config, pump, angles, true).key;
}

HomReport hom_visibility(const NetworkConfig& config, const PumpConfig& pump) {
  const double v_setting = std::numbers::pi / 2.0;
  auto fourfold = [&](const NetworkConfig& cfg) {
    const GaussianState pre = build_pre_bsm_state(cfg, pump);
    const ModeList h3{"H3", "H3a", "H3b"};
    const ModeList h2{"H2", "H2a", "H2b"};
    ModeList modes = h3;
    modes.insert(modes.end(), h2.begin(), h2.end());
    modes.insert(modes.end(), heralded_modes().begin(), heralded_modes().end());
    const GaussianState local = measure_modes(extract(pre, modes), v_setting, v_setting, cfg.eta);
    return coincidence_probability(local, {h3, h2, {"H1"}, {"H4"}}, cfg.nu);
  };
  HomReport r;
  r.coincidence = fourfold(config);
  NetworkConfig far = config;
  far.t_mode = 0.0;
  r.coincidence_far = fourfold(far);
  if (!(r.coincidence_far > 0.0)) {
    throw ModelError("hom_visibility: no four-fold coincidences without interference");
  }
  r.visibility = (r.coincidence_far - r.coincidence) / r.coincidence_far;
  return r;
}

}  // namespace swapsim
