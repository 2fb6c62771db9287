#include "swapsim/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "swapsim/errors.hpp"

namespace swapsim::oracle {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

struct Group {
  std::vector<std::size_t> modes;
  double eta;
};

double group_off(const Occupation& occ, const Group& g, double nu, int n_detectors) {
  int photons = 0;
  for (std::size_t m : g.modes) photons += occ[m];
  return std::pow(1.0 - nu, n_detectors) * std::pow(1.0 - g.eta, photons);
}

}  // namespace

FockState::FockState(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() > kMaxModes) throw std::invalid_argument("oracle: too many modes");
  amp_[Occupation{}] = 1.0;
}

std::size_t FockState::index(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw std::out_of_range("oracle: unknown mode " + label);
}

void FockState::set_amplitude(const Occupation& occ, double a) {
  if (a == 0.0) {
    amp_.erase(occ);
  } else {
    amp_[occ] = a;
  }
}

double FockState::amplitude(const Occupation& occ) const {
  auto it = amp_.find(occ);
  return it == amp_.end() ? 0.0 : it->second;
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& [occ, a] : amp_) s += a * a;
  return s;
}

void FockState::add_mode(const std::string& label) {
  if (labels_.size() == kMaxModes) throw std::invalid_argument("oracle: too many modes");
  labels_.push_back(label);
}

void FockState::apply_bs(const std::string& mi, const std::string& mj, double theta) {
  const std::size_t i = index(mi);
  const std::size_t j = index(mj);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::map<Occupation, double> out;
  for (const auto& [occ, a] : amp_) {
    const int ni = occ[i];
    const int nj = occ[j];
    const double pre = a / std::sqrt(factorial(ni) * factorial(nj));
    for (int k = 0; k <= ni; ++k) {
      for (int l = 0; l <= nj; ++l) {
        const double coeff = binomial(ni, k) * std::pow(c, k) * std::pow(s, ni - k) *
                             binomial(nj, l) * std::pow(-s, l) * std::pow(c, nj - l);
        if (coeff == 0.0) continue;
        const int oi = k + l;
        const int oj = ni + nj - oi;
        Occupation next = occ;
        next[i] = static_cast<std::uint8_t>(oi);
        next[j] = static_cast<std::uint8_t>(oj);
        out[next] += pre * coeff * std::sqrt(factorial(oi) * factorial(oj));
      }
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  amp_ = std::move(out);
}

void FockState::apply_loss(const std::string& mode, double t, const std::string& env) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("oracle: transmittance outside [0, 1]");
  add_mode(env);
  apply_bs(mode, env, std::acos(std::sqrt(t)));
}

std::vector<double> tmsv_coefficients(double mu, int n_max) {
  if (!(mu >= 0.0)) throw std::invalid_argument("oracle: mu must be >= 0");
  if (n_max < 0) throw std::invalid_argument("oracle: n_max must be >= 0");
  const double lambda = std::sqrt(mu / (mu + 1.0));
  const double c0 = std::sqrt(1.0 - lambda * lambda);
  std::vector<double> c(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) c[n] = c0 * std::pow(lambda, n);
  return c;
}

FockState tmsv_state(double mu, int n_max, const std::string& a, const std::string& b) {
  const auto c = tmsv_coefficients(mu, n_max);
  double kept = 0.0;
  for (double v : c) kept += v * v;
  if (1.0 - kept > 1e-6) throw ModelError("oracle: TMSV truncation leaks more than 1e-6");
  FockState st({a, b});
  st.set_amplitude(Occupation{}, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    Occupation occ{};
    occ[0] = occ[1] = static_cast<std::uint8_t>(n);
    st.set_amplitude(occ, c[n]);
  }
  return st;
}

double off_probability(const FockState& state, const std::vector<std::string>& modes, double eta,
                       double nu) {
  Group g{{}, eta};
  for (const auto& m : modes) g.modes.push_back(state.index(m));
  double p = 0.0;
  for (const auto& [occ, a] : state.amplitudes()) p += a * a * group_off(occ, g, nu, 1);
  return p;
}

NetworkOracle::NetworkOracle(const NetworkConfig& config, const PumpConfig& pump,
                             OracleOptions options)
    : config_(config) {
  validate(config);
  validate(pump);
  // Signal modes first so the heralded modes sit at 0..3.
  state_ = FockState({"H1", "V1", "H4", "V4", "H2", "V2", "H3", "V3", "H2a", "H3a", "V2a", "V3a",
                      "H2b", "H3b", "V2b", "V3b"});
  state_.set_amplitude(Occupation{}, 0.0);

  // TMSV1 H1-V2, TMSV2 V1-H2, TMSV3 H3-V4, TMSV4 V3-H4 (negative sign).
  struct Pair {
    double mu;
    const char* a;
    const char* b;
    double sign;
  };
  const std::array<Pair, 4> pairs{{{pump.mu1, "H1", "V2", 1.0},
                                   {pump.mu2, "V1", "H2", 1.0},
                                   {pump.mu3, "H3", "V4", 1.0},
                                   {pump.mu4, "V3", "H4", -1.0}}};
  std::array<std::vector<double>, 4> coeff;
  for (int k = 0; k < 4; ++k) coeff[k] = tmsv_coefficients(pairs[k].mu, options.n_max);

  double kept = 0.0;
  const int n = options.n_max;
  for (int n1 = 0; n1 <= n; ++n1) {
    for (int n2 = 0; n2 <= n; ++n2) {
      for (int n3 = 0; n3 <= n; ++n3) {
        for (int n4 = 0; n4 <= n; ++n4) {
          if (n1 + n2 + n3 + n4 > options.max_pairs) continue;
          const std::array<int, 4> ns{n1, n2, n3, n4};
          Occupation occ{};
          double a = 1.0;
          for (int k = 0; k < 4; ++k) {
            occ[state_.index(pairs[k].a)] = static_cast<std::uint8_t>(ns[k]);
            occ[state_.index(pairs[k].b)] = static_cast<std::uint8_t>(ns[k]);
            a *= coeff[k][ns[k]] * std::pow(pairs[k].sign, ns[k]);
          }
          state_.set_amplitude(occ, a);
          kept += a * a;
        }
      }
    }
  }
  leakage_ = 1.0 - kept;

  const ChannelTransmittances ch = effective_channels(config);
  state_.apply_loss("H2", ch.eta_ah, "EH2");
  state_.apply_loss("V2", ch.eta_av, "EV2");
  state_.apply_loss("H3", ch.eta_bh, "EH3");
  state_.apply_loss("V3", ch.eta_bv, "EV3");

  const double theta_mode = std::acos(std::sqrt(config.t_mode));
  for (const char* m : {"H2", "H3", "V2", "V3"}) {
    state_.apply_bs(m, std::string(m) + "a", theta_mode);
  }
  const double half = std::numbers::pi / 4.0;
  state_.apply_bs("H2", "H3", half);
  state_.apply_bs("H2a", "H3b", half);
  state_.apply_bs("H3a", "H2b", half);
  state_.apply_bs("V2", "V3", half);
  state_.apply_bs("V2a", "V3b", half);
  state_.apply_bs("V3a", "V2b", half);
}

double NetworkOracle::herald_weight(const Occupation& occ) const {
  auto group = [this](const char* base, double eta) {
    const std::string b(base);
    return Group{{state_.index(b), state_.index(b + "a"), state_.index(b + "b")}, eta};
  };
  const auto& eta = config_.eta;
  const double nu = config_.nu;
  auto on = [&](const Group& g) { return 1.0 - group_off(occ, g, nu, 3); };
  double w = on(group("V3", eta[4])) * on(group("H2", eta[7]));
  if (config_.bsm_patterns == BsmPatterns::kBoth) {
    w += on(group("H3", eta[5])) * on(group("V2", eta[6]));
  }
  return w;
}

double NetworkOracle::p_success() const {
  double p = 0.0;
  for (const auto& [occ, a] : state_.amplitudes()) p += a * a * herald_weight(occ);
  return p;
}

OutcomeDistribution NetworkOracle::outcome_distribution(double theta_a, double theta_b) const {
  FockState st = state_;
  st.apply_bs("H1", "V1", theta_a);
  st.apply_bs("H4", "V4", theta_b);
  const auto& eta = config_.eta;
  // Bits: D1 = H1 (eta1), D2 = H4 (eta2), D3 = V1 (eta3), D4 = V4 (eta4).
  const std::array<Group, 4> det{{{{st.index("H1")}, eta[0]},
                                  {{st.index("H4")}, eta[1]},
                                  {{st.index("V1")}, eta[2]},
                                  {{st.index("V4")}, eta[3]}}};
  OutcomeDistribution out;
  out.theta_a = theta_a;
  out.theta_b = theta_b;
  double total = 0.0;
  for (const auto& [occ, a] : st.amplitudes()) {
    const double w = a * a * herald_weight(occ);
    if (w == 0.0) continue;
    total += w;
    std::array<double, 4> off;
    for (int d = 0; d < 4; ++d) off[d] = group_off(occ, det[d], config_.nu, 1);
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
      double p = w;
      for (int d = 0; d < 4; ++d) p *= (mask >> d) & 1u ? 1.0 - off[d] : off[d];
      out.p[mask] += p;
    }
  }
  if (!(total > 0.0)) throw NeverHeraldsError("oracle: the network never heralds");
  for (double& p : out.p) p /= total;
  return out;
}

Matrix6c NetworkOracle::partial_density_matrix() const {
  const auto& basis = reconstruction_basis();
  auto basis_position = [&](const Occupation& occ) {
    for (int k = 0; k < 6; ++k) {
      bool same = true;
      for (int m = 0; m < 4; ++m) same = same && occ[m] == basis[k].occupations[m];
      if (same) return k;
    }
    return -1;
  };
  // Group amplitudes by the occupation of every mode except H1 V1 H4 V4.
  std::map<Occupation, std::vector<std::pair<int, double>>> by_rest;
  for (const auto& [occ, a] : state_.amplitudes()) {
    const int k = basis_position(occ);
    if (k < 0) continue;
    Occupation rest = occ;
    for (int m = 0; m < 4; ++m) rest[m] = 0;
    by_rest[rest].push_back({k, a});
  }
  Matrix6c rho = Matrix6c::Zero();
  for (const auto& [rest, entries] : by_rest) {
    const double w = herald_weight(rest);
    for (const auto& [r, ar] : entries) {
      for (const auto& [c, ac] : entries) rho(r, c) += w * ar * ac;
    }
  }
  return rho / p_success();
}

}  // namespace swapsim::oracle
