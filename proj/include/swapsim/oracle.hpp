#pragma once

// Brute-force Fock-space simulator of the relay network for small mean
// photon numbers. It shares no code with the covariance-matrix pipeline and
// serves as a reference for it.
//
// States are sparse real superpositions of occupation-number vectors (all
// amplitudes in this network are real). Losses before the interference
// couple to explicit environment modes; detector inefficiencies and dark
// counts enter through the diagonal on/off POVM, so no environment is
// needed after the last beamsplitter.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "swapsim/detection.hpp"
#include "swapsim/fock.hpp"

namespace swapsim::oracle {

inline constexpr std::size_t kMaxModes = 32;
using Occupation = std::array<std::uint8_t, kMaxModes>;

class FockState {
 public:
  FockState() = default;
  explicit FockState(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t index(const std::string& label) const;
  const std::map<Occupation, double>& amplitudes() const { return amp_; }

  void set_amplitude(const Occupation& occ, double a);
  double amplitude(const Occupation& occ) const;
  double norm_squared() const;

  // Appends a vacuum mode.
  void add_mode(const std::string& label);

  // Creation operators map as a_i^+ -> c a_i^+ + s a_j^+,
  // a_j^+ -> -s a_i^+ + c a_j^+ (c = cos theta, s = sin theta); this is the
  // Fock-space image of the covariance-matrix beamsplitter.
  void apply_bs(const std::string& i, const std::string& j, double theta);

  // Transmittance t into a fresh environment mode `env`.
  void apply_loss(const std::string& mode, double t, const std::string& env);

 private:
  std::vector<std::string> labels_;
  std::map<Occupation, double> amp_;
};

// c_n = lambda^n sqrt(1 - lambda^2), lambda = sqrt(mu / (mu + 1)), n <= n_max.
std::vector<double> tmsv_coefficients(double mu, int n_max);

// sum_n c_n |n, n> on modes (a, b). Throws ModelError if the truncation
// leakage 1 - sum c_n^2 exceeds 1e-6.
FockState tmsv_state(double mu, int n_max, const std::string& a = "a",
                     const std::string& b = "b");

// P(off) of a single on/off detector reading `modes` with efficiency eta:
// (1 - nu) * sum |amp|^2 (1 - eta)^{photons in modes}.
double off_probability(const FockState& state, const std::vector<std::string>& modes, double eta,
                       double nu);

struct OracleOptions {
  int n_max = 3;      // pairs per TMSV
  int max_pairs = 5;  // pairs summed over the four TMSVs
};

class NetworkOracle {
 public:
  NetworkOracle(const NetworkConfig& config, const PumpConfig& pump, OracleOptions options = {});

  // Norm lost to the truncation of the source state.
  double leakage() const { return leakage_; }
  double p_success() const;
  OutcomeDistribution outcome_distribution(double theta_a, double theta_b) const;
  // Heralded state on the reconstruction subspace, divided by p_success.
  Matrix6c partial_density_matrix() const;

 private:
  double herald_weight(const Occupation& occ) const;

  NetworkConfig config_;
  FockState state_;  // after the HBS, before the local measurements
  double leakage_ = 0.0;
};

}  // namespace swapsim::oracle
