#include "swapsim/source.hpp"

#include <cmath>
#include <stdexcept>

namespace swapsim {

namespace {

// One source's covariance over (a, b, c, d) = (H, V, H', V'):
// TMSV(mu_hv) couples a-d, TMSV(mu_vh) couples b-c; the x-block coupling
// signs are (sign_hv, sign_vh) and the p-block carries the opposite signs.
GaussianState sagnac_source(ModeRegister modes, double mu_hv, double mu_vh, double sign_hv,
                            double sign_vh) {
  if (!(mu_hv >= 0.0) || !(mu_vh >= 0.0)) {
    throw std::invalid_argument("source: mean photon numbers must be non-negative");
  }
  // Excess covariance (gamma - I): diagonal 2 mu, coupling 2 sqrt(mu (mu + 1)).
  const double d1 = 2.0 * mu_hv;
  const double d2 = 2.0 * mu_vh;
  const double c1 = 2.0 * std::sqrt(mu_hv * (mu_hv + 1.0));
  const double c2 = 2.0 * std::sqrt(mu_vh * (mu_vh + 1.0));

  Matrix g = Matrix::Zero(8, 8);
  for (int block = 0; block < 2; ++block) {
    const double sign = block == 0 ? 1.0 : -1.0;
    const int o = 4 * block;
    g(o + 0, o + 0) = d1;
    g(o + 3, o + 3) = d1;
    g(o + 1, o + 1) = d2;
    g(o + 2, o + 2) = d2;
    g(o + 0, o + 3) = g(o + 3, o + 0) = sign * sign_hv * c1;
    g(o + 1, o + 2) = g(o + 2, o + 1) = sign * sign_vh * c2;
  }
  return GaussianState::from_excess(std::move(modes), g);
}

}  // namespace

void validate(const PumpConfig& pump) {
  for (double mu : {pump.mu1, pump.mu2, pump.mu3, pump.mu4}) {
    if (!(mu >= 0.0 && mu < kMaxMeanPhotonNumber)) {
      throw std::invalid_argument("pump: mean photon numbers must lie in [0, 100)");
    }
  }
}

GaussianState source_a_covariance(double mu1, double mu2) {
  return sagnac_source(ModeRegister{"H1", "V1", "H2", "V2"}, mu1, mu2, +1.0, +1.0);
}

GaussianState source_b_covariance(double mu3, double mu4) {
  return sagnac_source(ModeRegister{"H3", "V3", "H4", "V4"}, mu3, mu4, +1.0, -1.0);
}

GaussianState combined_input(const PumpConfig& pump) {
  validate(pump);
  return direct_sum(source_a_covariance(pump.mu1, pump.mu2),
                    source_b_covariance(pump.mu3, pump.mu4));
}

double mean_photon_number(const GaussianState& state, std::string_view mode) {
  const auto x = static_cast<Eigen::Index>(state.modes().x_index(mode));
  const auto p = static_cast<Eigen::Index>(state.modes().p_index(mode));
  return (state.excess()(x, x) + state.excess()(p, p)) / 4.0;
}

}  // namespace swapsim
