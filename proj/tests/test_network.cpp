#include <gtest/gtest.h>

#include <cmath>

#include "swapsim/errors.hpp"
#include "swapsim/network.hpp"

using namespace swapsim;

TEST(Network, ChannelTransmittances) {
  const auto ch0 = derive_channel_transmittances(Scheme::kCenter, 0.0);
  EXPECT_DOUBLE_EQ(ch0.eta_ah, 1.0);
  EXPECT_DOUBLE_EQ(ch0.eta_bv, 1.0);
  const auto ch = derive_channel_transmittances(Scheme::kCenter, 50.0);
  for (double e : {ch.eta_ah, ch.eta_av, ch.eta_bh, ch.eta_bv}) {
    EXPECT_NEAR(e, std::sqrt(0.1), 1e-15);
  }
  const auto sh = derive_channel_transmittances(Scheme::kSide, 50.0);
  EXPECT_NEAR(sh.eta_ah, 0.1, 1e-15);
  EXPECT_NEAR(sh.eta_av, 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(sh.eta_bh, 1.0);
  EXPECT_DOUBLE_EQ(sh.eta_bv, 1.0);
  EXPECT_NEAR(total_transmittance(100.0), 0.01, 1e-16);
}

TEST(Network, LossyHbsPortAndOverride) {
  NetworkConfig c;
  c.length_km = 50;
  c.hbs_extra_loss = 0.27;
  c.hbs_lossy_mode = "H3";
  auto e = effective_channels(c);
  EXPECT_NEAR(e.eta_bh, 0.27 * std::sqrt(0.1), 1e-15);
  EXPECT_NEAR(e.eta_ah, std::sqrt(0.1), 1e-15);
  c.hbs_lossy_mode = "V2";
  e = effective_channels(c);
  EXPECT_NEAR(e.eta_av, 0.27 * std::sqrt(0.1), 1e-15);
  c.channel_override = ChannelTransmittances{0.5, 0.6, 0.7, 0.8};
  e = effective_channels(c);
  EXPECT_NEAR(e.eta_ah, 0.5, 1e-15);
  EXPECT_NEAR(e.eta_av, 0.6 * 0.27, 1e-15);
  c.hbs_lossy_mode = "X9";
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Network, ValidateRanges) {
  NetworkConfig c;
  c.eta[3] = 1.2;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = NetworkConfig{};
  c.nu = 1.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = NetworkConfig{};
  c.length_km = -1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = NetworkConfig{};
  c.t_mode = -0.1;
  EXPECT_THROW(validate(c), std::invalid_argument);
}

TEST(Network, ZeroPumpGivesVacuum) {
  NetworkConfig c;
  c.length_km = 30;
  c.t_mode = 0.8;
  c.eta = {0.5, 0.5, 0.5, 0.5, 0.3, 0.3, 0.2, 0.2};
  const GaussianState s = build_pre_bsm_state(c, {});
  EXPECT_EQ(s.mode_count(), 16u);
  EXPECT_LT((s.gamma() - Matrix::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Network, AncillasStayVacuumAtFullOverlap) {
  NetworkConfig c;
  c.t_mode = 1.0;
  const GaussianState s = build_pre_bsm_state(c, {0.01, 0.02, 0.03, 0.04});
  const auto& r = s.modes();
  for (const char* a : {"H2a", "H3a", "V2a", "V3a", "H2b", "H3b", "V2b", "V3b"}) {
    const auto idx = quadrature_indices(r, {a});
    for (auto i : idx) {
      for (Eigen::Index j = 0; j < 32; ++j) {
        EXPECT_NEAR(s.excess()(i, j), 0.0, 1e-15) << a;
      }
    }
  }
  EXPECT_TRUE(is_physical(s));
}

TEST(Network, HeraldProbabilityOfVacuum) {
  NetworkConfig c;
  const GaussianState s = build_pre_bsm_state(c, {});
  const auto p = herald_probability(s, 0.0, pattern_d5v_d6h());
  EXPECT_NEAR(p.p1, 1.0, 1e-15);
  EXPECT_NEAR(p.p2, 1.0, 1e-15);
  EXPECT_NEAR(p.p3, 1.0, 1e-15);
  EXPECT_NEAR(p.p, 0.0, 1e-15);
  const double nu = 1e-3;
  const auto q = herald_probability(s, nu, pattern_d5v_d6h());
  EXPECT_NEAR(q.p, std::pow(1 - std::pow(1 - nu, 3), 2), 1e-18);
  EXPECT_NEAR(success_probability(s, nu, BsmPatterns::kBoth), 2 * q.p, 1e-18);
  EXPECT_THROW(heralded_state(s, 0.0, BsmPatterns::kBoth), NeverHeraldsError);
}

TEST(Network, HeraldedStateWeightsSumToSuccess) {
  NetworkConfig c;
  c.length_km = 20;
  c.nu = 1e-5;
  c.t_mode = 0.9;
  const GaussianState s = build_pre_bsm_state(c, {0.01, 0.02, 0.015, 0.01});
  const HeraldedState h = heralded_state(s, c.nu, c.bsm_patterns);
  double sum = 0.0;
  for (const auto& comp : h.components) sum += comp.weight;
  EXPECT_NEAR(sum / h.p_success, 1.0, 1e-9);
  EXPECT_EQ(h.per_pattern.size(), 2u);
  for (const auto& comp : h.components) {
    EXPECT_EQ(comp.state.mode_count(), 4u);
    EXPECT_TRUE(is_physical(comp.state));
  }
}

TEST(Network, PatternsAreSymmetricForBalancedPump) {
  NetworkConfig c;
  const GaussianState s = build_pre_bsm_state(c, {0.01, 0.01, 0.01, 0.01});
  const double a = herald_probability(s, 0.0, pattern_d5v_d6h()).p;
  const double b = herald_probability(s, 0.0, pattern_d5h_d6v()).p;
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(a / b, 1.0, 1e-9);
}
