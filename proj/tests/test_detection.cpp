#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "swapsim/detection.hpp"
#include "swapsim/errors.hpp"

using namespace swapsim;

namespace {

NetworkConfig lossy_config() {
  NetworkConfig c;
  c.length_km = 10;
  c.t_mode = 0.95;
  c.nu = 1e-5;
  c.eta = {0.8, 0.7, 0.9, 0.85, 0.6, 0.6, 0.5, 0.5};
  return c;
}

}  // namespace

TEST(Detection, CorrelatorBinning) {
  // a = -1 only when D1 clicks without D3, so a uniform distribution has
  // P(a = -1) = P(b = -1) = 1/4 and <ab> = (1/2)(1/2).
  OutcomeDistribution uniform;
  uniform.p.fill(1.0 / 16);
  EXPECT_NEAR(correlator(uniform), 0.25, 1e-15);
  EXPECT_NEAR(error_rate(uniform), 0.375, 1e-15);
  OutcomeDistribution dark;
  dark.p[0] = 1.0;
  EXPECT_NEAR(correlator(dark), 1.0, 1e-15);
  EXPECT_NEAR(error_rate(dark), 0.0, 1e-15);
  // D1 with D3 also clicking is binned as +1.
  OutcomeDistribution both;
  both.p[kD1 | kD3 | kD2] = 1.0;
  EXPECT_NEAR(correlator(both), -1.0, 1e-15);
  EXPECT_NEAR(error_rate(both), 1.0, 1e-15);
}

TEST(Detection, BinnedMatchesFullDistribution) {
  const NetworkConfig c = lossy_config();
  const GaussianState pre = build_pre_bsm_state(c, {0.02, 0.01, 0.03, 0.015});
  const OutcomeDistribution d = outcome_distribution(pre, 0.4, 1.3, c);
  EXPECT_NEAR(d.total(), 1.0, 1e-9);
  for (double p : d.p) EXPECT_GE(p, -1e-9);
  const BinnedProbabilities a = binned(d);
  const BinnedProbabilities b = binned_probabilities(pre, 0.4, 1.3, c);
  EXPECT_NEAR(a.a_minus, b.a_minus, 1e-12);
  EXPECT_NEAR(a.b_minus, b.b_minus, 1e-12);
  EXPECT_NEAR(a.both_minus, b.both_minus, 1e-12);
  EXPECT_NEAR(correlator(d), correlator(b), 1e-12);
  EXPECT_NEAR(error_rate(d), error_rate(b), 1e-12);
}

TEST(Detection, ComponentAndNestedDistributionsAgree) {
  const NetworkConfig c = lossy_config();
  const PumpConfig pump{0.05, 0.04, 0.06, 0.05};
  const GaussianState pre = build_pre_bsm_state(c, pump);
  const HeraldedState h = heralded_state(pre, c.nu, c.bsm_patterns);
  const OutcomeDistribution lit = outcome_distribution(h, 0.7, 2.2, c);
  const OutcomeDistribution nest = outcome_distribution(pre, 0.7, 2.2, c);
  for (std::size_t k = 0; k < 16; ++k) EXPECT_NEAR(lit.p[k], nest.p[k], 1e-8);
}

TEST(Detection, MeasurementIdentity) {
  NetworkConfig c;
  const HeraldedState h = herald(c, {0.01, 0.01, 0.01, 0.01});
  const HeraldedState m = apply_measurement(h, 0.0, 0.0, c.eta);
  ASSERT_EQ(m.components.size(), h.components.size());
  for (std::size_t i = 0; i < h.components.size(); ++i) {
    EXPECT_LT((m.components[i].state.gamma() - h.components[i].state.gamma()).cwiseAbs().maxCoeff(),
              1e-15);
  }
}

TEST(Detection, BlindDetectorsOnlyDarkCount) {
  NetworkConfig c;
  c.nu = 1e-4;
  c.eta[0] = c.eta[1] = c.eta[2] = c.eta[3] = 0.0;
  const GaussianState pre = build_pre_bsm_state(c, {0.01, 0.01, 0.01, 0.01});
  const OutcomeDistribution d = outcome_distribution(pre, 0.3, 0.9, c);
  EXPECT_NEAR(d.p[0], std::pow(1 - c.nu, 4), 1e-12);
}

TEST(Detection, DarkCountHeraldsOnly) {
  NetworkConfig c;
  c.nu = 1e-3;
  const MeasurementAngles angles{0.1, 0.2, 0.9, 1.4, 2.5};
  const ChshReport r = chsh_value(c, {}, angles);
  for (double e : r.correlators) EXPECT_NEAR(e, r.correlators[0], 1e-12);
  EXPECT_NEAR(r.s, 2 * r.correlators[0], 1e-12);
  EXPECT_LE(r.s, 2.0);
}

TEST(Detection, KeyRate) {
  const KeyRate top = key_rate(0.0, 2 * std::numbers::sqrt2);
  EXPECT_NEAR(top.rate, 1.0, 1e-12);
  const KeyRate edge = key_rate(0.1, 2.0);
  EXPECT_NEAR(holevo_chi(2.0), 1.0, 1e-15);
  EXPECT_NEAR(edge.raw, -binary_entropy(0.1), 1e-15);
  EXPECT_EQ(edge.rate, 0.0);
  const KeyRate local = key_rate(0.1, 1.9);
  EXPECT_TRUE(std::isinf(local.raw) && local.raw < 0);
  EXPECT_EQ(local.rate, 0.0);
  EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_THROW(key_rate(1.5, 2.5), std::invalid_argument);
}

TEST(Detection, IdealSourceViolatesBell) {
  NetworkConfig c;
  const PumpConfig pump{1e-3, 1e-3, 1e-3, 1e-3};
  const MeasurementAngles a{0.0, 0.0, std::numbers::pi / 4, std::numbers::pi / 8,
                            3 * std::numbers::pi / 8};
  // Rotated setting family; the maximum over angles must beat 2.
  double best = 0.0;
  for (double shift = 0.0; shift < std::numbers::pi; shift += std::numbers::pi / 16) {
    MeasurementAngles m = a;
    m.b1 += shift;
    m.b2 += shift;
    best = std::max(best, std::abs(chsh_value(c, pump, m, false).s));
  }
  EXPECT_GT(best, 2.2);
  EXPECT_LE(best, 2 * std::numbers::sqrt2 + 1e-6);
}

TEST(Detection, HomVisibility) {
  NetworkConfig c;
  c.eta = {1, 1, 1, 1, 0.14, 0.14, 0.12, 0.12};
  const PumpConfig pump{0.016, 0.015, 0.038, 0.015};
  c.t_mode = 0.0;
  EXPECT_NEAR(hom_visibility(c, pump).visibility, 0.0, 1e-12);
  c.t_mode = 1.0;
  const double v1 = hom_visibility(c, pump).visibility;
  c.t_mode = 0.9;
  const double v9 = hom_visibility(c, pump).visibility;
  EXPECT_GT(v1, v9);
  EXPECT_LT(v1, 1.0);
}
