#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "swapsim/crosscheck.hpp"
#include "swapsim/errors.hpp"
#include "swapsim/oracle.hpp"

using namespace swapsim;
using namespace swapsim::oracle;

namespace {

Occupation occ(std::initializer_list<int> n) {
  Occupation o{};
  std::size_t i = 0;
  for (int v : n) o[i++] = static_cast<std::uint8_t>(v);
  return o;
}

}  // namespace

TEST(Oracle, TmsvCoefficients) {
  const auto c = tmsv_coefficients(1e-3, 3);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[1] / c[0], std::sqrt(1e-3 / (1 + 1e-3)), 1e-15);
  EXPECT_NEAR(c[1] / c[0], 0.0316, 1e-4);
  const FockState s = tmsv_state(0.0, 3);
  EXPECT_NEAR(s.amplitude(occ({0, 0})), 1.0, 1e-15);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
  EXPECT_THROW(tmsv_state(0.5, 2), ModelError);
}

TEST(Oracle, BeamsplitterSignConvention) {
  FockState s({"i", "j"});
  s.set_amplitude(occ({0, 0}), 0.0);
  s.set_amplitude(occ({1, 0}), 1.0);
  s.apply_bs("i", "j", std::numbers::pi / 4);
  EXPECT_NEAR(s.amplitude(occ({1, 0})), std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(s.amplitude(occ({0, 1})), std::numbers::sqrt2 / 2, 1e-15);

  FockState t({"i", "j"});
  t.set_amplitude(occ({0, 0}), 0.0);
  t.set_amplitude(occ({0, 1}), 1.0);
  t.apply_bs("i", "j", std::numbers::pi / 4);
  EXPECT_NEAR(t.amplitude(occ({1, 0})), -std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(t.amplitude(occ({0, 1})), std::numbers::sqrt2 / 2, 1e-15);
}

TEST(Oracle, HongOuMandelBunching) {
  FockState s({"i", "j"});
  s.set_amplitude(occ({0, 0}), 0.0);
  s.set_amplitude(occ({1, 1}), 1.0);
  s.apply_bs("i", "j", std::numbers::pi / 4);
  EXPECT_NEAR(s.amplitude(occ({1, 1})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude(occ({2, 0}))), std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
}

TEST(Oracle, LossAndDetection) {
  FockState s({"a"});
  EXPECT_NEAR(s.amplitude(occ({0})), 1.0, 1e-15);  // starts in vacuum
  s.set_amplitude(occ({0}), 0.0);
  s.set_amplitude(occ({1}), 1.0);
  s.apply_loss("a", 0.3, "env");
  EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
  EXPECT_NEAR(1 - off_probability(s, {"a"}, 1.0, 0.0), 0.3, 1e-15);
  EXPECT_NEAR(1 - off_probability(s, {"a"}, 0.5, 0.0), 0.15, 1e-15);
  EXPECT_NEAR(off_probability(s, {"env"}, 1.0, 0.01), 0.3 * 0.99, 1e-15);
}

TEST(Oracle, SuccessProbabilityMatchesGaussianPipeline) {
  NetworkConfig c;
  c.length_km = 10;
  c.t_mode = 0.9;
  c.nu = 1e-5;
  c.eta = {0.9, 0.8, 0.85, 0.7, 0.6, 0.6, 0.5, 0.5};
  const PumpConfig pump{1e-3, 2e-3, 1.5e-3, 1e-3};
  const NetworkOracle orc(c, pump);
  EXPECT_LT(orc.leakage(), 1e-6);
  const double g = success_probability(build_pre_bsm_state(c, pump), c.nu, c.bsm_patterns);
  EXPECT_NEAR(orc.p_success() / g, 1.0, 1e-4);
}

TEST(Oracle, RandomCaseCrosscheck) {
  CrosscheckCase cc = random_crosscheck_case(3, 0, 1e-3);
  run_crosscheck(cc, {});
  EXPECT_LT(cc.rel_p_success, 1e-3);
  EXPECT_LT(cc.rel_outcomes, 1e-3);
  EXPECT_LT(cc.rel_pdm_diagonal, 1e-3);
}
