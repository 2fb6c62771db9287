#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "swapsim/gaussian.hpp"

using namespace swapsim;

namespace {

GaussianState thermal(double mu) {
  return GaussianState::from_excess(ModeRegister{"t"}, Matrix::Identity(2, 2) * (2 * mu));
}

GaussianState tmsv(double mu) {
  const double c = 2 * std::sqrt(mu * (mu + 1));
  Matrix g = Matrix::Identity(4, 4) * (2 * mu + 1);
  g(0, 1) = g(1, 0) = c;
  g(2, 3) = g(3, 2) = -c;
  return GaussianState(ModeRegister{"a", "b"}, g);
}

GaussianState random_state(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GaussianState s = vacuum(ModeRegister::numbered(n));
  Matrix g = s.gamma();
  for (std::size_t k = 0; k < n; ++k) {
    g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += 0.4 * u(rng);
    g(static_cast<Eigen::Index>(n + k), static_cast<Eigen::Index>(n + k)) += 0.4 * u(rng);
  }
  s = GaussianState(s.modes(), g);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    s = apply_beamsplitter(s, 3 * u(rng), s.modes().label(k), s.modes().label(k + 1));
  }
  return s;
}

}  // namespace

TEST(Gaussian, VacuumIsIdentity) {
  EXPECT_TRUE(vacuum(1).gamma().isApprox(Matrix::Identity(2, 2)));
  EXPECT_TRUE(vacuum(4).gamma().isApprox(Matrix::Identity(8, 8)));
  EXPECT_TRUE(is_physical(vacuum(4)));
}

TEST(Gaussian, RejectsAsymmetricMatrix) {
  Matrix g = Matrix::Identity(2, 2);
  g(0, 1) = 0.3;
  EXPECT_THROW(GaussianState(ModeRegister{"a"}, g), std::invalid_argument);
}

TEST(Gaussian, UnphysicalMatrixIsDetected) {
  Matrix g = Matrix::Identity(2, 2) * 0.5;
  EXPECT_FALSE(is_physical(GaussianState(ModeRegister{"a"}, g)));
}

TEST(Gaussian, IdentityOpLeavesStateUnchanged) {
  const GaussianState s = tmsv(0.3);
  EXPECT_TRUE(apply_symplectic(s, identity_op(s.modes())).gamma().isApprox(s.gamma()));
}

TEST(Gaussian, BeamsplitterTransmittance) {
  const ModeRegister reg{"a", "b"};
  EXPECT_TRUE(beamsplitter(0.0, "a", "b", reg).matrix.isApprox(Matrix::Identity(4, 4)));
  const auto half = beamsplitter(std::numbers::pi / 4, "a", "b", reg);
  EXPECT_NEAR(half.matrix(0, 0) * half.matrix(0, 0), 0.5, 1e-15);
  const auto t9 = beamsplitter(std::acos(std::sqrt(0.9)), "a", "b", reg);
  EXPECT_NEAR(t9.matrix(0, 0) * t9.matrix(0, 0), 0.9, 1e-15);
  EXPECT_LT(symplectic_defect(t9), 1e-15);
}

TEST(Gaussian, BeamsplitterSwapsAtHalfPi) {
  GaussianState s = direct_sum(thermal(0.7), vacuum(ModeRegister{"b"}));
  s = apply_beamsplitter(s, std::numbers::pi / 2, "t", "b");
  EXPECT_NEAR(s.gamma()(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(s.gamma()(1, 1), 2.4, 1e-14);
  EXPECT_NEAR(s.gamma()(3, 3), 2.4, 1e-14);
}

TEST(Gaussian, FastBeamsplitterMatchesDenseProduct) {
  std::mt19937_64 rng(3);
  const GaussianState s = random_state(5, rng);
  const auto op = beamsplitter(0.37, "m1", "m3", s.modes());
  const GaussianState dense = apply_symplectic(s, op);
  const GaussianState fast = apply_beamsplitter(s, 0.37, "m1", "m3");
  EXPECT_LT((dense.gamma() - fast.gamma()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Gaussian, LossOnTmsvArm) {
  const double mu = 0.2, t = 0.3;
  const GaussianState s = apply_loss(tmsv(mu), "a", t);
  const Matrix g = s.gamma();
  EXPECT_NEAR(g(0, 0), 2 * t * mu + 1, 1e-14);
  EXPECT_NEAR(g(1, 1), 2 * mu + 1, 1e-14);
  EXPECT_NEAR(g(0, 1), 2 * std::sqrt(t) * std::sqrt(mu * (mu + 1)), 1e-14);
  EXPECT_TRUE(apply_loss(tmsv(mu), "a", 1.0).gamma().isApprox(tmsv(mu).gamma()));
  const Matrix z = apply_loss(tmsv(mu), "a", 0.0).gamma();
  EXPECT_NEAR(z(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(z(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(z(2, 3), 0.0, 1e-15);
}

TEST(Gaussian, VacuumOverlap) {
  EXPECT_NEAR(vacuum_overlap(vacuum(3), {"m0", "m2"}), 1.0, 1e-15);
  EXPECT_NEAR(vacuum_overlap(thermal(0.25), {"t"}), 1 / 1.25, 1e-15);
  EXPECT_NEAR(vacuum_overlap(tmsv(0.01), {"a"}), 1 / 1.01, 1e-15);
  // Tiny excitation keeps relative precision.
  EXPECT_NEAR(-std::expm1(log_vacuum_overlap(thermal(1e-9), {"t"})), 1e-9 / (1 + 1e-9), 1e-24);
}

TEST(Gaussian, ConditionOnVacuum) {
  const GaussianState prod = direct_sum(thermal(0.3), tmsv(0.1));
  const GaussianState c = condition_on_vacuum(prod, {"t"});
  EXPECT_TRUE(c.gamma().isApprox(tmsv(0.1).gamma(), 1e-14));

  // Projecting one TMSV arm on vacuum leaves vacuum on the other.
  const GaussianState r = condition_on_vacuum(tmsv(0.01), {"a"});
  EXPECT_LT((r.gamma() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);

  const GaussianState v = condition_on_vacuum(vacuum(8), {"m0", "m1", "m2", "m3", "m4", "m5", "m6"});
  EXPECT_TRUE(v.gamma().isApprox(Matrix::Identity(2, 2)));
}

TEST(Gaussian, ConditionOnLossyTmsvMatchesFockValue) {
  // After loss t on arm a, a vacuum outcome there leaves a thermal state
  // on b with mean photon number mu (1 - t) / (1 + t mu).
  const double mu = 0.01, t = 0.6;
  const GaussianState r = condition_on_vacuum(apply_loss(tmsv(mu), "a", t), {"a"});
  const double nbar = (r.gamma()(0, 0) + r.gamma()(1, 1) - 2) / 4;
  EXPECT_NEAR(nbar, mu * (1 - t) / (1 + t * mu), 1e-15);
}

TEST(Gaussian, CharacteristicFunction) {
  Vector xi = Vector::Zero(2);
  EXPECT_NEAR(characteristic_function(thermal(0.5), xi), 1.0, 1e-15);
  xi << 1.0, 0.0;
  EXPECT_NEAR(characteristic_function(thermal(0.5), xi), std::exp(-2.0 / 4), 1e-15);
  Vector v(4);
  v << 0.3, -1.2, 0.5, 2.0;
  EXPECT_NEAR(characteristic_function(vacuum(2), v), std::exp(-v.squaredNorm() / 4), 1e-15);
}

TEST(Gaussian, ExtractAndRemove) {
  const GaussianState s = direct_sum(thermal(0.3), tmsv(0.1));
  EXPECT_TRUE(extract(s, {"b", "a"}).gamma().isApprox(
      extract(tmsv(0.1), {"b", "a"}).gamma()));
  EXPECT_TRUE(remove(s, {"b", "a"}).gamma().isApprox(thermal(0.3).gamma()));
  EXPECT_TRUE(extract(s, {"t"}).gamma().isApprox(thermal(0.3).gamma()));
}

TEST(Gaussian, RandomStatesStayPhysical) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    GaussianState s = random_state(4, rng);
    s = apply_loss(s, "m2", 0.4);
    EXPECT_TRUE(is_physical(s));
    EXPECT_LT(asymmetry(s.gamma()), 1e-14);
    const GaussianState c = condition_on_vacuum(s, {"m0"});
    EXPECT_TRUE(is_physical(c));
  }
}
