#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "swapsim/errors.hpp"
#include "swapsim/fock.hpp"

using namespace swapsim;

namespace {

// Probabilists' Gauss-Hermite rule (weight exp(-z^2/2) / sqrt(2 pi)) by
// Golub-Welsch.
struct Rule {
  std::vector<double> nodes, weights;
};

Rule gauss_hermite(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Rule r;
  for (int k = 0; k < n; ++k) {
    r.nodes.push_back(es.eigenvalues()(k));
    r.weights.push_back(es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
  }
  return r;
}

// <bra|rho|ket> = (2 pi)^-4 int chi_rho(xi) chi_{|ket><bra|}(-xi) d^8 xi.
// The Gaussian factor exp(-xi^T (gamma + I) xi / 4) is whitened; the rest
// is a polynomial of degree <= 8, integrated exactly by the 5-node tensor
// rule (exact through degree 9 per variable).
Complex quadrature_element(const GaussianState& s, const FockIndex& bra, const FockIndex& ket) {
  const Matrix a = (s.gamma() + Matrix::Identity(8, 8)) / 2.0;
  const Eigen::LLT<Matrix> llt(a);
  const Matrix l = llt.matrixL();
  const Matrix map = l.transpose().inverse();  // xi = map * z
  const double norm = 1.0 / std::sqrt(a.determinant());
  const Rule rule = gauss_hermite(5);
  std::array<int, 8> k{};
  Complex total = 0.0;
  Eigen::Matrix<double, 8, 1> z;
  while (true) {
    double w = 1.0;
    for (int d = 0; d < 8; ++d) {
      z(d) = rule.nodes[static_cast<std::size_t>(k[static_cast<std::size_t>(d)])];
      w *= rule.weights[static_cast<std::size_t>(k[static_cast<std::size_t>(d)])];
    }
    const Eigen::Matrix<double, 8, 1> xi = -(map * z);
    Complex f = std::exp(xi.squaredNorm() / 4.0);
    for (int m = 0; m < 4; ++m) {
      f *= fock_char(ket.occupations[static_cast<std::size_t>(m)],
                     bra.occupations[static_cast<std::size_t>(m)], xi(m), xi(4 + m));
    }
    total += w * f;
    int d = 0;
    while (d < 8 && ++k[static_cast<std::size_t>(d)] == 5) k[static_cast<std::size_t>(d++)] = 0;
    if (d == 8) break;
  }
  return norm * total;
}

GaussianState random_four_mode(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GaussianState s = source_a_covariance(0.3 * u(rng), 0.3 * u(rng));
  for (const char* m : {"H1", "V1", "H2", "V2"}) s = apply_loss(s, m, 0.3 + 0.7 * u(rng));
  s = apply_beamsplitter(s, 3 * u(rng), "H1", "H2");
  s = apply_beamsplitter(s, 3 * u(rng), "V1", "H2");
  s = apply_beamsplitter(s, 3 * u(rng), "H1", "V2");
  return s;
}

FockIndex idx(int a, int b, int c, int d) { return FockIndex{{a, b, c, d}}; }

}  // namespace

TEST(Fock, CharacteristicFunctionExamples) {
  // alpha = (xi2 - i xi1) / sqrt(2); with xi1 = 0, alpha is real.
  const double xi2 = 0.8;
  const double al = xi2 / std::numbers::sqrt2;
  EXPECT_NEAR(std::abs(fock_char(0, 0, 0.0, xi2) - std::exp(-al * al / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fock_char(1, 1, 0.0, xi2) - std::exp(-al * al / 2) * (1 - al * al)), 0.0,
              1e-15);
  EXPECT_NEAR(std::abs(fock_char(0, 1, 0.0, xi2) + al * std::exp(-al * al / 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(fock_char(2, 2, 0.0, 0.0) - 1.0), 0.0, 1e-15);
  // chi_{|n><m|}(xi) and chi_{|m><n|}(-xi) are complex conjugates.
  for (auto [n, m] : {std::pair{0, 1}, {1, 2}, {0, 2}, {2, 1}}) {
    const Complex a = fock_char(n, m, 0.3, -0.7);
    const Complex b = fock_char(m, n, -0.3, 0.7);
    EXPECT_NEAR(std::abs(a - std::conj(b)), 0.0, 1e-15);
  }
}

TEST(Fock, QuadratureReproducesThermalPopulations) {
  // Independent thermal modes: <n|rho|n> = mu^n / (1 + mu)^(n + 1).
  const std::array<double, 4> mu{0.1, 0.25, 0.05, 0.4};
  Matrix g = Matrix::Identity(8, 8);
  for (int k = 0; k < 4; ++k) g(k, k) = g(4 + k, 4 + k) = 2 * mu[static_cast<std::size_t>(k)] + 1;
  const GaussianState s(ModeRegister{"H1", "V1", "H4", "V4"}, g);
  for (const FockIndex& f : {idx(0, 0, 0, 0), idx(0, 1, 1, 0), idx(1, 0, 0, 1), idx(1, 1, 0, 0)}) {
    double expect = 1.0;
    for (int k = 0; k < 4; ++k) {
      const double m = mu[static_cast<std::size_t>(k)];
      expect *= std::pow(m, f.occupations[static_cast<std::size_t>(k)]) /
                std::pow(1 + m, f.occupations[static_cast<std::size_t>(k)] + 1);
    }
    EXPECT_NEAR(quadrature_element(s, f, f).real(), expect, 1e-12);
    EXPECT_NEAR(gaussian_matrix_element(s, f, f).real(), expect, 1e-14);
    EXPECT_NEAR(gaussian_matrix_element(s, f, f).imag(), 0.0, 1e-15);
  }
}

TEST(Fock, ClosedFormMatchesQuadrature) {
  std::mt19937_64 rng(21);
  const auto& basis = reconstruction_basis();
  for (int trial = 0; trial < 10; ++trial) {
    const GaussianState s = random_four_mode(rng);
    const std::vector<std::pair<FockIndex, FockIndex>> pairs{
        {basis[2], basis[3]}, {basis[0], basis[5]}, {basis[1], basis[4]},
        {basis[trial % 6], basis[trial % 6]}, {idx(0, 0, 0, 0), idx(1, 1, 0, 0)}};
    for (const auto& [bra, ket] : pairs) {
      const Complex q = quadrature_element(s, bra, ket);
      const Complex c = gaussian_matrix_element(s, bra, ket);
      EXPECT_NEAR(std::abs(q - c), 0.0, 1e-8) << "trial " << trial;
    }
  }
}

TEST(Fock, BellFidelityReferenceStates) {
  PartialDensityMatrix psi;
  psi.normalized = true;
  psi.elements(2, 2) = psi.elements(3, 3) = psi.elements(2, 3) = psi.elements(3, 2) = 0.5;
  EXPECT_NEAR(bell_fidelity(psi), 1.0, 1e-15);
  PartialDensityMatrix mixed;
  mixed.normalized = true;
  mixed.elements = Matrix6c::Identity() / 6.0;
  EXPECT_NEAR(bell_fidelity(mixed), 1.0 / 6.0, 1e-15);
  PartialDensityMatrix raw;
  EXPECT_THROW(bell_fidelity(raw), std::invalid_argument);
}

TEST(Fock, RenormalizeRejectsEmptyMatrix) {
  PartialDensityMatrix zero;
  EXPECT_THROW(renormalize(zero), ModelError);
}

TEST(Fock, HeraldedMatrixIsHermitianAndPositive) {
  NetworkConfig c;
  c.length_km = 20;
  c.t_mode = 0.9;
  c.nu = 1e-6;
  c.bsm_patterns = BsmPatterns::kSingle;
  const HeraldedState h = herald(c, {0.01, 0.012, 0.02, 0.01});
  const PartialDensityMatrix raw = partial_density_matrix(h);
  EXPECT_GT(raw.trace_raw, 0.0);
  EXPECT_LT(raw.trace_raw, 1.0);
  EXPECT_NEAR(raw.truncation_deficit, 1.0 - raw.trace_raw, 1e-15);
  EXPECT_LT((raw.elements - raw.elements.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  const PartialDensityMatrix n = renormalize(raw);
  EXPECT_NEAR(n.elements.trace().real(), 1.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix6c> es(n.elements);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-9);
  const double f = bell_fidelity(n);
  EXPECT_GT(f, 0.3);
  EXPECT_LE(f, 0.5);
  // Elements match the direct weighted sum.
  const auto& basis = reconstruction_basis();
  EXPECT_NEAR(std::abs(matrix_element(h, basis[2], basis[3]) - raw.elements(2, 3)), 0.0, 1e-14);
}

TEST(Fock, IdealSwapIncludesDoublePairs) {
  // With equal mu, a double pair from one source heralds as often as one
  // pair from each, giving weight 1/4 on each of |0011>, |0110>, |1001>,
  // |1100>; the fidelity to |Psi+> is 1/2 for either pattern setting.
  NetworkConfig c;
  const PumpConfig pump{1e-3, 1e-3, 1e-3, 1e-3};
  for (BsmPatterns pat : {BsmPatterns::kSingle, BsmPatterns::kBoth}) {
    c.bsm_patterns = pat;
    const PartialDensityMatrix n = renormalize(partial_density_matrix(herald(c, pump)));
    for (int i : {0, 2, 3, 5}) EXPECT_NEAR(n.elements(i, i).real(), 0.25, 2e-3);
    EXPECT_NEAR(n.elements(2, 3).real(), 0.25, 2e-3);
    EXPECT_NEAR(bell_fidelity(n), 0.5, 2e-3);
  }
}
