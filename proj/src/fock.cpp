#include "swapsim/fock.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "swapsim/errors.hpp"

namespace swapsim {

namespace {

// Polynomial in the 8 quadrature variables with complex coefficients; each
// term is a coefficient and a sorted list of variable indices.
struct Term {
  Complex coeff;
  std::vector<int> vars;
};
using Poly = std::vector<Term>;

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  out.reserve(a.size() * b.size());
  for (const auto& s : a) {
    for (const auto& t : b) {
      Term r{s.coeff * t.coeff, s.vars};
      r.vars.insert(r.vars.end(), t.vars.begin(), t.vars.end());
      out.push_back(std::move(r));
    }
  }
  return out;
}

// fock_char(n, m, -xi) without the Gaussian factor, as a polynomial in
// (x, p) = (xi1, xi2) of one mode. With a = (p - i x) / sqrt(2) at xi,
// evaluating at -xi flips a.
Poly mode_polynomial(int n, int m, int x, int p) {
  const double r = 1.0 / std::numbers::sqrt2;
  const Complex i(0.0, 1.0);
  if (n == 0 && m == 0) return {{1.0, {}}};
  if (n == 1 && m == 1) return {{1.0, {}}, {-0.5, {x, x}}, {-0.5, {p, p}}};
  if (n == 0 && m == 1) {
    // -a(-xi) = a(xi) = (p - i x) / sqrt(2)
    return {{r, {p}}, {-i * r, {x}}};
  }
  if (n == 1 && m == 0) {
    // a*(-xi) = -(p + i x) / sqrt(2)
    return {{-r, {p}}, {-i * r, {x}}};
  }
  throw std::invalid_argument("fock: occupations above one are not supported");
}

// E[prod xi_v] for a zero-mean Gaussian with covariance `cov` (Isserlis).
double moment(std::vector<int> vars, const Matrix& cov) {
  if (vars.empty()) return 1.0;
  if (vars.size() % 2 == 1) return 0.0;
  const int first = vars.front();
  double sum = 0.0;
  for (std::size_t k = 1; k < vars.size(); ++k) {
    const double c = cov(first, vars[k]);
    if (c == 0.0) continue;
    std::vector<int> rest;
    rest.reserve(vars.size() - 2);
    for (std::size_t j = 1; j < vars.size(); ++j) {
      if (j != k) rest.push_back(vars[j]);
    }
    sum += c * moment(std::move(rest), cov);
  }
  return sum;
}

void check_index(const FockIndex& f) {
  for (int o : f.occupations) {
    if (o < 0 || o > 1) throw std::invalid_argument("fock: occupations must be 0 or 1");
  }
}

}  // namespace

const std::array<FockIndex, 6>& reconstruction_basis() {
  static const std::array<FockIndex, 6> basis{{{{0, 0, 1, 1}},
                                               {{0, 1, 0, 1}},
                                               {{0, 1, 1, 0}},
                                               {{1, 0, 0, 1}},
                                               {{1, 0, 1, 0}},
                                               {{1, 1, 0, 0}}}};
  return basis;
}

Complex fock_char(int n, int m, double xi1, double xi2) {
  if (n < 0 || m < 0) throw std::invalid_argument("fock_char: occupations must be >= 0");
  const Complex a = Complex(xi2, -xi1) / std::numbers::sqrt2;
  const double a2 = std::norm(a);
  auto laguerre = [a2](int l, int k) {
    double sum = 0.0;
    double fact = 1.0;
    for (int i = 0; i <= l; ++i) {
      if (i > 0) fact *= i;
      sum += ((i % 2) ? -1.0 : 1.0) * std::tgamma(l + k + 1.0) /
             (std::tgamma(l - i + 1.0) * std::tgamma(k + i + 1.0)) * std::pow(a2, i) / fact;
    }
    return sum;
  };
  const double g = std::exp(-a2 / 2.0);
  if (m >= n) {
    return std::sqrt(std::tgamma(n + 1.0) / std::tgamma(m + 1.0)) * g * std::pow(-a, m - n) *
           laguerre(n, m - n);
  }
  return std::sqrt(std::tgamma(m + 1.0) / std::tgamma(n + 1.0)) * g * std::pow(std::conj(a), n - m) *
         laguerre(m, n - m);
}

Complex gaussian_matrix_element(const GaussianState& state, const FockIndex& bra,
                                const FockIndex& ket) {
  check_index(bra);
  check_index(ket);
  if (state.mode_count() != 4) {
    throw std::invalid_argument("fock: matrix elements need a four-mode state");
  }
  // (2 pi)^-4 int chi_rho(xi) chi_{|ket><bra|}(-xi) dxi. Both factors carry
  // exp(-xi^T xi / 4) beyond the excess, so the kernel is
  // exp(-xi^T (2I + X) xi / 4): a Gaussian of covariance 2 (2I + X)^{-1}
  // whose normalization equals the four-mode vacuum overlap.
  const Matrix& x = state.excess();
  const auto llt = detail::factor_two_plus(x, "fock matrix element");
  const Matrix cov = 2.0 * llt.solve(Matrix::Identity(8, 8));
  const double norm = std::exp(-0.5 * detail::log_det_identity_plus(0.5 * x, "fock matrix element"));

  Poly poly{{1.0, {}}};
  for (int k = 0; k < 4; ++k) {
    poly = multiply(poly, mode_polynomial(ket.occupations[k], bra.occupations[k], k, 4 + k));
  }
  Complex sum = 0.0;
  for (const auto& t : poly) sum += t.coeff * moment(t.vars, cov);
  return norm * sum;
}

Complex matrix_element(const HeraldedState& heralded, const FockIndex& bra, const FockIndex& ket) {
  if (!(heralded.p_success > 0.0)) throw ModelError("fock: heralded state has no weight");
  Complex sum = 0.0;
  for (const auto& c : heralded.components) {
    sum += c.weight * gaussian_matrix_element(c.state, bra, ket);
  }
  return sum / heralded.p_success;
}

PartialDensityMatrix partial_density_matrix(const HeraldedState& heralded) {
  const auto& basis = reconstruction_basis();
  Matrix6c m;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) m(r, c) = matrix_element(heralded, basis[r], basis[c]);
  }
  PartialDensityMatrix out;
  out.elements = (m + m.adjoint()) / 2.0;
  out.trace_raw = out.elements.trace().real();
  out.truncation_deficit = 1.0 - out.trace_raw;
  return out;
}

PartialDensityMatrix renormalize(const PartialDensityMatrix& pdm) {
  if (!(pdm.trace_raw > 0.0)) {
    throw ModelError("fock: partial density matrix has non-positive trace");
  }
  PartialDensityMatrix out = pdm;
  out.elements = pdm.elements / pdm.trace_raw;
  out.normalized = true;
  return out;
}

double bell_fidelity(const PartialDensityMatrix& pdm) {
  if (!pdm.normalized) throw std::invalid_argument("bell_fidelity: matrix is not normalized");
  // |0110> and |1001> sit at positions 2 and 3.
  const auto& e = pdm.elements;
  return 0.5 * (e(2, 2) + e(3, 3) + e(2, 3) + e(3, 2)).real();
}

}  // namespace swapsim
