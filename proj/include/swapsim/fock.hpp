#pragma once

// Fock-basis matrix elements of the heralded state of (H1, V1, H4, V4) from
// its characteristic function, the 6x6 partial density matrix on the
// one-photon-per-side subspace, and the fidelity to |Psi+>.

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "swapsim/network.hpp"

namespace swapsim {

using Complex = std::complex<double>;

// Occupations of (H1, V1, H4, V4).
struct FockIndex {
  std::array<int, 4> occupations{};
  bool operator==(const FockIndex&) const = default;
};

// {|0011>, |0101>, |0110>, |1001>, |1010>, |1100>}.
const std::array<FockIndex, 6>& reconstruction_basis();

// Characteristic function of |n><m| at alpha = (xi2 - i xi1) / sqrt(2):
//   m > n: sqrt(n!/m!) e^{-|a|^2/2} (-a)^{m-n} L_n^{(m-n)}(|a|^2)
//   n > m: sqrt(m!/n!) e^{-|a|^2/2} (a*)^{n-m} L_m^{(n-m)}(|a|^2)
// The sign convention differs from <m|D(a)|n> by the parity (-1)^{n-m},
// which cancels in every element between states of equal photon number.
Complex fock_char(int n, int m, double xi1, double xi2);

// <bra| rho |ket> of one zero-mean Gaussian state on four modes, by the
// closed-form Gaussian moment expansion of the overlap integral.
Complex gaussian_matrix_element(const GaussianState& state, const FockIndex& bra,
                                const FockIndex& ket);

// Weighted sum over the heralded state's components, divided by p_success.
Complex matrix_element(const HeraldedState& heralded, const FockIndex& bra, const FockIndex& ket);

using Matrix6c = Eigen::Matrix<Complex, 6, 6>;

struct PartialDensityMatrix {
  Matrix6c elements = Matrix6c::Zero();
  bool normalized = false;
  double trace_raw = 0.0;
  // 1 - trace_raw: weight of the heralded state outside the subspace.
  double truncation_deficit = 0.0;
};

// All 36 elements, Hermitized as (M + M^dagger) / 2, not renormalized.
PartialDensityMatrix partial_density_matrix(const HeraldedState& heralded);

// Divides by trace_raw; throws ModelError when trace_raw <= 0.
PartialDensityMatrix renormalize(const PartialDensityMatrix& pdm);

// <Psi+|rho|Psi+> with |Psi+> = (|0110> + |1001>) / sqrt(2); requires a
// normalized matrix (std::invalid_argument otherwise).
double bell_fidelity(const PartialDensityMatrix& pdm);

}  // namespace swapsim
