#pragma once

// Zero-mean multimode Gaussian states in the covariance-matrix picture.
//
// Conventions used throughout the library:
//  * quadratures are ordered xxpp: (x_1..x_N, p_1..p_N), with modes in
//    register order;
//  * the vacuum covariance matrix is the identity;
//  * the characteristic function is exp(-xi^T gamma xi / 4);
//  * a symplectic S acts as gamma -> S^T gamma S.
//
// States store the excess covariance gamma - I rather than gamma itself, so
// weakly excited states (mean photon numbers down to ~1e-6) keep full
// relative precision through losses, beamsplitters and conditioning.

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace swapsim {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ModeList = std::vector<std::string>;

class ModeRegister {
 public:
  ModeRegister() = default;
  explicit ModeRegister(ModeList labels);
  ModeRegister(std::initializer_list<std::string> labels);

  // Register with labels "m0", "m1", ...
  static ModeRegister numbered(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const ModeList& labels() const { return labels_; }
  const std::string& label(std::size_t pos) const { return labels_.at(pos); }
  bool contains(std::string_view label) const;

  // Position of a mode in the register; throws std::out_of_range.
  std::size_t index(std::string_view label) const;
  std::size_t x_index(std::string_view label) const { return index(label); }
  std::size_t p_index(std::string_view label) const { return size() + index(label); }

  ModeRegister concat(const ModeRegister& other) const;

  bool operator==(const ModeRegister& other) const { return labels_ == other.labels_; }

 private:
  ModeList labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

class GaussianState {
 public:
  // Validates shape and symmetry; physicality is checked separately by
  // is_physical() because it needs an eigendecomposition.
  GaussianState(ModeRegister modes, const Matrix& gamma);

  static GaussianState from_excess(ModeRegister modes, Matrix excess);

  const ModeRegister& modes() const { return modes_; }
  std::size_t mode_count() const { return modes_.size(); }
  Matrix gamma() const;
  // gamma - I.
  const Matrix& excess() const { return excess_; }

 private:
  GaussianState(ModeRegister modes, Matrix excess, bool);

  ModeRegister modes_;
  Matrix excess_;
};

struct SymplecticOp {
  ModeRegister modes;
  Matrix matrix;
};

// xxpp symplectic form [[0, I], [-I, 0]].
Matrix symplectic_form(std::size_t n_modes);

// Largest |A - A^T| entry.
double asymmetry(const Matrix& a);

// Smallest eigenvalue of the Hermitian matrix gamma + i*Omega.
double min_physical_eigenvalue(const GaussianState& state);
bool is_physical(const GaussianState& state, double tol = 1e-9);

// Largest |S Omega S^T - Omega| entry.
double symplectic_defect(const SymplecticOp& op);

// Quadrature positions (all x's, then all p's) of the listed modes.
std::vector<Eigen::Index> quadrature_indices(const ModeRegister& reg, const ModeList& modes);

GaussianState vacuum(std::size_t n_modes);
GaussianState vacuum(const ModeRegister& modes);

SymplecticOp identity_op(const ModeRegister& modes);

// Real beamsplitter with transmittance cos^2(theta): the rotation
// [[cos, sin], [-sin, cos]] placed on (x_i, x_j) and on (p_i, p_j).
SymplecticOp beamsplitter(double theta, std::string_view i, std::string_view j,
                          const ModeRegister& modes);

// gamma' = S^T gamma S.
GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op);

// Same map as apply_symplectic(state, beamsplitter(...)), done as a
// rank-4 row/column rotation instead of a dense product.
GaussianState apply_beamsplitter(const GaussianState& state, double theta, std::string_view i,
                                 std::string_view j);

// Pure loss with transmittance t on one mode: K^T gamma K + (1 - t) I on
// that mode, with K = sqrt(t) I.
GaussianState apply_loss(const GaussianState& state, std::string_view mode, double t);

// Block direct sum; registers must be disjoint.
GaussianState direct_sum(const GaussianState& a, const GaussianState& b);

// Marginal on the listed modes, in the listed order ("extract rows and
// columns of the listed modes").
GaussianState extract(const GaussianState& state, const ModeList& modes);

// Marginal on every mode except the listed ones ("delete rows and columns
// of the listed modes"); remaining modes keep register order.
GaussianState remove(const GaussianState& state, const ModeList& modes);

// Tr[rho |0><0|^{(x)k} (x) I_rest] = 2^k / sqrt(det(gamma_sub + I)).
double vacuum_overlap(const GaussianState& state, const ModeList& modes);

// log of vacuum_overlap, accurate to full relative precision when the
// overlap is close to one (use -expm1() of it for the click probability).
double log_vacuum_overlap(const GaussianState& state, const ModeList& modes);

// Normalized state of the complement after a vacuum outcome on `projected`:
// gamma_AA - gamma_AB (gamma_BB + I)^{-1} gamma_AB^T.
GaussianState condition_on_vacuum(const GaussianState& state, const ModeList& projected);

// As above, but only the `keep` rows/columns of the conditional state are
// formed (equivalent to extract(condition_on_vacuum(state, projected), keep)).
GaussianState condition_on_vacuum(const GaussianState& state, const ModeList& projected,
                                  const ModeList& keep);

// exp(-xi^T gamma xi / 4).
double characteristic_function(const GaussianState& state, const Vector& xi);

}  // namespace swapsim
