#include "swapsim/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <unordered_set>

#include "linalg.hpp"
#include "swapsim/errors.hpp"

namespace swapsim {

namespace {

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

void check_distinct(const ModeList& modes, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& m : modes) {
    if (!seen.insert(m).second) {
      throw std::invalid_argument(std::string(what) + ": mode '" + m + "' listed twice");
    }
  }
}

ModeList complement(const ModeRegister& reg, const ModeList& excluded) {
  std::unordered_set<std::string> drop(excluded.begin(), excluded.end());
  ModeList kept;
  for (const auto& label : reg.labels()) {
    if (!drop.contains(label)) kept.push_back(label);
  }
  return kept;
}

}  // namespace

// --- ModeRegister ------------------------------------------------------------

ModeRegister::ModeRegister(ModeList labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw std::invalid_argument("ModeRegister: duplicate label '" + labels_[i] + "'");
    }
  }
}

ModeRegister::ModeRegister(std::initializer_list<std::string> labels)
    : ModeRegister(ModeList(labels)) {}

ModeRegister ModeRegister::numbered(std::size_t n) {
  ModeList labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("m" + std::to_string(i));
  return ModeRegister(std::move(labels));
}

bool ModeRegister::contains(std::string_view label) const {
  return index_.contains(std::string(label));
}

std::size_t ModeRegister::index(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) {
    throw std::out_of_range("ModeRegister: unknown mode '" + std::string(label) + "'");
  }
  return it->second;
}

ModeRegister ModeRegister::concat(const ModeRegister& other) const {
  ModeList all = labels_;
  all.insert(all.end(), other.labels_.begin(), other.labels_.end());
  return ModeRegister(std::move(all));
}

// --- GaussianState -------------------------------------------------------------

GaussianState::GaussianState(ModeRegister modes, Matrix excess, bool)
    : modes_(std::move(modes)), excess_(std::move(excess)) {
  const auto dim = static_cast<Eigen::Index>(2 * modes_.size());
  if (modes_.size() == 0) throw std::invalid_argument("GaussianState: empty register");
  if (excess_.rows() != dim || excess_.cols() != dim) {
    throw std::invalid_argument("GaussianState: covariance must be 2N x 2N");
  }
  if (!excess_.allFinite()) throw std::invalid_argument("GaussianState: non-finite covariance");
  const double scale = std::max(1.0, excess_.cwiseAbs().maxCoeff());
  if (asymmetry(excess_) > 1e-12 * scale) {
    throw std::invalid_argument("GaussianState: covariance is not symmetric");
  }
}

GaussianState::GaussianState(ModeRegister modes, const Matrix& gamma)
    : GaussianState(std::move(modes),
                    gamma.rows() == gamma.cols()
                        ? Matrix(gamma - Matrix::Identity(gamma.rows(), gamma.cols()))
                        : gamma,
                    true) {}

GaussianState GaussianState::from_excess(ModeRegister modes, Matrix excess) {
  return GaussianState(std::move(modes), std::move(excess), true);
}

Matrix GaussianState::gamma() const {
  Matrix g = excess_;
  g.diagonal().array() += 1.0;
  return g;
}

// --- invariants ----------------------------------------------------------------

Matrix symplectic_form(std::size_t n_modes) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  Matrix omega = Matrix::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n).setIdentity();
  omega.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  return omega;
}

double asymmetry(const Matrix& a) { return (a - a.transpose()).cwiseAbs().maxCoeff(); }

double min_physical_eigenvalue(const GaussianState& state) {
  using Complex = std::complex<double>;
  const Eigen::MatrixXcd h = state.gamma().cast<Complex>() +
                             Complex(0.0, 1.0) * symplectic_form(state.mode_count()).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const GaussianState& state, double tol) {
  return min_physical_eigenvalue(state) >= -tol;
}

double symplectic_defect(const SymplecticOp& op) {
  const Matrix omega = symplectic_form(op.modes.size());
  return (op.matrix * omega * op.matrix.transpose() - omega).cwiseAbs().maxCoeff();
}

std::vector<Eigen::Index> quadrature_indices(const ModeRegister& reg, const ModeList& modes) {
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (const auto& m : modes) idx.push_back(static_cast<Eigen::Index>(reg.x_index(m)));
  for (const auto& m : modes) idx.push_back(static_cast<Eigen::Index>(reg.p_index(m)));
  return idx;
}

// --- constructors ---------------------------------------------------------------

GaussianState vacuum(std::size_t n_modes) {
  if (n_modes == 0) throw std::invalid_argument("vacuum: need at least one mode");
  return vacuum(ModeRegister::numbered(n_modes));
}

GaussianState vacuum(const ModeRegister& modes) {
  if (modes.size() == 0) throw std::invalid_argument("vacuum: need at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * modes.size());
  return GaussianState::from_excess(modes, Matrix::Zero(dim, dim));
}

SymplecticOp identity_op(const ModeRegister& modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes.size());
  return {modes, Matrix::Identity(dim, dim)};
}

SymplecticOp beamsplitter(double theta, std::string_view i, std::string_view j,
                          const ModeRegister& modes) {
  if (i == j) throw std::invalid_argument("beamsplitter: modes must differ");
  SymplecticOp op = identity_op(modes);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto xi = static_cast<Eigen::Index>(modes.x_index(i));
  const auto xj = static_cast<Eigen::Index>(modes.x_index(j));
  const auto pi = static_cast<Eigen::Index>(modes.p_index(i));
  const auto pj = static_cast<Eigen::Index>(modes.p_index(j));
  for (auto [a, b] : {std::pair{xi, xj}, std::pair{pi, pj}}) {
    op.matrix(a, a) = c;
    op.matrix(a, b) = s;
    op.matrix(b, a) = -s;
    op.matrix(b, b) = c;
  }
  return op;
}

// --- maps -------------------------------------------------------------------------

GaussianState apply_symplectic(const GaussianState& state, const SymplecticOp& op) {
  if (!(op.modes == state.modes())) {
    throw std::invalid_argument("apply_symplectic: register mismatch");
  }
  const Eigen::Index dim = state.excess().rows();
  if (op.matrix.rows() != dim || op.matrix.cols() != dim) {
    throw std::invalid_argument("apply_symplectic: dimension mismatch");
  }
  // S^T (I + X) S - I = S^T X S + (S^T S - I); the second term vanishes for
  // passive (orthogonal) maps and is added explicitly otherwise.
  Matrix x = op.matrix.transpose() * state.excess() * op.matrix;
  x += op.matrix.transpose() * op.matrix - Matrix::Identity(dim, dim);
  return GaussianState::from_excess(state.modes(), symmetrized(x));
}

GaussianState apply_beamsplitter(const GaussianState& state, double theta, std::string_view i,
                                 std::string_view j) {
  if (i == j) throw std::invalid_argument("beamsplitter: modes must differ");
  const ModeRegister& reg = state.modes();
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix g = state.excess();
  // The rotation is orthogonal, so it acts on gamma - I directly.
  // S^T g S with S = identity except the rotation block: columns first
  // (g S), then rows (S^T (g S)).
  for (auto [a, b] : {std::pair{reg.x_index(i), reg.x_index(j)},
                      std::pair{reg.p_index(i), reg.p_index(j)}}) {
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    const Vector col_a = g.col(ia);
    const Vector col_b = g.col(ib);
    g.col(ia) = c * col_a - s * col_b;
    g.col(ib) = s * col_a + c * col_b;
    const Eigen::RowVectorXd row_a = g.row(ia);
    const Eigen::RowVectorXd row_b = g.row(ib);
    g.row(ia) = c * row_a - s * row_b;
    g.row(ib) = s * row_a + c * row_b;
  }
  return GaussianState::from_excess(reg, symmetrized(g));
}

GaussianState apply_loss(const GaussianState& state, std::string_view mode, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("apply_loss: transmittance must lie in [0, 1]");
  }
  const ModeRegister& reg = state.modes();
  const double k = std::sqrt(t);
  // In excess form the (1 - t) I admixture cancels against the scaled
  // identity: X -> K X K.
  Matrix g = state.excess();
  for (std::size_t q : {reg.x_index(mode), reg.p_index(mode)}) {
    const auto iq = static_cast<Eigen::Index>(q);
    g.row(iq) *= k;
    g.col(iq) *= k;
  }
  return GaussianState::from_excess(reg, g);
}

GaussianState direct_sum(const GaussianState& a, const GaussianState& b) {
  const ModeRegister reg = a.modes().concat(b.modes());
  const auto na = static_cast<Eigen::Index>(a.mode_count());
  const auto nb = static_cast<Eigen::Index>(b.mode_count());
  const auto n = na + nb;
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  const Matrix& ga = a.excess();
  const Matrix& gb = b.excess();
  // a occupies x[0, na) and p[n, n + na); b occupies x[na, n) and p[n + na, 2n).
  g.block(0, 0, na, na) = ga.block(0, 0, na, na);
  g.block(0, n, na, na) = ga.block(0, na, na, na);
  g.block(n, 0, na, na) = ga.block(na, 0, na, na);
  g.block(n, n, na, na) = ga.block(na, na, na, na);
  g.block(na, na, nb, nb) = gb.block(0, 0, nb, nb);
  g.block(na, n + na, nb, nb) = gb.block(0, nb, nb, nb);
  g.block(n + na, na, nb, nb) = gb.block(nb, 0, nb, nb);
  g.block(n + na, n + na, nb, nb) = gb.block(nb, nb, nb, nb);
  return GaussianState::from_excess(reg, g);
}

GaussianState extract(const GaussianState& state, const ModeList& modes) {
  if (modes.empty()) throw std::invalid_argument("extract: empty mode list");
  check_distinct(modes, "extract");
  const auto idx = quadrature_indices(state.modes(), modes);
  return GaussianState::from_excess(ModeRegister(modes), state.excess()(idx, idx));
}

GaussianState remove(const GaussianState& state, const ModeList& modes) {
  check_distinct(modes, "remove");
  for (const auto& m : modes) (void)state.modes().index(m);
  const ModeList kept = complement(state.modes(), modes);
  if (kept.empty()) throw std::invalid_argument("remove: nothing left");
  return extract(state, kept);
}

double log_vacuum_overlap(const GaussianState& state, const ModeList& modes) {
  if (modes.empty()) throw std::invalid_argument("vacuum_overlap: empty mode list");
  check_distinct(modes, "vacuum_overlap");
  const auto idx = quadrature_indices(state.modes(), modes);
  // 2^k / sqrt(det(2I + X)) = det(I + X/2)^{-1/2}.
  const Matrix half = 0.5 * state.excess()(idx, idx);
  return -0.5 * detail::log_det_identity_plus(half, "vacuum_overlap");
}

double vacuum_overlap(const GaussianState& state, const ModeList& modes) {
  return std::exp(log_vacuum_overlap(state, modes));
}

GaussianState condition_on_vacuum(const GaussianState& state, const ModeList& projected) {
  if (projected.empty()) throw std::invalid_argument("condition_on_vacuum: nothing projected");
  for (const auto& m : projected) (void)state.modes().index(m);
  const ModeList kept = complement(state.modes(), projected);
  if (kept.empty()) throw std::invalid_argument("condition_on_vacuum: empty complement");
  return condition_on_vacuum(state, projected, kept);
}

GaussianState condition_on_vacuum(const GaussianState& state, const ModeList& projected,
                                  const ModeList& keep) {
  if (projected.empty()) throw std::invalid_argument("condition_on_vacuum: nothing projected");
  if (keep.empty()) throw std::invalid_argument("condition_on_vacuum: empty complement");
  check_distinct(projected, "condition_on_vacuum");
  check_distinct(keep, "condition_on_vacuum");
  for (const auto& k : keep) {
    if (std::find(projected.begin(), projected.end(), k) != projected.end()) {
      throw std::invalid_argument("condition_on_vacuum: mode '" + k + "' is both kept and projected");
    }
  }
  const auto a = quadrature_indices(state.modes(), keep);
  const auto b = quadrature_indices(state.modes(), projected);
  const Matrix& x = state.excess();
  return GaussianState::from_excess(
      ModeRegister(keep), detail::condition_excess(x(a, a), x(a, b), x(b, b), "condition_on_vacuum"));
}

double characteristic_function(const GaussianState& state, const Vector& xi) {
  if (xi.size() != state.excess().rows()) {
    throw std::invalid_argument("characteristic_function: xi has wrong length");
  }
  return std::exp(-0.25 * (xi.squaredNorm() + xi.dot(state.excess() * xi)));
}

}  // namespace swapsim
