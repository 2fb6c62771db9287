#pragma once

// Small dense helpers shared by the Gaussian and click-probability code.

#include <Eigen/Dense>

namespace swapsim::detail {

// log det(I + Y) for symmetric Y with I + Y positive definite, by symmetric
// elimination that never forms the diagonal 1 + Y_kk explicitly outside
// log1p. Relative accuracy is kept when Y is tiny. Throws ModelError if a
// pivot is non-positive or the pivot spread exceeds 1e12.
double log_det_identity_plus(Eigen::MatrixXd y, const char* what);

// Cholesky of 2I + X with positive-definiteness and rcond guards.
Eigen::LLT<Eigen::MatrixXd> factor_two_plus(const Eigen::MatrixXd& x, const char* what);

// Schur complement in excess form: X_AA - X_AB (2I + X_BB)^{-1} X_BA.
Eigen::MatrixXd condition_excess(const Eigen::MatrixXd& x_aa, const Eigen::MatrixXd& x_ab,
                                 const Eigen::MatrixXd& x_bb, const char* what);

}  // namespace swapsim::detail
