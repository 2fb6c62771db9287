#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "swapsim/errors.hpp"

namespace swapsim::detail {

namespace {
constexpr double kMinReciprocalCondition = 1e-12;
}

double log_det_identity_plus(Eigen::MatrixXd y, const char* what) {
  const Eigen::Index n = y.rows();
  double acc = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double d = y(k, k);
    const double pivot = 1.0 + d;
    if (!(pivot > 0.0)) {
      throw ModelError(std::string(what) + ": covariance block is not positive definite");
    }
    lo = std::min(lo, pivot);
    hi = std::max(hi, pivot);
    acc += std::log1p(d);
    const Eigen::Index m = n - k - 1;
    if (m > 0) {
      const Eigen::VectorXd col = y.col(k).tail(m);
      y.bottomRightCorner(m, m).noalias() -= col * (col.transpose() / pivot);
    }
  }
  if (lo < kMinReciprocalCondition * hi) {
    throw ModelError(std::string(what) + ": covariance block is ill-conditioned");
  }
  return acc;
}

Eigen::LLT<Eigen::MatrixXd> factor_two_plus(const Eigen::MatrixXd& x, const char* what) {
  Eigen::MatrixXd shifted = x;
  shifted.diagonal().array() += 2.0;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw ModelError(std::string(what) + ": gamma_sub + I is not positive definite");
  }
  if (llt.rcond() < kMinReciprocalCondition) {
    throw ModelError(std::string(what) + ": gamma_sub + I is ill-conditioned");
  }
  return llt;
}

Eigen::MatrixXd condition_excess(const Eigen::MatrixXd& x_aa, const Eigen::MatrixXd& x_ab,
                                 const Eigen::MatrixXd& x_bb, const char* what) {
  const auto llt = factor_two_plus(x_bb, what);
  Eigen::MatrixXd out = x_aa - x_ab * llt.solve(x_ab.transpose());
  return 0.5 * (out + out.transpose());
}

}  // namespace swapsim::detail
