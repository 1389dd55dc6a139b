#pragma once

#include <string>

#include "clicksim/linalg.hpp"

// Closed-form predictions the simulated click statistics are checked against.
// The measurement basis is the coordinate basis of the channels.

namespace clicksim {

template <typename Real>
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix<Real> rho) : rho_(std::move(rho)) {}

  const ComplexMatrix<Real>& matrix() const noexcept { return rho_; }
  Eigen::Index dim() const noexcept { return rho_.rows(); }

 private:
  ComplexMatrix<Real> rho_;
};

/// rho = B / Tr B
template <typename Real>
DensityMatrix<Real> density_from_covariance(const CovarianceMatrix<Real>& b) {
  if (!(b.trace() > 0)) throw Error(ErrorCode::ZeroTrace, "covariance trace must be positive");
  return DensityMatrix<Real>(b.matrix() / b.trace());
}

template <typename Real>
Real born_probability(const DensityMatrix<Real>& rho, Eigen::Index channel) {
  if (channel < 0 || channel >= rho.dim()) {
    throw Error(ErrorCode::IndexOutOfRange, "channel " + std::to_string(channel) +
                                                " outside [0, " + std::to_string(rho.dim()) + ")");
  }
  return std::real(rho.matrix()(channel, channel));
}

template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> born_probabilities(const DensityMatrix<Real>& rho) {
  return rho.matrix().diagonal().real();
}

/// Mean first time |phi|^2 reaches threshold for a complex Wiener process of
/// power sigma2 started at zero: threshold / sigma2.
template <typename Real>
Real expected_hitting_time(Real sigma2, Real threshold) {
  if (!(sigma2 > 0) || !(threshold > 0)) {
    throw Error(ErrorCode::InvalidArgument, "power and threshold must be positive");
  }
  return threshold / sigma2;
}

/// Renewal estimate of the click count over a horizon: power * horizon / threshold.
template <typename Real>
Real expected_clicks(Real power, Real horizon, Real threshold) {
  if (!(power > 0) || !(horizon > 0) || !(threshold > 0)) {
    throw Error(ErrorCode::InvalidArgument, "power, horizon and threshold must be positive");
  }
  return power * horizon / threshold;
}

}  // namespace clicksim
