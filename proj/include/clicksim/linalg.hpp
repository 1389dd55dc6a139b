#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "clicksim/error.hpp"

namespace clicksim {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using MatrixXc = ComplexMatrix<double>;
using VectorXc = ComplexVector<double>;

namespace tolerance {
/// Relative to Tr B: smallest admissible eigenvalue is -kPsd * Tr B.
inline constexpr double kPsd = 1e-10;
/// Relative to max |b_ij|.
inline constexpr double kHermitian = 1e-12;
/// Relative to Tr B, entrywise on CC* - B.
inline constexpr double kFactor = 1e-10;
}  // namespace tolerance

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const auto z = m(i, j);
      if (!std::isfinite(std::real(z)) || !std::isfinite(std::imag(z))) return false;
    }
  }
  return true;
}

/// Hermitian positive-semidefinite matrix with positive trace. Instances only
/// come out of validate_covariance, so holding one is proof of validity.
template <typename Real>
class CovarianceMatrix {
 public:
  using Matrix = ComplexMatrix<Real>;

  static CovarianceMatrix validate(const Matrix& raw);

  const Matrix& matrix() const noexcept { return b_; }
  Eigen::Index dim() const noexcept { return b_.rows(); }
  Real trace() const noexcept { return trace_; }
  Real diagonal(Eigen::Index j) const { return std::real(b_(j, j)); }
  Eigen::Matrix<Real, Eigen::Dynamic, 1> diagonal() const { return b_.diagonal().real(); }

 private:
  CovarianceMatrix(Matrix b, Real trace) : b_(std::move(b)), trace_(trace) {}

  Matrix b_;
  Real trace_;
};

/// Any square finite complex matrix; whether it generates a given B is a
/// separate question answered by verify_factor.
template <typename Real>
class FactorMatrix {
 public:
  using Matrix = ComplexMatrix<Real>;

  explicit FactorMatrix(Matrix c) : c_(std::move(c)) {
    if (c_.rows() != c_.cols()) {
      throw Error(ErrorCode::NotSquare, "factor must be square, got " + std::to_string(c_.rows()) +
                                            "x" + std::to_string(c_.cols()));
    }
    if (!all_finite(c_)) throw Error(ErrorCode::NonFinite, "factor has non-finite entries");
  }

  const Matrix& matrix() const noexcept { return c_; }
  Eigen::Index dim() const noexcept { return c_.rows(); }

  /// C C*
  Matrix covariance() const { return c_ * c_.adjoint(); }

 private:
  Matrix c_;
};

template <typename Real>
struct RealFactorPair {
  RealMatrix<Real> real_part;  // K1
  RealMatrix<Real> imag_part;  // K2

  ComplexMatrix<Real> recombine() const {
    ComplexMatrix<Real> c(real_part.rows(), real_part.cols());
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      for (Eigen::Index i = 0; i < c.rows(); ++i)
        c(i, j) = std::complex<Real>(real_part(i, j), imag_part(i, j));
    return c;
  }
};

template <typename Real>
struct FactorCheck {
  bool ok = false;
  Real residual = 0;  // max_ij |(CC*)_ij - b_ij|
};

template <typename Real>
Real hermitian_residual(const ComplexMatrix<Real>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
CovarianceMatrix<Real> CovarianceMatrix<Real>::validate(const Matrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() < 1) {
    throw Error(ErrorCode::NotSquare, "covariance must be a non-empty square grid, got " +
                                          std::to_string(raw.rows()) + "x" +
                                          std::to_string(raw.cols()));
  }
  if (!all_finite(raw)) throw Error(ErrorCode::NonFinite, "covariance has non-finite entries");

  const Real scale = raw.cwiseAbs().maxCoeff();
  const Real asym = hermitian_residual<Real>(raw);
  if (asym > Real(tolerance::kHermitian) * scale) {
    throw Error(ErrorCode::NotHermitian,
                "max |b_ij - conj(b_ji)| = " + std::to_string(asym) + " exceeds tolerance");
  }

  const Real trace = raw.diagonal().real().sum();
  if (trace < 0) throw Error(ErrorCode::NotPSD, "negative trace " + std::to_string(trace));
  if (trace == 0) throw Error(ErrorCode::ZeroTrace, "trace is zero");

  // Eigen reads only the lower triangle, which is fine after the Hermitian check.
  Eigen::SelfAdjointEigenSolver<Matrix> eig(raw, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPSD, "eigenvalue computation did not converge");
  }
  const Real min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -Real(tolerance::kPsd) * trace) {
    throw Error(ErrorCode::NotPSD, "smallest eigenvalue " + std::to_string(min_eig));
  }
  return CovarianceMatrix(raw, trace);
}

template <typename Real>
CovarianceMatrix<Real> validate_covariance(const ComplexMatrix<Real>& raw) {
  return CovarianceMatrix<Real>::validate(raw);
}

template <typename Real>
FactorCheck<Real> verify_factor(const FactorMatrix<Real>& c, const CovarianceMatrix<Real>& b) {
  if (c.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "factor is " + std::to_string(c.dim()) +
                                                  "-dimensional, covariance is " +
                                                  std::to_string(b.dim()));
  }
  FactorCheck<Real> check;
  check.residual = (c.covariance() - b.matrix()).cwiseAbs().maxCoeff();
  check.ok = check.residual <= Real(tolerance::kFactor) * b.trace();
  return check;
}

namespace detail {

// Outer-product Cholesky that tolerates zero pivots: a pivot at or below the
// PSD tolerance zeroes its column, which is exact when B is semidefinite.
template <typename Real>
ComplexMatrix<Real> semidefinite_cholesky(const ComplexMatrix<Real>& b, Real trace) {
  const Eigen::Index m = b.rows();
  const Real eps = Real(tolerance::kPsd) * trace;
  ComplexMatrix<Real> l = ComplexMatrix<Real>::Zero(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Real d = std::real(b(k, k));
    for (Eigen::Index j = 0; j < k; ++j) d -= std::norm(l(k, j));
    if (d < -eps) throw Error(ErrorCode::NotPSD, "negative pivot at column " + std::to_string(k));
    if (d <= eps) continue;
    const Real pivot = std::sqrt(d);
    l(k, k) = pivot;
    for (Eigen::Index i = k + 1; i < m; ++i) {
      std::complex<Real> s = b(i, k);
      for (Eigen::Index j = 0; j < k; ++j) s -= l(i, j) * std::conj(l(k, j));
      l(i, k) = s / pivot;
    }
  }
  return l;
}

}  // namespace detail

/// Lower-triangular C with CC* = B. Positive-definite input goes through
/// Eigen's LLT; singular input falls back to the semidefinite variant.
template <typename Real>
FactorMatrix<Real> cholesky_factor(const CovarianceMatrix<Real>& b) {
  Eigen::LLT<ComplexMatrix<Real>> llt(b.matrix());
  if (llt.info() == Eigen::Success) {
    FactorMatrix<Real> c(ComplexMatrix<Real>(llt.matrixL()));
    if (all_finite(c.matrix()) && verify_factor(c, b).ok) return c;
  }
  FactorMatrix<Real> c(detail::semidefinite_cholesky(b.matrix(), b.trace()));
  const auto check = verify_factor(c, b);
  if (!check.ok) {
    throw Error(ErrorCode::NotPSD,
                "factorization residual " + std::to_string(check.residual) + " exceeds tolerance");
  }
  return c;
}

/// C = K1 + i K2.
template <typename Real>
RealFactorPair<Real> real_decomposition(const FactorMatrix<Real>& c) {
  return {c.matrix().real(), c.matrix().imag()};
}

}  // namespace clicksim
