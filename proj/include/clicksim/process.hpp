#pragma once

#include <cstdint>

#include "clicksim/linalg.hpp"
#include "clicksim/rng.hpp"

namespace clicksim {

struct StepParams {
  double dt = 1e-3;
  Eigen::Index dim = 1;

  void check() const;
};

/// Current value of the field inside the detectors.
struct FieldState {
  VectorXc phi;
  std::uint64_t step_index = 0;

  static FieldState zero(Eigen::Index dim) { return {VectorXc::Zero(dim), 0}; }
};

/// Increment of the standard complex Wiener process over dt: each component
/// is (g1 + i g2) sqrt(dt/2), so E|xi_j|^2 = dt and components are independent.
VectorXc standard_complex_increment(RngStream& rng, Eigen::Index dim, double dt);

/// In-place version of the above; `out` must already have the right size.
void fill_standard_increment(RngStream& rng, double dt, Eigen::Ref<VectorXc> out);

/// phi' = phi + C xi. Exact for the driftless constant-coefficient process.
FieldState advance(const FieldState& state, const FactorMatrix<double>& c, RngStream& rng,
                   double dt);

/// Reusable stepping kernel for long trajectories. Holds C sqrt(dt/2) and a
/// scratch buffer, so advancing performs no allocation.
class FieldStepper {
 public:
  FieldStepper(const FactorMatrix<double>& c, double dt);

  Eigen::Index dim() const noexcept { return scaled_.rows(); }
  double dt() const noexcept { return dt_; }

  void advance(FieldState& state, RngStream& rng) {
    const Eigen::Index m = noise_.size();
    for (Eigen::Index j = 0; j < m; ++j) noise_[j] = rng.complex_normal();
    // Plain loops beat Eigen's dynamic-size kernels at the handful of
    // channels simulated here.
    for (Eigen::Index i = 0; i < m; ++i) {
      std::complex<double> acc = 0.0;
      const Eigen::Index end = lower_triangular_ ? i + 1 : m;
      for (Eigen::Index k = 0; k < end; ++k) acc += scaled_(i, k) * noise_[k];
      state.phi[i] += acc;
    }
    ++state.step_index;
  }

 private:
  MatrixXc scaled_;
  VectorXc noise_;
  double dt_;
  bool lower_triangular_;
};

struct CovarianceEstimate {
  MatrixXc covariance;      // sample E[phi_i conj(phi_j)]
  VectorXc mean;            // sample E[phi_i]
  MatrixXc expected;        // s * C C*
  double relative_error;    // ||covariance - expected||_F / ||expected||_F
  std::uint64_t samples;
};

/// Monte Carlo estimate of the field covariance at time s, from n_samples
/// independent trajectories started at zero and advanced in `steps` equal steps.
CovarianceEstimate empirical_covariance(const FactorMatrix<double>& c, std::uint64_t n_samples,
                                        double s, std::uint64_t seed, std::uint64_t steps = 1);

}  // namespace clicksim
