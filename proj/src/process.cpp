#include "clicksim/process.hpp"

#include <cmath>
#include <string>

namespace clicksim {

void StepParams::check() const {
  if (!(dt > 0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive and finite, got " + std::to_string(dt));
  }
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be at least 1");
}

void fill_standard_increment(RngStream& rng, double dt, Eigen::Ref<VectorXc> out) {
  StepParams{dt, out.size() > 0 ? out.size() : 1}.check();
  const double scale = std::sqrt(dt / 2.0);
  for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = rng.complex_normal() * scale;
}

VectorXc standard_complex_increment(RngStream& rng, Eigen::Index dim, double dt) {
  StepParams{dt, dim}.check();
  VectorXc xi(dim);
  fill_standard_increment(rng, dt, xi);
  return xi;
}

FieldState advance(const FieldState& state, const FactorMatrix<double>& c, RngStream& rng,
                   double dt) {
  if (c.dim() != state.phi.size()) {
    throw Error(ErrorCode::DimensionMismatch, "factor is " + std::to_string(c.dim()) +
                                                  "-dimensional, field has " +
                                                  std::to_string(state.phi.size()) + " components");
  }
  const VectorXc xi = standard_complex_increment(rng, c.dim(), dt);
  return {state.phi + c.matrix() * xi, state.step_index + 1};
}

FieldStepper::FieldStepper(const FactorMatrix<double>& c, double dt)
    : scaled_(c.matrix()), noise_(c.dim()), dt_(dt) {
  StepParams{dt, c.dim()}.check();
  scaled_ *= std::sqrt(dt / 2.0);
  lower_triangular_ = scaled_.isLowerTriangular(0.0);
}

CovarianceEstimate empirical_covariance(const FactorMatrix<double>& c, std::uint64_t n_samples,
                                        double s, std::uint64_t seed, std::uint64_t steps) {
  if (n_samples < 1000) {
    throw Error(ErrorCode::InvalidArgument,
                "need at least 1000 samples, got " + std::to_string(n_samples));
  }
  if (steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be at least 1");
  if (!(s > 0) || !std::isfinite(s)) {
    throw Error(ErrorCode::InvalidArgument, "time must be positive and finite");
  }

  const Eigen::Index m = c.dim();
  FieldStepper stepper(c, s / static_cast<double>(steps));
  RngStream rng(seed, 0);

  MatrixXc sum_outer = MatrixXc::Zero(m, m);
  VectorXc sum = VectorXc::Zero(m);
  FieldState state = FieldState::zero(m);
  for (std::uint64_t n = 0; n < n_samples; ++n) {
    state.phi.setZero();
    state.step_index = 0;
    for (std::uint64_t k = 0; k < steps; ++k) stepper.advance(state, rng);
    sum += state.phi;
    sum_outer.noalias() += state.phi * state.phi.adjoint();
  }

  CovarianceEstimate est;
  const double inv_n = 1.0 / static_cast<double>(n_samples);
  est.covariance = sum_outer * inv_n;
  est.mean = sum * inv_n;
  est.expected = c.covariance() * s;
  const double ref = est.expected.norm();
  const double diff = (est.covariance - est.expected).norm();
  est.relative_error = ref > 0 ? diff / ref : diff;
  est.samples = n_samples;
  return est;
}

}  // namespace clicksim
