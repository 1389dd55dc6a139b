#include "clicksim/detector.hpp"

#include <cmath>
#include <string>

namespace clicksim {

DetectorBank::DetectorBank(double threshold, std::size_t channels)
    : threshold_(threshold), last_click_(channels) {
  if (!(threshold > 0) || std::isnan(threshold)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be positive, got " + std::to_string(threshold));
  }
  if (channels == 0) throw Error(ErrorCode::InvalidArgument, "detector bank needs a channel");
}

std::optional<std::uint64_t> DetectorBank::last_click(std::size_t channel) const {
  if (channel >= last_click_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "channel " + std::to_string(channel));
  }
  return last_click_[channel];
}

std::vector<ClickEvent> DetectorBank::step_and_detect(FieldState& state) {
  if (static_cast<std::size_t>(state.phi.size()) != last_click_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "field and detector bank sizes differ");
  }
  std::vector<ClickEvent> clicks;
  step_and_detect(state, [&](std::size_t j) { clicks.push_back({j, state.step_index}); });
  return clicks;
}

void DetectorBank::reset_channel(FieldState& state, std::size_t channel) {
  if (channel >= last_click_.size() || static_cast<Eigen::Index>(channel) >= state.phi.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "channel " + std::to_string(channel));
  }
  mark(channel, state);
}

double single_channel_hitting_time(double sigma2, double threshold, double dt, RngStream& rng,
                                   std::uint64_t max_steps) {
  if (!(sigma2 > 0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::InvalidArgument, "power must be positive, got " + std::to_string(sigma2));
  }
  if (!(threshold > 0) || !std::isfinite(threshold)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must be positive, got " + std::to_string(threshold));
  }
  if (!(dt > 0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive, got " + std::to_string(dt));
  }
  const double scale = std::sqrt(sigma2 * dt / 2.0);
  std::complex<double> phi = 0.0;
  for (std::uint64_t step = 1; step <= max_steps; ++step) {
    phi += rng.complex_normal() * scale;
    if (std::norm(phi) >= threshold) return static_cast<double>(step) * dt;
  }
  throw Error(ErrorCode::MaxStepsExceeded,
              "no crossing within " + std::to_string(max_steps) + " steps");
}

}  // namespace clicksim
