#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "clicksim/process.hpp"

namespace clicksim {

struct ClickEvent {
  std::size_t channel = 0;
  std::uint64_t step = 0;  // time = step * dt

  friend auto operator<=>(const ClickEvent&, const ClickEvent&) = default;
};

/// One threshold detector per channel, all sharing the same threshold.
///
/// A channel clicks at the first step where |phi_j|^2 >= threshold; the
/// clicked component is then set back to zero while the other components
/// keep evolving. There is no dead time.
class DetectorBank {
 public:
  DetectorBank(double threshold, std::size_t channels);

  double threshold() const noexcept { return threshold_; }
  std::size_t channels() const noexcept { return last_click_.size(); }
  std::optional<std::uint64_t> last_click(std::size_t channel) const;

  /// Emits every channel over threshold at state.step_index, then resets them.
  std::vector<ClickEvent> step_and_detect(FieldState& state);

  /// Allocation-free form for the stepping loop: `sink(channel)` per click.
  template <typename Sink>
  void step_and_detect(FieldState& state, Sink&& sink) {
    const auto n = static_cast<Eigen::Index>(last_click_.size());
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::norm(state.phi[j]) >= threshold_) {
        sink(static_cast<std::size_t>(j));
        mark(static_cast<std::size_t>(j), state);
      }
    }
  }

  void reset_channel(FieldState& state, std::size_t channel);

 private:
  void mark(std::size_t channel, FieldState& state) {
    last_click_[channel] = state.step_index;
    state.phi[static_cast<Eigen::Index>(channel)] = 0.0;
  }

  double threshold_;
  std::vector<std::optional<std::uint64_t>> last_click_;
};

/// First time (step * dt) at which a scalar complex Wiener process of power
/// sigma2 started at zero reaches |phi|^2 >= threshold.
///
/// Crossings are only observed on the step grid, so the result overshoots the
/// continuous hitting time by O(sqrt(dt)); keep dt well below threshold/sigma2.
double single_channel_hitting_time(double sigma2, double threshold, double dt, RngStream& rng,
                                   std::uint64_t max_steps = 1'000'000'000ULL);

}  // namespace clicksim
