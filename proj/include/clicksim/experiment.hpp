#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "clicksim/detector.hpp"
#include "clicksim/linalg.hpp"

namespace clicksim {

struct ThresholdSpec {
  enum class Kind { Absolute, TraceFraction };

  Kind kind = Kind::TraceFraction;
  double value = 0.05;

  static ThresholdSpec absolute(double energy) { return {Kind::Absolute, energy}; }
  static ThresholdSpec trace_fraction(double fraction) { return {Kind::TraceFraction, fraction}; }

  double resolve(double trace) const;
};

inline constexpr std::uint64_t kDefaultSegmentSteps = std::uint64_t{1} << 22;

struct ExperimentConfig {
  CovarianceMatrix<double> covariance;
  std::optional<FactorMatrix<double>> factor;  // Cholesky of `covariance` when absent
  ThresholdSpec threshold;
  double dt = 1e-3;
  std::uint64_t horizon_steps = 0;
  std::vector<std::uint64_t> tau_steps{1, 2, 5, 10, 20, 50};
  std::uint64_t seed = 0;
  unsigned workers = 1;
  // The horizon is cut into segments of this many steps, each simulated from
  // a zero field on rng stream = segment index. Independent of `workers`.
  std::uint64_t segment_steps = kDefaultSegmentSteps;

  void check() const;
  double threshold_energy() const { return threshold.resolve(covariance.trace()); }
  /// Supplied factor after verification, or the Cholesky factor.
  FactorMatrix<double> resolved_factor() const;
};

/// Per-channel click steps, strictly increasing within each channel.
struct ClickLog {
  std::vector<std::vector<std::uint64_t>> channels;

  ClickLog() = default;
  explicit ClickLog(std::size_t channel_count) : channels(channel_count) {}

  std::size_t channel_count() const noexcept { return channels.size(); }
  std::uint64_t clicks(std::size_t channel) const { return channels.at(channel).size(); }
  std::uint64_t total_clicks() const;
  void append(const ClickLog& later);
};

ClickLog run_experiment(const ExperimentConfig& cfg);

struct SumNormalization {};
struct CoincidenceNormalization {
  std::uint64_t tau_steps = 0;
};
using Normalization = std::variant<SumNormalization, CoincidenceNormalization>;

/// N_j / sum_k N_k, or for two channels N_j / (N1 + N2 - N12(tau)).
std::vector<double> detection_frequencies(const ClickLog& log, const Normalization& norm);

/// Coincident pairs under greedy chronological matching: channel-0 clicks are
/// visited in time order and each takes the earliest unused channel-1 click
/// within tau steps. Every click is in at most one pair.
std::uint64_t coincidence_count(const ClickLog& log, std::uint64_t tau_steps);

/// g2(0; tau) = N12 (N1 + N2 - N12) / (N1 N2) for every window in tau_list.
std::map<std::uint64_t, double> g2_curve(const ClickLog& log,
                                         const std::vector<std::uint64_t>& tau_list);

/// Mean spacing between successive clicks of one channel, in time units.
double mean_interclick_time(const ClickLog& log, std::size_t channel, double dt);
std::vector<double> hitting_time_stats(const ClickLog& log, double dt);

struct WindowTally {
  std::uint64_t tau_steps = 0;
  std::uint64_t n12 = 0;
  std::vector<double> coincidence_frequencies;  // P_j with N1 + N2 - N12 normalization
  std::optional<double> g2;                     // absent when a channel never clicked
};

struct TallyResult {
  std::vector<std::uint64_t> counts;
  std::vector<double> sum_frequencies;  // empty when nothing clicked
  std::vector<WindowTally> windows;     // two-channel logs only
};

TallyResult tally(const ClickLog& log, const std::vector<std::uint64_t>& tau_list);

}  // namespace clicksim
