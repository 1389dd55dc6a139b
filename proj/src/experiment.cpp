#include "clicksim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace clicksim {

double ThresholdSpec::resolve(double trace) const {
  if (!(value > 0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidArgument, "threshold value must be positive and finite");
  }
  return kind == Kind::Absolute ? value : value * trace;
}

void ExperimentConfig::check() const {
  if (!(dt > 0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "dt must be positive and finite");
  }
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
  if (segment_steps < 1) throw Error(ErrorCode::InvalidArgument, "segment_steps must be at least 1");
  if (factor && factor->dim() != covariance.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "factor and covariance dimensions differ");
  }
  threshold_energy();
}

FactorMatrix<double> ExperimentConfig::resolved_factor() const {
  if (!factor) return cholesky_factor(covariance);
  const auto check = verify_factor(*factor, covariance);
  if (!check.ok) {
    throw Error(ErrorCode::FactorMismatch,
                "supplied factor misses C C* = B by " + std::to_string(check.residual));
  }
  return *factor;
}

std::uint64_t ClickLog::total_clicks() const {
  std::uint64_t total = 0;
  for (const auto& c : channels) total += c.size();
  return total;
}

void ClickLog::append(const ClickLog& later) {
  if (later.channel_count() != channel_count()) {
    throw Error(ErrorCode::DimensionMismatch, "cannot merge logs with different channel counts");
  }
  for (std::size_t j = 0; j < channels.size(); ++j) {
    channels[j].insert(channels[j].end(), later.channels[j].begin(), later.channels[j].end());
  }
}

namespace {

ClickLog simulate_segment(const FactorMatrix<double>& c, double threshold, double dt,
                          std::uint64_t seed, std::uint64_t segment, std::uint64_t first_step,
                          std::uint64_t steps) {
  const auto m = static_cast<std::size_t>(c.dim());
  FieldStepper stepper(c, dt);
  DetectorBank bank(threshold, m);
  RngStream rng(seed, segment);
  FieldState state = FieldState::zero(c.dim());
  state.step_index = first_step;

  ClickLog log(m);
  const std::uint64_t last = first_step + steps;
  while (state.step_index < last) {
    stepper.advance(state, rng);
    bank.step_and_detect(state, [&](std::size_t j) { log.channels[j].push_back(state.step_index); });
  }
  return log;
}

}  // namespace

ClickLog run_experiment(const ExperimentConfig& cfg) {
  cfg.check();
  const FactorMatrix<double> c = cfg.resolved_factor();
  const double threshold = cfg.threshold_energy();
  const auto m = static_cast<std::size_t>(c.dim());

  const std::uint64_t n_segments =
      cfg.horizon_steps / cfg.segment_steps + (cfg.horizon_steps % cfg.segment_steps != 0);
  std::vector<ClickLog> parts(n_segments);

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::uint64_t k = next++; k < n_segments; k = next++) {
        const std::uint64_t first = k * cfg.segment_steps;
        const std::uint64_t steps = std::min(cfg.segment_steps, cfg.horizon_steps - first);
        parts[k] = simulate_segment(c, threshold, cfg.dt, cfg.seed, k, first, steps);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const auto n_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(cfg.workers, std::max<std::uint64_t>(n_segments, 1)));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ClickLog log(m);
  for (const auto& part : parts) log.append(part);
  return log;
}

std::vector<double> detection_frequencies(const ClickLog& log, const Normalization& norm) {
  const std::size_t m = log.channel_count();
  std::vector<double> freq(m);
  if (std::holds_alternative<SumNormalization>(norm)) {
    const std::uint64_t total = log.total_clicks();
    if (total == 0) throw Error(ErrorCode::NoClicks, "no clicks recorded");
    for (std::size_t j = 0; j < m; ++j) {
      freq[j] = static_cast<double>(log.clicks(j)) / static_cast<double>(total);
    }
    return freq;
  }
  if (m != 2) {
    throw Error(ErrorCode::WrongChannelCount,
                "coincidence normalization needs 2 channels, got " + std::to_string(m));
  }
  const auto tau = std::get<CoincidenceNormalization>(norm).tau_steps;
  const std::uint64_t n12 = coincidence_count(log, tau);
  const std::uint64_t denom = log.clicks(0) + log.clicks(1) - n12;
  if (denom == 0) throw Error(ErrorCode::NoClicks, "no clicks recorded");
  for (std::size_t j = 0; j < m; ++j) {
    freq[j] = static_cast<double>(log.clicks(j)) / static_cast<double>(denom);
  }
  return freq;
}

std::uint64_t coincidence_count(const ClickLog& log, std::uint64_t tau_steps) {
  if (log.channel_count() != 2) {
    throw Error(ErrorCode::WrongChannelCount,
                "coincidences need 2 channels, got " + std::to_string(log.channel_count()));
  }
  const auto& first = log.channels[0];
  const auto& second = log.channels[1];
  // Both lists are sorted, so unused channel-1 clicks older than t - tau can
  // never match a later channel-0 click; a single forward cursor suffices.
  std::uint64_t pairs = 0;
  std::size_t cursor = 0;
  for (const std::uint64_t t : first) {
    while (cursor < second.size() && second[cursor] + tau_steps < t) ++cursor;
    if (cursor < second.size() && second[cursor] <= t + tau_steps) {
      ++pairs;
      ++cursor;
    }
  }
  return pairs;
}

std::map<std::uint64_t, double> g2_curve(const ClickLog& log,
                                         const std::vector<std::uint64_t>& tau_list) {
  if (log.channel_count() != 2) {
    throw Error(ErrorCode::WrongChannelCount,
                "g2 needs 2 channels, got " + std::to_string(log.channel_count()));
  }
  const auto n1 = static_cast<double>(log.clicks(0));
  const auto n2 = static_cast<double>(log.clicks(1));
  if (n1 == 0 || n2 == 0) throw Error(ErrorCode::DivisionByZero, "a channel has no clicks");
  std::map<std::uint64_t, double> curve;
  for (const auto tau : tau_list) {
    const auto n12 = static_cast<double>(coincidence_count(log, tau));
    curve[tau] = n12 * (n1 + n2 - n12) / (n1 * n2);
  }
  return curve;
}

double mean_interclick_time(const ClickLog& log, std::size_t channel, double dt) {
  if (channel >= log.channel_count()) {
    throw Error(ErrorCode::IndexOutOfRange, "channel " + std::to_string(channel));
  }
  const auto& steps = log.channels[channel];
  if (steps.size() < 2) {
    throw Error(ErrorCode::InsufficientClicks,
                "channel " + std::to_string(channel) + " has " + std::to_string(steps.size()) +
                    " clicks, need 2");
  }
  // Successive differences telescope.
  const auto span = static_cast<double>(steps.back() - steps.front());
  return span * dt / static_cast<double>(steps.size() - 1);
}

std::vector<double> hitting_time_stats(const ClickLog& log, double dt) {
  std::vector<double> means(log.channel_count());
  for (std::size_t j = 0; j < means.size(); ++j) means[j] = mean_interclick_time(log, j, dt);
  return means;
}

TallyResult tally(const ClickLog& log, const std::vector<std::uint64_t>& tau_list) {
  TallyResult result;
  for (std::size_t j = 0; j < log.channel_count(); ++j) result.counts.push_back(log.clicks(j));
  if (log.total_clicks() == 0) return result;
  result.sum_frequencies = detection_frequencies(log, SumNormalization{});
  if (log.channel_count() != 2) return result;

  const bool both_clicked = log.clicks(0) > 0 && log.clicks(1) > 0;
  const auto n1 = static_cast<double>(log.clicks(0));
  const auto n2 = static_cast<double>(log.clicks(1));
  for (const auto tau : tau_list) {
    WindowTally w;
    w.tau_steps = tau;
    w.n12 = coincidence_count(log, tau);
    w.coincidence_frequencies = detection_frequencies(log, CoincidenceNormalization{tau});
    if (both_clicked) {
      const auto n12 = static_cast<double>(w.n12);
      w.g2 = n12 * (n1 + n2 - n12) / (n1 * n2);
    }
    result.windows.push_back(std::move(w));
  }
  return result;
}

}  // namespace clicksim
