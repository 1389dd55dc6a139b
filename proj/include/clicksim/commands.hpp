#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clicksim/config.hpp"

namespace clicksim {

struct ChannelReport {
  std::size_t channel = 0;
  std::uint64_t clicks = 0;
  std::optional<double> frequency;  // sum-normalized; absent with no clicks at all
  double born = 0;
  std::optional<double> deviation;  // |frequency - born|
  std::optional<double> mean_hitting_time;
  double expected_hitting_time = 0;  // threshold / b_jj
};

struct RunReport {
  nlohmann::json config;
  double threshold = 0;
  std::uint64_t total_steps = 0;
  std::vector<ChannelReport> channels;
  std::vector<WindowTally> windows;
  double wall_clock_seconds = 0;
  double steps_per_second = 0;

  nlohmann::json to_json() const;
};

struct ValidationReport {
  Eigen::Index dim = 0;
  double trace = 0;
  double threshold = 0;
  bool factor_supplied = false;
  double factor_residual = 0;
  MatrixXc factor;
  MatrixXc density;
  std::vector<double> born;

  std::string format() const;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  bool emit_clicks = false;
};

/// Simulates and writes report.json, frequencies.csv and (optionally) clicks.csv.
RunReport cmd_run(const ExperimentConfig& cfg, const RunOptions& options);

/// Simulates a two-channel run and writes g2.csv, one row per window.
TallyResult cmd_g2(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Factorization and quantum predictions only; nothing is simulated.
ValidationReport cmd_validate(const ExperimentConfig& cfg);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

inline constexpr const char* kFrequenciesHeader = "channel,clicks,frequency,born,abs_error";
inline constexpr const char* kClicksHeader = "channel,step";
inline constexpr const char* kG2Header = "tau_steps,n1,n2,n12,g2";

}  // namespace clicksim
