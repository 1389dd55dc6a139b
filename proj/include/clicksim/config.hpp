#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "clicksim/experiment.hpp"

namespace clicksim {

/// Reads an experiment description from a UTF-8 JSON file:
///
///   { "dim": 2,
///     "covariance": [[{"re": 10, "im": 0}, {"re": 5, "im": 2}], ...],
///     "factor": [[...]],                           (optional, same shape)
///     "threshold": {"trace_fraction": 0.05}        (or {"absolute": 0.95})
///     "dt": 1e-3, "horizon_steps": 1000000, "tau_steps": [1, 2, 5],
///     "seed": 7, "workers": 1, "segment_steps": 4194304 }
///
/// Syntax and schema problems raise ParseError naming the line or field,
/// an invalid covariance raises ValidationError and a supplied factor that
/// does not reproduce the covariance raises FactorMismatch.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Inverse of parse_config for the fields that define a run.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

nlohmann::json complex_matrix_to_json(const MatrixXc& m);

}  // namespace clicksim
