#include "clicksim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace clicksim {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(key, "missing");
  return *it;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number, got " + std::string(v.type_name()));
  return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& field) {
  if (!v.is_number_integer()) field_error(field, "expected an integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto x = v.get<std::int64_t>();
  if (x < 0) field_error(field, "must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

std::complex<double> as_complex(const json& v, const std::string& field) {
  if (!v.is_object()) field_error(field, "expected {\"re\": .., \"im\": ..}");
  for (const auto& [key, _] : v.items()) {
    if (key != "re" && key != "im") field_error(field + "." + key, "unknown key");
  }
  const double re = as_number(require(v, "re"), field + ".re");
  const double im = v.contains("im") ? as_number(v["im"], field + ".im") : 0.0;
  return {re, im};
}

MatrixXc as_matrix(const json& v, const std::string& field, std::uint64_t dim) {
  if (!v.is_array() || v.size() != dim) {
    field_error(field, "expected " + std::to_string(dim) + " rows");
  }
  const auto m = static_cast<Eigen::Index>(dim);
  MatrixXc out(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != dim) {
      field_error(row_field, "expected " + std::to_string(dim) + " entries");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = as_complex(row[static_cast<std::size_t>(j)],
                             row_field + "[" + std::to_string(j) + "]");
    }
  }
  return out;
}

ThresholdSpec as_threshold(const json& v) {
  if (!v.is_object() || v.size() != 1) {
    field_error("threshold", "expected {\"absolute\": x} or {\"trace_fraction\": x}");
  }
  ThresholdSpec spec;
  if (v.contains("absolute")) {
    spec = ThresholdSpec::absolute(as_number(v["absolute"], "threshold.absolute"));
  } else if (v.contains("trace_fraction")) {
    spec = ThresholdSpec::trace_fraction(as_number(v["trace_fraction"], "threshold.trace_fraction"));
  } else {
    field_error("threshold", "expected key 'absolute' or 'trace_fraction'");
  }
  if (!(spec.value > 0) || !std::isfinite(spec.value)) field_error("threshold", "must be positive");
  return spec;
}

std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, locate(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be a JSON object");

  static const std::set<std::string> known{"dim",  "covariance", "factor",  "threshold",
                                           "dt",   "horizon_steps", "tau_steps", "seed",
                                           "workers", "segment_steps"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.contains(key)) field_error(key, "unknown key");
  }

  const std::uint64_t dim = as_count(require(doc, "dim"), "dim");
  if (dim < 1) field_error("dim", "must be at least 1");
  const MatrixXc raw_b = as_matrix(require(doc, "covariance"), "covariance", dim);

  std::optional<CovarianceMatrix<double>> covariance;
  try {
    covariance = validate_covariance(raw_b);
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, std::string("covariance rejected: ") + e.what());
  }

  std::optional<FactorMatrix<double>> factor;
  if (doc.contains("factor")) {
    try {
      factor.emplace(as_matrix(doc["factor"], "factor", dim));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ParseError) throw;
      throw Error(ErrorCode::ParseError, std::string("field 'factor': ") + e.what());
    }
    const auto check = verify_factor(*factor, *covariance);
    if (!check.ok) {
      throw Error(ErrorCode::FactorMismatch, "supplied factor misses C C* = B by " +
                                                 std::to_string(check.residual));
    }
  }

  ExperimentConfig cfg{.covariance = *covariance,
                       .factor = factor,
                       .threshold = as_threshold(require(doc, "threshold")),
                       .horizon_steps = as_count(require(doc, "horizon_steps"), "horizon_steps"),
                       .seed = as_count(require(doc, "seed"), "seed")};

  if (doc.contains("dt")) {
    cfg.dt = as_number(doc["dt"], "dt");
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) field_error("dt", "must be positive");
  }
  if (doc.contains("workers")) {
    const auto w = as_count(doc["workers"], "workers");
    if (w < 1 || w > 4096) field_error("workers", "must be in [1, 4096]");
    cfg.workers = static_cast<unsigned>(w);
  }
  if (doc.contains("segment_steps")) {
    cfg.segment_steps = as_count(doc["segment_steps"], "segment_steps");
    if (cfg.segment_steps < 1) field_error("segment_steps", "must be at least 1");
  }
  if (doc.contains("tau_steps")) {
    const auto& taus = doc["tau_steps"];
    if (!taus.is_array()) field_error("tau_steps", "expected an array of integers");
    cfg.tau_steps.clear();
    for (std::size_t k = 0; k < taus.size(); ++k) {
      cfg.tau_steps.push_back(as_count(taus[k], "tau_steps[" + std::to_string(k) + "]"));
    }
  }
  return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read config " + path.string());
  return parse_config_text(buf.str());
}

json complex_matrix_to_json(const MatrixXc& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({{"re", m(i, j).real()}, {"im", m(i, j).imag()}});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json config_to_json(const ExperimentConfig& cfg) {
  json out;
  out["dim"] = cfg.covariance.dim();
  out["covariance"] = complex_matrix_to_json(cfg.covariance.matrix());
  if (cfg.factor) out["factor"] = complex_matrix_to_json(cfg.factor->matrix());
  out["threshold"] = cfg.threshold.kind == ThresholdSpec::Kind::Absolute
                         ? json{{"absolute", cfg.threshold.value}}
                         : json{{"trace_fraction", cfg.threshold.value}};
  out["dt"] = cfg.dt;
  out["horizon_steps"] = cfg.horizon_steps;
  out["tau_steps"] = cfg.tau_steps;
  out["seed"] = cfg.seed;
  out["workers"] = cfg.workers;
  out["segment_steps"] = cfg.segment_steps;
  return out;
}

}  // namespace clicksim
