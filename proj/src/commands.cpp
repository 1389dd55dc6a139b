#include "clicksim/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "clicksim/quantum.hpp"

namespace clicksim {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::filesystem::path prepare_out_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
  }
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << contents;
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::string frequencies_csv(const TallyResult& t, const std::vector<double>& born) {
  std::string csv = std::string(kFrequenciesHeader) + "\n";
  if (t.sum_frequencies.empty()) return csv;
  for (std::size_t j = 0; j < t.counts.size(); ++j) {
    const double f = t.sum_frequencies[j];
    csv += std::to_string(j) + "," + std::to_string(t.counts[j]) + "," + format_double(f) + "," +
           format_double(born[j]) + "," + format_double(std::abs(f - born[j])) + "\n";
  }
  return csv;
}

std::string clicks_csv(const ClickLog& log) {
  std::vector<ClickEvent> events;
  events.reserve(log.total_clicks());
  for (std::size_t j = 0; j < log.channel_count(); ++j) {
    for (const auto step : log.channels[j]) events.push_back({j, step});
  }
  std::sort(events.begin(), events.end(),
            [](const ClickEvent& a, const ClickEvent& b) {
              return a.step != b.step ? a.step < b.step : a.channel < b.channel;
            });
  std::string csv = std::string(kClicksHeader) + "\n";
  for (const auto& e : events) csv += std::to_string(e.channel) + "," + std::to_string(e.step) + "\n";
  return csv;
}

std::vector<double> born_vector(const CovarianceMatrix<double>& b) {
  const auto p = born_probabilities(density_from_covariance(b));
  return {p.data(), p.data() + p.size()};
}

}  // namespace

json RunReport::to_json() const {
  json out;
  out["config"] = config;
  out["threshold"] = threshold;
  out["total_steps"] = total_steps;
  json chans = json::array();
  for (const auto& c : channels) {
    json row{{"channel", c.channel},
             {"clicks", c.clicks},
             {"born", c.born},
             {"expected_hitting_time", c.expected_hitting_time}};
    row["frequency"] = c.frequency ? json(*c.frequency) : json(nullptr);
    row["deviation"] = c.deviation ? json(*c.deviation) : json(nullptr);
    row["mean_hitting_time"] = c.mean_hitting_time ? json(*c.mean_hitting_time) : json(nullptr);
    chans.push_back(std::move(row));
  }
  out["channels"] = std::move(chans);
  json wins = json::array();
  for (const auto& w : windows) {
    wins.push_back({{"tau_steps", w.tau_steps},
                    {"n12", w.n12},
                    {"g2", w.g2 ? json(*w.g2) : json(nullptr)}});
  }
  out["windows"] = std::move(wins);
  out["wall_clock_seconds"] = wall_clock_seconds;
  out["steps_per_second"] = steps_per_second;
  return out;
}

RunReport cmd_run(const ExperimentConfig& cfg, const RunOptions& options) {
  cfg.check();
  const auto out_dir = prepare_out_dir(options.out_dir);

  const auto start = std::chrono::steady_clock::now();
  const ClickLog log = run_experiment(cfg);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  const TallyResult t = tally(log, cfg.tau_steps);
  const auto born = born_vector(cfg.covariance);
  const double threshold = cfg.threshold_energy();

  RunReport report;
  report.config = config_to_json(cfg);
  report.threshold = threshold;
  report.total_steps = cfg.horizon_steps;
  for (std::size_t j = 0; j < t.counts.size(); ++j) {
    ChannelReport c;
    c.channel = j;
    c.clicks = t.counts[j];
    c.born = born[j];
    const double power = cfg.covariance.diagonal(static_cast<Eigen::Index>(j));
    c.expected_hitting_time = power > 0 ? expected_hitting_time(power, threshold) : INFINITY;
    if (!t.sum_frequencies.empty()) {
      c.frequency = t.sum_frequencies[j];
      c.deviation = std::abs(*c.frequency - born[j]);
    }
    if (log.clicks(j) >= 2) c.mean_hitting_time = mean_interclick_time(log, j, cfg.dt);
    report.channels.push_back(c);
  }
  report.windows = t.windows;
  report.wall_clock_seconds = elapsed.count();
  report.steps_per_second =
      elapsed.count() > 0 ? static_cast<double>(cfg.horizon_steps) / elapsed.count() : 0.0;

  write_file(out_dir / "frequencies.csv", frequencies_csv(t, born));
  if (options.emit_clicks) write_file(out_dir / "clicks.csv", clicks_csv(log));
  write_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
  return report;
}

TallyResult cmd_g2(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.check();
  if (cfg.covariance.dim() != 2) {
    throw Error(ErrorCode::WrongChannelCount,
                "g2 needs a 2-channel configuration, got " + std::to_string(cfg.covariance.dim()));
  }
  const auto dir = prepare_out_dir(out_dir);
  const ClickLog log = run_experiment(cfg);
  if (log.clicks(0) == 0 || log.clicks(1) == 0) {
    throw Error(ErrorCode::DivisionByZero, "g2 undefined: a channel recorded no clicks");
  }
  const TallyResult t = tally(log, cfg.tau_steps);

  std::string csv = std::string(kG2Header) + "\n";
  for (const auto& w : t.windows) {
    csv += std::to_string(w.tau_steps) + "," + std::to_string(t.counts[0]) + "," +
           std::to_string(t.counts[1]) + "," + std::to_string(w.n12) + "," +
           format_double(*w.g2) + "\n";
  }
  write_file(dir / "g2.csv", csv);
  return t;
}

ValidationReport cmd_validate(const ExperimentConfig& cfg) {
  cfg.check();
  ValidationReport r;
  r.dim = cfg.covariance.dim();
  r.trace = cfg.covariance.trace();
  r.threshold = cfg.threshold_energy();
  r.factor_supplied = cfg.factor.has_value();
  const FactorMatrix<double> c = cfg.resolved_factor();
  r.factor = c.matrix();
  r.factor_residual = verify_factor(c, cfg.covariance).residual;
  r.density = density_from_covariance(cfg.covariance).matrix();
  r.born = born_vector(cfg.covariance);
  return r;
}

std::string ValidationReport::format() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "dimension: " << dim << "\n";
  os << "trace: " << trace << "\n";
  os << "threshold: " << threshold << "\n";
  os << "factor: " << (factor_supplied ? "supplied" : "cholesky") << ", max |CC* - B| = "
     << factor_residual << "\n";
  os << "density matrix:\n";
  for (Eigen::Index i = 0; i < density.rows(); ++i) {
    os << " ";
    for (Eigen::Index j = 0; j < density.cols(); ++j) {
      const auto z = density(i, j);
      os << "  " << std::setw(10) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::setw(9)
         << std::abs(z.imag()) << "i";
    }
    os << "\n";
  }
  os << "born probabilities:";
  for (const double p : born) os << " " << p;
  os << "\n";
  return os.str();
}

}  // namespace clicksim
