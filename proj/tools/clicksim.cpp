// Command-line front end: validate | run | g2.
//
// Exit codes: 0 success, 1 domain or validation error, 2 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "clicksim/commands.hpp"

namespace {

int exit_code_for(const clicksim::Error& e) {
  return e.code() == clicksim::ErrorCode::IoError ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-detector click simulator for complex Wiener fields"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool emit_clicks = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON experiment description")->required();
    cmd->add_option("--seed", seed, "Override the config seed");
  };

  auto* validate = app.add_subcommand("validate", "Check the covariance and print quantum predictions");
  add_common(validate);

  auto* run = app.add_subcommand("run", "Simulate and write report.json and frequencies.csv");
  add_common(run);
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--emit-clicks", emit_clicks, "Also write every click to clicks.csv");

  auto* g2 = app.add_subcommand("g2", "Simulate two channels and write g2.csv");
  add_common(g2);
  g2->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = clicksim::parse_config(config_path);
    if (seed) cfg.seed = *seed;

    if (*validate) {
      std::cout << clicksim::cmd_validate(cfg).format();
    } else if (*run) {
      const auto report = clicksim::cmd_run(cfg, {out_dir, emit_clicks});
      std::cout << "steps: " << report.total_steps << "  wall clock: "
                << report.wall_clock_seconds << " s  (" << report.steps_per_second
                << " steps/s)\n";
      std::cout << "channel  clicks  frequency  born\n";
      for (const auto& c : report.channels) {
        std::cout << c.channel << "  " << c.clicks << "  "
                  << (c.frequency ? clicksim::format_double(*c.frequency) : "-") << "  "
                  << clicksim::format_double(c.born) << "\n";
      }
    } else if (*g2) {
      const auto t = clicksim::cmd_g2(cfg, out_dir);
      std::cout << "tau_steps  n12  g2\n";
      for (const auto& w : t.windows) {
        std::cout << w.tau_steps << "  " << w.n12 << "  " << clicksim::format_double(*w.g2) << "\n";
      }
    }
  } catch (const clicksim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
