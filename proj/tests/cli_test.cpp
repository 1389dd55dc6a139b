// Drives the clicksim executable end to end.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "clicksim/commands.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace clicksim;
using namespace clicksim::testing;
using nlohmann::json;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("clicksim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLICKSIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

fs::path write_config(const fs::path& dir, const json& doc, const std::string& name = "config.json") {
  const auto path = dir / name;
  std::ofstream(path) << doc.dump(2);
  return path;
}

json two_channel(std::uint64_t horizon) {
  json doc;
  doc["dim"] = 2;
  doc["covariance"] = complex_matrix_to_json(two_channel_covariance());
  doc["threshold"] = {{"trace_fraction", 0.05}};
  doc["dt"] = 9.5e-5;
  doc["horizon_steps"] = horizon;
  doc["seed"] = 17;
  doc["segment_steps"] = 500000;
  return doc;
}

}  // namespace

TEST_CASE("validate prints born probabilities") {
  Scratch s;
  const auto cfg = write_config(s.dir, two_channel(0));
  const std::string cmd = std::string(CLICKSIM_CLI) + " validate --config " + cfg.string() + " > " +
                          (s.dir / "out.txt").string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto text = slurp(s.dir / "out.txt");
  CHECK(text.find("0.526316") != std::string::npos);
  CHECK(text.find("0.473684") != std::string::npos);
}

TEST_CASE("run writes frequencies, clicks and report") {
  Scratch s;
  const auto cfg = write_config(s.dir, two_channel(2'000'000));
  const auto out = s.dir / "out";
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + out.string() + " --emit-clicks") == 0);

  const auto freq = read_csv(out / "frequencies.csv");
  REQUIRE(freq.size() == 3);
  CHECK(freq[0] == std::vector<std::string>{"channel", "clicks", "frequency", "born", "abs_error"});
  double sum = 0;
  std::uint64_t clicks = 0;
  for (std::size_t r = 1; r < freq.size(); ++r) {
    const double f = std::stod(freq[r][2]);
    const double born = std::stod(freq[r][3]);
    CHECK(std::stod(freq[r][4]) == std::abs(f - born));
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    sum += f;
    clicks += std::stoull(freq[r][1]);
  }
  CHECK(std::abs(sum - 1.0) <= 1e-9);

  const auto click_rows = read_csv(out / "clicks.csv");
  CHECK(click_rows[0] == std::vector<std::string>{"channel", "step"});
  CHECK(click_rows.size() == clicks + 1);

  const auto report = json::parse(slurp(out / "report.json"));
  CHECK(report["channels"].size() == 2);
  CHECK(report["config"]["seed"] == 17);
  CHECK(report["threshold"].get<double>() == doctest::Approx(0.95));
}

TEST_CASE("seed override and determinism") {
  Scratch s;
  const auto cfg = write_config(s.dir, two_channel(1'000'000));
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + (s.dir / "a").string()) == 0);
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + (s.dir / "b").string()) == 0);
  REQUIRE(run_cli("run --config " + cfg.string() + " --seed 99 --out " + (s.dir / "c").string()) == 0);
  CHECK(slurp(s.dir / "a" / "frequencies.csv") == slurp(s.dir / "b" / "frequencies.csv"));
  CHECK(slurp(s.dir / "a" / "frequencies.csv") != slurp(s.dir / "c" / "frequencies.csv"));
  CHECK_FALSE(fs::exists(s.dir / "a" / "clicks.csv"));
}

TEST_CASE("empty horizon writes header-only csv") {
  Scratch s;
  const auto cfg = write_config(s.dir, two_channel(0));
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + s.dir.string() + " --emit-clicks") == 0);
  CHECK(slurp(s.dir / "frequencies.csv") == "channel,clicks,frequency,born,abs_error\n");
  CHECK(slurp(s.dir / "clicks.csv") == "channel,step\n");
}

TEST_CASE("g2 writes one row per window") {
  Scratch s;
  auto doc = two_channel(2'000'000);
  doc["tau_steps"] = {0, 1, 5, 50};
  const auto cfg = write_config(s.dir, doc);
  REQUIRE(run_cli("g2 --config " + cfg.string() + " --out " + s.dir.string()) == 0);
  const auto rows = read_csv(s.dir / "g2.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"tau_steps", "n1", "n2", "n12", "g2"});
  double previous = -1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const double g2 = std::stod(rows[r][4]);
    CHECK(g2 >= previous);
    previous = g2;
  }
  CHECK(std::stod(rows[1][4]) < 0.05);
}

TEST_CASE("exit codes") {
  Scratch s;
  auto single = two_channel(1000);
  single["dim"] = 1;
  single["covariance"] = complex_matrix_to_json(MatrixXc::Identity(1, 1));
  const auto one = write_config(s.dir, single, "one.json");
  CHECK(run_cli("g2 --config " + one.string() + " --out " + s.dir.string()) == 1);

  auto bad = two_channel(1000);
  bad["covariance"][0][1] = {{"re", 1}, {"im", 0}};
  CHECK(run_cli("validate --config " + write_config(s.dir, bad, "bad.json").string()) == 1);

  auto missing = two_channel(1000);
  missing.erase("dim");
  CHECK(run_cli("validate --config " + write_config(s.dir, missing, "missing.json").string()) == 1);

  CHECK(run_cli("validate --config " + (s.dir / "absent.json").string()) == 2);

  const auto good = write_config(s.dir, two_channel(1000));
  std::ofstream(s.dir / "blocker") << "x";
  CHECK(run_cli("run --config " + good.string() + " --out " + (s.dir / "blocker" / "sub").string()) == 2);
}
