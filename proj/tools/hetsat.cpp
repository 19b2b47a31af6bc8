#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hetsat/cli.hpp"
#include "hetsat/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

bool write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  os << body;
  return static_cast<bool>(os);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hetsat::cli;
  CLI::App app{"Heterogeneous LEO downlink analysis and simulation"};
  app.set_version_flag("--version", kToolVersion);

  std::string scenario_path;
  std::string mode = "analytic";
  std::string command = "metrics";
  std::string out;
  std::uint64_t seed = 0;
  long trials = 0;
  int threads = 0;
  app.add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "analytic, mc or both")->capture_default_str();
  app.add_option("--command", command, "metrics, sweep, weight-scan or calibrate")->capture_default_str();
  app.add_option("--out", out, "CSV path; defaults to the scenario's output key, then stdout");
  auto* seed_opt = app.add_option("--seed-override", seed, "Replace the scenario's Monte Carlo seed");
  auto* trials_opt =
      app.add_option("--trials-override", trials, "Replace the scenario's trial count")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunOptions opt;
    opt.mode = parse_mode(mode);
    opt.command = parse_command(command);
    if (*seed_opt) opt.seed = seed;
    if (*trials_opt) opt.trials = trials;
    opt.threads = threads;

    const ScenarioFile file = load_scenario(scenario_path);
    if (out.empty()) out = file.output;

    const auto start = std::chrono::steady_clock::now();
    const Table table = run(file, opt);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string meta = metadata_json(file, opt, table, wall);
    if (out.empty() || out == "-") {
      table.write_csv(std::cout);
      std::cerr << meta;
    } else {
      std::ofstream os(out, std::ios::binary);
      table.write_csv(os);
      if (!os || !write_file(out + ".meta.json", meta)) {
        std::cerr << "error: cannot write " << out << "\n";
        return kExitConfig;
      }
    }
    for (const auto& row : table.rows) {
      if (row.size() >= 2 && row.back().rfind("numerical", 0) == 0) std::cerr << "warning: " << row.back() << "\n";
    }
    return table.failed_rows > 0 ? kExitNumerical : 0;
  } catch (const hetsat::ConfigError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const hetsat::DomainError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const hetsat::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
