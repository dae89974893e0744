// irhm <experiment> --config <path> [--out <path>]
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "irhm/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Infinite-range Heisenberg model decoherence experiments"};
  app.set_version_flag("--version", std::string(irhm::version()));
  std::string experiment_name, config_path, out_path;
  app.add_option("experiment", experiment_name,
                 "spectrum | effective | verify-appendix-a | evolve-local | evolve-global | rvb | polaron")
      ->required();
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_path, "CSV output path (overrides output.path; default standard output)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : irhm::kExitConfig;
  }

  const auto experiment = irhm::experiment_from_string(experiment_name);
  if (!experiment) {
    std::cerr << "error: unknown experiment '" << experiment_name << "'\n";
    return irhm::kExitConfig;
  }
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read config file '" << config_path << "'\n";
    return irhm::kExitConfig;
  }
  std::stringstream text;
  text << in.rdbuf();

  const irhm::ConfigResult parsed = irhm::parse_config(text.str(), experiment);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
    return irhm::kExitConfig;
  }
  irhm::RunConfig config = *parsed.config;
  if (!out_path.empty()) config.output_path = out_path;

  irhm::RunResult result;
  try {
    result = irhm::run_experiment(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return irhm::exit_code_for(std::current_exception());
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

  if (config.output_path.empty()) {
    std::cout << result.csv;
    return std::cout ? irhm::kExitOk : irhm::kExitFailure;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  out << result.csv;
  if (!out) {
    std::cerr << "error: cannot write '" << config.output_path << "'\n";
    return irhm::kExitFailure;
  }
  return irhm::kExitOk;
}
