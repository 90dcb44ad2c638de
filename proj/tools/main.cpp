// Command-line front end: run single experiments, the full scenario suite,
// replay recorded traces, and inspect saved generative models.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aifstream/harness.hpp"
#include "aifstream/json_io.hpp"

namespace fs = std::filesystem;
using namespace aifstream;

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
  int cycles = -1;
  int parallel = 1;
};

void apply_overrides(ExperimentConfig& config, const CommonFlags& flags) {
  if (!flags.out.empty()) config.out_dir = flags.out;
  if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.cycles > 0) config.cycle_count = flags.cycles;
}

void print_result(const ExperimentConfig& config, const ExperimentResult& result) {
  Scenario scenario;
  if (config.profile) {
    auto [service, device] = load_profile(*config.profile);
    scenario.service = std::move(service);
    scenario.device = std::move(device);
  } else {
    scenario = make_builtin_scenario(config.service, config.device, 0);
  }
  std::cout << "scenario: " << scenario.service.id << " on " << scenario.device.id << "\n"
            << "cycles: " << result.trajectory.size() << "\n"
            << "converged: " << (result.converged ? "yes" : "no");
  if (result.converged_at) std::cout << " (cycle " << *result.converged_at << ")";
  std::cout << "\nchosen: " << config_label(result.chosen, scenario.service.space) << "\n"
            << "final fulfillment: " << format_double(result.final_fulfillment) << "\n";
  for (const auto& path : result.outputs) std::cout << "wrote " << path.string() << "\n";
}

int cmd_run(const CommonFlags& flags, bool force_replay) {
  auto config = experiment_config_from_json(read_text_file(flags.config));
  if (force_replay && config.mode != ExperimentConfig::Mode::Replay)
    throw SchemaError("replay requires a config with mode \"replay\" and a trace path");
  apply_overrides(config, flags);
  const auto result = run_experiment(config);
  print_result(config, result);
  return 0;
}

int cmd_suite(const CommonFlags& flags) {
  std::vector<ExperimentConfig> configs;
  fs::path out_root = flags.out.empty() ? fs::path("results") : fs::path(flags.out);
  if (!flags.config.empty()) {
    configs = suite_configs_from_json(read_text_file(flags.config));
    for (auto& config : configs) {
      if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
      if (flags.cycles > 0) config.cycle_count = flags.cycles;
      if (config.out_dir.empty())
        config.out_dir = out_root / scenario_slug(config.service, config.device);
    }
  } else {
    const std::uint64_t seed = flags.seed >= 0 ? static_cast<std::uint64_t>(flags.seed) : 1;
    const int cycles = flags.cycles > 0 ? flags.cycles : 40;
    configs = default_suite(seed, cycles, out_root);
  }

  const fs::path summary = out_root / "summary.csv";
  const auto rows = run_suite(configs, flags.parallel, summary);

  int failures = 0;
  for (const auto& row : rows) {
    if (!row.error.empty()) {
      ++failures;
      std::cerr << row.service << "/" << row.device << " failed: " << row.error << "\n";
      continue;
    }
    std::cout << row.service << "/" << row.device << ": " << row.chosen
              << " fulfillment=" << format_double(row.final_fulfillment);
    if (row.converged_at) std::cout << " converged_at=" << *row.converged_at;
    std::cout << (row.optimal_match ? " [optimal]" : "") << "\n";
  }
  std::cout << "wrote " << summary.string() << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_inspect(const CommonFlags& flags) {
  const fs::path model_path = flags.config;
  const auto report = inspect_model(model_path);
  std::cout << report.text;
  fs::path dot_path = flags.out.empty() ? fs::path(model_path).replace_extension(".dot")
                                        : fs::path(flags.out) / "dag.dot";
  write_text_file(dot_path, report.dot);
  std::cout << "wrote " << dot_path.string() << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active-inference agent for SLO-driven stream processing"};
  app.require_subcommand(1);

  CommonFlags run_flags, suite_flags, inspect_flags, replay_flags;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("--config", run_flags.config, "Experiment config JSON")->required();
  run->add_option("--out", run_flags.out, "Output directory (overrides config)");
  run->add_option("--seed", run_flags.seed, "Seed (overrides config)");
  run->add_option("--cycles", run_flags.cycles, "Cycle count (overrides config)");

  auto* suite = app.add_subcommand("suite", "Run a suite of experiments");
  suite->add_option("--config", suite_flags.config,
                    "Suite config JSON (defaults to the builtin 12 scenarios)");
  suite->add_option("--out", suite_flags.out, "Output root directory");
  suite->add_option("--seed", suite_flags.seed, "Seed for every experiment");
  suite->add_option("--cycles", suite_flags.cycles, "Cycle count for every experiment");
  suite->add_option("--parallel", suite_flags.parallel, "Concurrent experiments");

  auto* inspect = app.add_subcommand("inspect", "Describe a saved model file");
  inspect->add_option("--config", inspect_flags.config, "Model JSON path")->required();
  inspect->add_option("--out", inspect_flags.out, "Directory for the DOT export");

  auto* replay = app.add_subcommand("replay", "Replay a recorded metric trace");
  replay->add_option("--config", replay_flags.config, "Experiment config JSON (mode replay)")
      ->required();
  replay->add_option("--out", replay_flags.out, "Output directory (overrides config)");
  replay->add_option("--cycles", replay_flags.cycles, "Cycle limit (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags, false);
    if (suite->parsed()) return cmd_suite(suite_flags);
    if (inspect->parsed()) return cmd_inspect(inspect_flags);
    if (replay->parsed()) return cmd_run(replay_flags, true);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
