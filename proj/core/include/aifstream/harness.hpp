#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "aifstream/agent.hpp"
#include "aifstream/envsim.hpp"

namespace aifstream {

struct ExperimentConfig {
  std::string service;
  std::string device;
  std::optional<std::filesystem::path> profile; // custom scenario profile file
  AgentHyperparams hyper;
  int cycle_count = 40;
  std::uint64_t seed = 0;
  std::int64_t window_ms = 2000;
  std::filesystem::path out_dir;

  enum class Mode { Simulate, Replay };
  Mode mode = Mode::Simulate;
  std::filesystem::path trace; // replay input CSV
};

struct ExperimentResult {
  std::vector<Decision> trajectory;
  std::vector<FulfillmentReport> reports; // aligned with trajectory
  GenerativeModel final_model;
  ScoreMatrix final_scores;
  bool converged = false;
  std::optional<int> converged_at;
  Configuration chosen;
  double final_fulfillment = 0.0;
  std::vector<std::filesystem::path> outputs;
};

/// First cycle index of the earliest run of `runs` identical consecutive
/// choices, if any.
std::optional<int> convergence_cycle(const std::vector<Decision>& trajectory,
                                     int runs = 5);

/// Configuration of the last stable run when the trajectory converged,
/// otherwise the final choice. An exploration blip after convergence does
/// not change the answer.
Configuration converged_configuration(const std::vector<Decision>& trajectory,
                                      int runs = 5);

/// Runs one experiment and writes trajectory CSV, model JSON, DAG DOT and
/// pv/ig heat maps into the output directory. Deterministic per seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SuiteRow {
  std::string service;
  std::string device;
  std::string chosen;
  double final_fulfillment = 0.0;
  std::optional<int> converged_at;
  bool optimal_match = false;
  std::string error; // empty on success
};

/// Runs all experiments (optionally in parallel), writes one summary CSV row
/// per experiment in input order. Per-experiment failures land in the row's
/// error column instead of aborting the suite.
std::vector<SuiteRow> run_suite(const std::vector<ExperimentConfig>& configs,
                                int parallelism,
                                const std::filesystem::path& summary_csv);

/// The standard 12-experiment grid: every builtin service on every builtin
/// device, sharing one seed and output root.
std::vector<ExperimentConfig> default_suite(std::uint64_t seed, int cycles,
                                            const std::filesystem::path& out_root);

struct InspectReport {
  std::string text;
  std::string dot;
};

/// Human-readable model summary (variables, edges, SLO CPT rows) plus DOT.
InspectReport inspect_model(const std::filesystem::path& model_path);

/// Groups trace rows into window-sized batches; a window becomes a batch
/// only when a later window has started (partial trailing windows drop).
std::vector<MetricBatch> load_replay_batches(const std::filesystem::path& trace,
                                             const ParameterSpace& space,
                                             std::int64_t window_ms);

// Experiment config JSON: {service, device, seed?, cycles?, window_ms?, out?,
// mode?, trace?, profile?, hyper?:{w_pv,w_ig,pseudocount,relearn_period}}.
ExperimentConfig experiment_config_from_json(const std::string& text);
std::vector<ExperimentConfig> suite_configs_from_json(const std::string& text);

/// Filesystem-safe name for a scenario, e.g. ("CV","NX+") -> "cv_nx_plus".
std::string scenario_slug(const std::string& service, const std::string& device);

} // namespace aifstream
