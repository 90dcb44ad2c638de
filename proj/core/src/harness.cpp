#include "aifstream/harness.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "aifstream/json_io.hpp"

namespace aifstream {

namespace fs = std::filesystem;

std::optional<int> convergence_cycle(const std::vector<Decision>& trajectory, int runs) {
  if (runs <= 0 || trajectory.size() < static_cast<std::size_t>(runs)) return std::nullopt;
  int streak = 1;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    streak = trajectory[i].chosen == trajectory[i - 1].chosen ? streak + 1 : 1;
    if (streak == runs) return trajectory[i].cycle - runs + 1;
  }
  return std::nullopt;
}

Configuration converged_configuration(const std::vector<Decision>& trajectory, int runs) {
  if (trajectory.empty()) return {};
  Configuration stable = trajectory.back().chosen;
  int streak = 1;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    streak = trajectory[i].chosen == trajectory[i - 1].chosen ? streak + 1 : 1;
    if (streak == runs) stable = trajectory[i].chosen;
  }
  return stable;
}

std::string scenario_slug(const std::string& service, const std::string& device) {
  std::string slug;
  for (char c : service + "_" + device) {
    if (c == '+') {
      slug += "_plus";
    } else if (c == '-') {
      slug += "_minus";
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      slug += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      slug += '_';
    }
  }
  return slug;
}

namespace {

Scenario resolve_scenario(const ExperimentConfig& config) {
  Scenario scenario;
  if (config.profile) {
    auto [service, device] = load_profile(*config.profile);
    scenario.service = std::move(service);
    scenario.device = std::move(device);
  } else {
    scenario.service = builtin_service(config.service);
    scenario.device = builtin_device_for(config.service, config.device);
  }
  scenario.seed = config.seed;
  scenario.window_ms = config.window_ms;
  scenario.service.validate();
  return scenario;
}

void write_trajectory_csv(std::ostream& out, const ExperimentResult& result,
                          const ParameterSpace& space, const std::vector<SloSpec>& slos) {
  out << "cycle";
  for (const auto& spec : space.specs) out << ',' << spec.name;
  out << ",pv,ig,score,fulfillment_overall";
  for (const auto& slo : slos) out << ",fulfillment_" << slo.name;
  out << ",rationale\n";
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    const Decision& d = result.trajectory[i];
    const FulfillmentReport& report = result.reports[i];
    out << d.cycle;
    for (const auto& spec : space.specs) out << ',' << d.chosen.at(spec.name);
    out << ',' << format_double(d.pv) << ',' << format_double(d.ig) << ','
        << format_double(d.score) << ',' << format_double(report.overall);
    for (const auto& slo : slos) out << ',' << format_double(report.per_slo.at(slo.name));
    out << ',' << to_string(d.rationale) << '\n';
  }
}

// Heat-map layout: rows are states of the first parameter, columns states of
// the second; spaces with more parameters emit one file per state
// combination of the remaining parameters.
std::vector<fs::path> write_matrix_csvs(const fs::path& dir, const std::string& metric,
                                        const ScoreMatrix& matrix,
                                        const ParameterSpace& space) {
  std::vector<fs::path> written;
  if (!matrix.total()) return written;
  const auto value_of = [&](const ScoreEntry& e) {
    return metric == "pv" ? e.pv : e.ig;
  };

  const auto& specs = space.specs;
  std::vector<std::size_t> tail_card;
  std::size_t tail_total = 1;
  for (std::size_t k = 2; k < specs.size(); ++k) {
    tail_card.push_back(specs[k].states.size());
    tail_total *= specs[k].states.size();
  }

  for (std::size_t tail = 0; tail < tail_total; ++tail) {
    std::string suffix;
    std::vector<std::size_t> tail_ranks(tail_card.size());
    std::size_t rem = tail;
    for (std::size_t k = tail_card.size(); k-- > 0;) {
      tail_ranks[k] = rem % tail_card[k];
      rem /= tail_card[k];
    }
    for (std::size_t k = 0; k < tail_ranks.size(); ++k) {
      suffix += "_" + specs[k + 2].name + "-" + specs[k + 2].states[tail_ranks[k]].label;
    }
    const fs::path path = dir / (metric + "_matrix" + suffix + ".csv");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());

    if (specs.size() == 1) {
      out << specs[0].name << ",value\n";
      for (std::size_t r = 0; r < specs[0].states.size(); ++r) {
        out << specs[0].states[r].label << ','
            << format_double(value_of(*matrix.entries[r])) << '\n';
      }
    } else {
      out << specs[0].name << '/' << specs[1].name;
      for (const auto& st : specs[1].states) out << ',' << st.label;
      out << '\n';
      for (std::size_t r = 0; r < specs[0].states.size(); ++r) {
        out << specs[0].states[r].label;
        for (std::size_t c = 0; c < specs[1].states.size(); ++c) {
          // Flat grid index with spec order (p0, p1, tail...).
          std::size_t idx = r;
          idx = idx * specs[1].states.size() + c;
          std::size_t t = tail;
          std::vector<std::size_t> ranks(tail_card.size());
          for (std::size_t k = tail_card.size(); k-- > 0;) {
            ranks[k] = t % tail_card[k];
            t /= tail_card[k];
          }
          for (std::size_t k = 0; k < ranks.size(); ++k) {
            idx = idx * tail_card[k] + ranks[k];
          }
          out << ',' << format_double(value_of(*matrix.entries[idx]));
        }
        out << '\n';
      }
    }
    written.push_back(path);
  }
  return written;
}

} // namespace

std::vector<MetricBatch> load_replay_batches(const fs::path& trace,
                                             const ParameterSpace& space,
                                             std::int64_t window_ms) {
  if (window_ms <= 0) throw SchemaError("window_ms must be positive");
  std::ifstream in(trace);
  if (!in) throw IoError("cannot open trace file " + trace.string());
  const auto samples = read_samples_csv(in, space);
  if (samples.empty()) return {};

  const std::int64_t t0 = samples.front().timestamp_ms;
  std::int64_t max_window = 0;
  std::map<std::int64_t, MetricBatch> windows;
  for (const auto& sample : samples) {
    const std::int64_t w = (sample.timestamp_ms - t0) / window_ms;
    MetricBatch& batch = windows[w];
    batch.window_ms = window_ms;
    if (!batch.samples.empty() && !(batch.samples.front().config == sample.config))
      throw SchemaError("replay window " + std::to_string(w) +
                        " mixes configurations; windows must hold a single configuration");
    batch.samples.push_back(sample);
    max_window = std::max(max_window, w);
  }

  std::vector<MetricBatch> batches;
  for (auto& [w, batch] : windows) {
    if (w >= max_window) break; // trailing (possibly partial) window drops
    batches.push_back(std::move(batch));
  }
  return batches;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.cycle_count < 1) throw SchemaError("cycle_count must be at least 1");
  const Scenario scenario = resolve_scenario(config);

  AgentHyperparams hyper = config.hyper;
  hyper.seed = config.seed;
  hyper.window_ms = config.window_ms;
  AgentState state = make_agent(scenario.service.space, scenario.service.slos, hyper);

  ExperimentResult result;
  if (config.mode == ExperimentConfig::Mode::Replay) {
    const auto batches =
        load_replay_batches(config.trace, scenario.service.space, config.window_ms);
    const std::size_t n =
        std::min<std::size_t>(batches.size(), static_cast<std::size_t>(config.cycle_count));
    for (std::size_t i = 0; i < n; ++i) {
      // Replay is observational: the environment ignores the agent's choice.
      state.current = batches[i].samples.front().config;
      result.trajectory.push_back(run_cycle(state, batches[i]));
      result.reports.push_back(*state.last_perceived);
    }
  } else {
    for (int cycle = 0; cycle < config.cycle_count; ++cycle) {
      const MetricBatch batch = generate_batch(scenario, state.current, cycle);
      result.trajectory.push_back(run_cycle(state, batch));
      result.reports.push_back(*state.last_perceived);
    }
  }

  result.converged_at = convergence_cycle(result.trajectory);
  result.converged = result.converged_at.has_value();
  if (!result.trajectory.empty()) {
    result.chosen = converged_configuration(result.trajectory);
    result.final_fulfillment = result.trajectory.back().fulfillment_observed;
  }
  result.final_model = state.model;
  if (!state.stats.empty()) {
    result.final_scores = interpolate_scores(build_score_matrix(state), state.space);
  }

  if (!config.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + config.out_dir.string());

    const fs::path trajectory_path = config.out_dir / "trajectory.csv";
    std::ofstream tout(trajectory_path);
    if (!tout) throw IoError("cannot write " + trajectory_path.string());
    write_trajectory_csv(tout, result, scenario.service.space, scenario.service.slos);
    result.outputs.push_back(trajectory_path);

    const fs::path model_path = config.out_dir / "model.json";
    save_model(result.final_model, model_path);
    result.outputs.push_back(model_path);

    const fs::path dot_path = config.out_dir / "dag.dot";
    write_text_file(dot_path, dag_to_dot(result.final_model.dag));
    result.outputs.push_back(dot_path);

    for (const char* metric : {"pv", "ig"}) {
      auto paths = write_matrix_csvs(config.out_dir, metric, result.final_scores,
                                     scenario.service.space);
      result.outputs.insert(result.outputs.end(), paths.begin(), paths.end());
    }
  }
  return result;
}

std::vector<ExperimentConfig> default_suite(std::uint64_t seed, int cycles,
                                            const fs::path& out_root) {
  std::vector<ExperimentConfig> configs;
  for (const auto& service : builtin_service_ids()) {
    for (const auto& device : builtin_device_ids()) {
      ExperimentConfig config;
      config.service = service;
      config.device = device;
      config.seed = seed;
      config.cycle_count = cycles;
      if (!out_root.empty()) config.out_dir = out_root / scenario_slug(service, device);
      configs.push_back(std::move(config));
    }
  }
  return configs;
}

std::vector<SuiteRow> run_suite(const std::vector<ExperimentConfig>& configs,
                                int parallelism, const fs::path& summary_csv) {
  if (configs.empty()) throw SchemaError("suite needs at least one experiment");
  if (parallelism < 1) parallelism = 1;

  std::vector<SuiteRow> rows(configs.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      SuiteRow& row = rows[i];
      row.service = configs[i].service;
      row.device = configs[i].device;
      try {
        const ExperimentResult result = run_experiment(configs[i]);
        const Scenario scenario = resolve_scenario(configs[i]);
        row.chosen = config_label(result.chosen, scenario.service.space);
        row.final_fulfillment = result.final_fulfillment;
        row.converged_at = result.converged_at;
        if (configs[i].mode == ExperimentConfig::Mode::Simulate) {
          const std::size_t oracle_n = 4000;
          const auto [opt_config, opt_value] = true_optimum(scenario, oracle_n);
          const double chosen_value = true_fulfillment(scenario, result.chosen, oracle_n);
          row.optimal_match =
              result.chosen == opt_config || opt_value - chosen_value <= 0.05;
        }
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  std::vector<std::thread> threads;
  const int n_threads = std::min<int>(parallelism, static_cast<int>(configs.size()));
  threads.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  if (!summary_csv.empty()) {
    if (summary_csv.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(summary_csv.parent_path(), ec);
    }
    std::ofstream out(summary_csv);
    if (!out) throw IoError("cannot write " + summary_csv.string());
    out << "service,device,chosen_config,final_fulfillment,converged_at,optimal_match\n";
    for (const auto& row : rows) {
      out << row.service << ',' << row.device << ',' << row.chosen << ','
          << format_double(row.final_fulfillment) << ',';
      if (row.converged_at) out << *row.converged_at;
      out << ',' << (row.optimal_match ? "true" : "false") << '\n';
    }
  }
  return rows;
}

InspectReport inspect_model(const fs::path& model_path) {
  const GenerativeModel model = load_model(model_path);
  std::ostringstream out;
  out << "variables (" << model.dag.nodes.size() << "):\n";
  for (const auto& node : model.dag.nodes) {
    out << "  " << node.name
        << (node.kind == VariableKind::Parameter ? " [parameter]" : " [slo]") << " states:";
    for (const auto& s : node.states) out << ' ' << s;
    out << '\n';
  }
  if (model.dag.edges.empty()) {
    out << "no dependencies learned\n";
  } else {
    out << "edges (" << model.dag.edges.size() << "):\n";
    for (const auto& [p, c] : model.dag.edges) out << "  " << p << " -> " << c << '\n';
  }
  for (const auto& node : model.dag.nodes) {
    if (node.kind != VariableKind::SloIndicator) continue;
    const Cpt& cpt = model.cpt(node.name);
    out << "cpt " << node.name;
    if (!cpt.parent_order.empty()) {
      out << " | parents:";
      for (const auto& p : cpt.parent_order) out << ' ' << p;
    }
    out << '\n';
    std::vector<std::size_t> card;
    for (const auto& p : cpt.parent_order)
      card.push_back(model.dag.node(p).states.size());
    for (std::size_t combo = 0; combo < cpt.combo_count; ++combo) {
      out << "  ";
      if (cpt.parent_order.empty()) {
        out << "(root)";
      } else {
        std::size_t rem = combo;
        std::vector<std::size_t> ranks(card.size());
        for (std::size_t k = card.size(); k-- > 0;) {
          ranks[k] = rem % card[k];
          rem /= card[k];
        }
        for (std::size_t k = 0; k < card.size(); ++k) {
          if (k > 0) out << ',';
          out << cpt.parent_order[k] << '='
              << model.dag.node(cpt.parent_order[k]).states[ranks[k]];
        }
      }
      out << ':';
      for (std::size_t s = 0; s < cpt.state_count; ++s) {
        out << ' ' << node.states[s] << '=' << format_double(cpt.prob(combo, s));
      }
      out << '\n';
    }
  }
  out << "trained_on: " << model.trained_on << " rows\n";

  InspectReport report;
  report.text = out.str();
  report.dot = dag_to_dot(model.dag);
  return report;
}

} // namespace aifstream
