#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aifstream/harness.hpp"
#include "aifstream/json_io.hpp"
#include "test_support.hpp"

using namespace aifstream;
using namespace aifstream::testing;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("aifstream_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig quick_config(const std::string& service, const std::string& device,
                              std::uint64_t seed, int cycles, const fs::path& out) {
  ExperimentConfig config;
  config.service = service;
  config.device = device;
  config.seed = seed;
  config.cycle_count = cycles;
  config.out_dir = out;
  return config;
}

} // namespace

TEST_CASE("convergence_cycle finds the first stable run") {
  const auto decision_at = [](int cycle, const Configuration& c) {
    Decision d;
    d.cycle = cycle;
    d.chosen = c;
    return d;
  };
  const auto a = make_config("480", "5");
  const auto b = make_config("720", "5");

  std::vector<Decision> traj;
  for (int i = 0; i < 4; ++i) traj.push_back(decision_at(i, a));
  CHECK(!convergence_cycle(traj).has_value());

  traj.push_back(decision_at(4, a));
  auto at = convergence_cycle(traj);
  REQUIRE(at.has_value());
  CHECK(*at == 0);

  std::vector<Decision> mixed;
  mixed.push_back(decision_at(0, b));
  mixed.push_back(decision_at(1, a));
  mixed.push_back(decision_at(2, b));
  for (int i = 3; i < 8; ++i) mixed.push_back(decision_at(i, a));
  at = convergence_cycle(mixed);
  REQUIRE(at.has_value());
  CHECK(*at == 3);
}

TEST_CASE("a single-cycle experiment yields one decision and no convergence") {
  const auto out = temp_dir("single");
  const auto result = run_experiment(quick_config("QR", "AGX+", 3, 1, out));
  CHECK(result.trajectory.size() == 1);
  CHECK(!result.converged);
  CHECK(!result.converged_at.has_value());
  for (const auto& path : result.outputs) CHECK(fs::exists(path));
}

TEST_CASE("identical configs produce byte-identical outputs") {
  const auto out_a = temp_dir("det_a");
  const auto out_b = temp_dir("det_b");
  run_experiment(quick_config("CV", "NX+", 11, 12, out_a));
  run_experiment(quick_config("CV", "NX+", 11, 12, out_b));
  for (const char* name : {"trajectory.csv", "model.json", "dag.dot", "pv_matrix.csv",
                           "ig_matrix.csv"}) {
    const auto a = read_text_file(out_a / name);
    const auto b = read_text_file(out_b / name);
    CHECK(a == b);
    CHECK(!a.empty());
  }
}

TEST_CASE("trajectory CSV carries config, scores and fulfillment columns") {
  const auto out = temp_dir("traj");
  const auto result = run_experiment(quick_config("CV", "AGX+", 5, 3, out));
  std::ifstream in(out / "trajectory.csv");
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header ==
        "cycle,pixel,fps,pv,ig,score,fulfillment_overall,fulfillment_time,"
        "fulfillment_energy,fulfillment_rate,rationale");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == result.trajectory.size());
}

TEST_CASE("replay groups the trace into windows and drops the partial tail") {
  const auto scenario = make_builtin_scenario("QR", "NX+", 13);
  const auto& space = scenario.service.space;
  const auto out = temp_dir("replay");

  // Record three full windows plus a partial fourth, all under one config.
  MetricBatch trace;
  trace.window_ms = 2000;
  const auto config = make_config("720", "5");
  for (int cycle = 0; cycle < 4; ++cycle) {
    auto batch = generate_batch(scenario, config, cycle);
    if (cycle == 3) batch.samples.resize(3); // partial tail
    for (const auto& s : batch.samples) trace.samples.push_back(s);
  }
  const fs::path trace_path = out / "trace.csv";
  {
    std::ofstream os(trace_path);
    write_batch_csv(os, trace, space, scenario.service.metrics);
  }

  const auto batches = load_replay_batches(trace_path, space, 2000);
  REQUIRE(batches.size() == 3);
  for (const auto& b : batches) CHECK(b.size() == 10);

  ExperimentConfig config_r;
  config_r.service = "QR";
  config_r.device = "NX+";
  config_r.mode = ExperimentConfig::Mode::Replay;
  config_r.trace = trace_path;
  config_r.cycle_count = 40;
  config_r.out_dir = out / "run";
  const auto result = run_experiment(config_r);
  CHECK(result.trajectory.size() == 3);
}

TEST_CASE("replay rejects windows that mix configurations") {
  const auto scenario = make_builtin_scenario("QR", "NX+", 14);
  const auto& space = scenario.service.space;
  const auto out = temp_dir("replay_mixed");

  MetricBatch trace;
  trace.window_ms = 2000;
  auto first = generate_batch(scenario, make_config("720", "5"), 0);
  auto second = generate_batch(scenario, make_config("480", "5"), 0);
  trace.samples = first.samples;
  // Same window index, different config.
  for (auto s : second.samples) {
    s.timestamp_ms += 100;
    trace.samples.push_back(s);
  }
  std::sort(trace.samples.begin(), trace.samples.end(),
            [](const auto& a, const auto& b) { return a.timestamp_ms < b.timestamp_ms; });
  const fs::path trace_path = out / "trace.csv";
  {
    std::ofstream os(trace_path);
    write_batch_csv(os, trace, space, scenario.service.metrics);
  }
  CHECK_THROWS_AS(load_replay_batches(trace_path, space, 2000), SchemaError);
}

TEST_CASE("inspect_model reports edges and CPT rows") {
  const auto out = temp_dir("inspect");

  // Fixture model with the three canonical edges.
  const auto scenario = make_builtin_scenario("CV", "AGX+", 2);
  Dag dag;
  dag.nodes = make_variable_table(scenario.service.space, scenario.service.slos);
  dag.edges = {{"pixel", "time"}, {"fps", "time"}, {"fps", "energy"}};
  Dataset data;
  data.variables = dag.nodes;
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    std::vector<int> row;
    for (const auto& v : dag.nodes)
      row.push_back(static_cast<int>(rng.uniform_below(v.states.size())));
    data.rows.push_back(std::move(row));
  }
  const auto model = fit_parameters(dag, data, 1.0);
  const fs::path model_path = out / "model.json";
  save_model(model, model_path);

  const auto report = inspect_model(model_path);
  CHECK(report.text.find("pixel -> time") != std::string::npos);
  CHECK(report.text.find("fps -> time") != std::string::npos);
  CHECK(report.text.find("fps -> energy") != std::string::npos);
  CHECK(report.text.find("cpt time") != std::string::npos);
  CHECK(report.dot.find("\"fps\" -> \"energy\";") != std::string::npos);

  // Round-trip: loaded model carries exactly the same edges.
  const auto loaded = load_model(model_path);
  CHECK(loaded.dag.edges == model.dag.edges);
  CHECK(loaded.trained_on == model.trained_on);

  // Empty-edge model.
  Dag empty;
  empty.nodes = dag.nodes;
  const auto uniform = fit_parameters(empty, data, 1.0);
  const fs::path empty_path = out / "empty.json";
  save_model(uniform, empty_path);
  CHECK(inspect_model(empty_path).text.find("no dependencies learned") != std::string::npos);
}

TEST_CASE("suite of one matches the single experiment") {
  const auto out = temp_dir("suite1");
  const auto config = quick_config("QR", "NX-", 9, 6, out / "exp");
  const auto single = run_experiment(config);

  const auto rows = run_suite({config}, 1, out / "summary.csv");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].error.empty());
  CHECK(rows[0].service == "QR");
  CHECK(rows[0].device == "NX-");
  CHECK(rows[0].chosen == config_label(single.chosen, pixel_fps_space()));
  CHECK(rows[0].final_fulfillment == single.final_fulfillment);
  CHECK(fs::exists(out / "summary.csv"));
}

TEST_CASE("suite rows survive a failing experiment") {
  const auto out = temp_dir("suite_err");
  auto good = quick_config("QR", "AGX+", 1, 3, out / "good");
  ExperimentConfig bad;
  bad.service = "nope";
  bad.device = "AGX+";
  bad.cycle_count = 3;
  const auto rows = run_suite({good, bad}, 2, out / "summary.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK(!rows[1].error.empty());
}

TEST_CASE("experiment config JSON parsing") {
  const auto config = experiment_config_from_json(R"({
    "service": "CV", "device": "NX+", "seed": 7, "cycles": 25,
    "out": "results/cv", "hyper": {"w_pv": 3.0, "w_ig": 1.5, "relearn_period": 4}
  })");
  CHECK(config.service == "CV");
  CHECK(config.device == "NX+");
  CHECK(config.seed == 7);
  CHECK(config.cycle_count == 25);
  CHECK(config.hyper.w_pv == 3.0);
  CHECK(config.hyper.w_ig == 1.5);
  CHECK(config.hyper.structure_relearn_period == 4);
  CHECK(config.mode == ExperimentConfig::Mode::Simulate);

  CHECK_THROWS_AS(experiment_config_from_json(R"({"device":"NX+"})"), SchemaError);
  CHECK_THROWS_AS(experiment_config_from_json(R"({"service":"CV","device":"NX+","mode":"replay"})"),
                  SchemaError);
  CHECK_THROWS_AS(experiment_config_from_json("{nonsense"), IoError);

  const auto suite = suite_configs_from_json(R"({"experiments":[
    {"service":"CV","device":"AGX+"},{"service":"LI","device":"NX-","cycles":10}]})");
  REQUIRE(suite.size() == 2);
  CHECK(suite[1].cycle_count == 10);
}

TEST_CASE("scenario_slug is filesystem friendly") {
  CHECK(scenario_slug("CV", "NX+") == "cv_nx_plus");
  CHECK(scenario_slug("LI", "AGX-") == "li_agx_minus");
}

TEST_CASE("default_suite covers all twelve scenarios") {
  const auto configs = default_suite(1, 40, "");
  CHECK(configs.size() == 12);
}
