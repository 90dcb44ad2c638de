#include <doctest.h>

#include <cmath>

#include "aifstream/bayesnet.hpp"
#include "aifstream/rng.hpp"
#include "test_support.hpp"

using namespace aifstream;
using namespace aifstream::testing;

namespace {

VariableDef binary(const std::string& name, VariableKind kind = VariableKind::SloIndicator) {
  VariableDef def;
  def.name = name;
  def.kind = kind;
  def.states = indicator_states();
  return def;
}

Dataset single_binary_dataset(int fulfilled, int violated) {
  Dataset data;
  data.variables = {binary("x")};
  for (int i = 0; i < violated; ++i) data.rows.push_back({0});
  for (int i = 0; i < fulfilled; ++i) data.rows.push_back({1});
  return data;
}

} // namespace

TEST_CASE("bic_score matches the hand computation on a single binary node") {
  const Dataset data = single_binary_dataset(4, 4);
  Dag dag;
  dag.nodes = data.variables;
  // 8 * ln(0.5) - ln(8)/2
  const double expected = 8.0 * std::log(0.5) - 0.5 * std::log(8.0);
  CHECK(bic_score(dag, data) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(bic_score(dag, data) == doctest::Approx(-6.58489821531948).epsilon(1e-9));
}

TEST_CASE("bic_score penalizes an edge between independent variables") {
  // Two independent binary variables sampled from an edgeless model.
  Dag dag;
  dag.nodes = {binary("a"), binary("b")};
  const auto model = make_model(dag, {{"a", {0.3, 0.7}}, {"b", {0.6, 0.4}}});
  const Dataset data = sample_model(model, 10000, 99);

  Dag with_edge = dag;
  with_edge.edges.insert({"a", "b"});
  CHECK(bic_score(dag, data) > bic_score(with_edge, data));
}

TEST_CASE("bic_score is invariant under row permutation") {
  Rng rng(3);
  Dag dag;
  dag.nodes = {binary("a"), binary("b")};
  dag.edges.insert({"a", "b"});
  Dataset data;
  data.variables = dag.nodes;
  for (int i = 0; i < 200; ++i) {
    data.rows.push_back({static_cast<int>(rng.uniform_below(2)),
                         static_cast<int>(rng.uniform_below(2))});
  }
  const double base = bic_score(dag, data);
  for (std::size_t i = data.rows.size(); i > 1; --i)
    std::swap(data.rows[i - 1], data.rows[rng.uniform_below(i)]);
  CHECK(bic_score(dag, data) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("learn_structure recovers strong dependencies") {
  // Ground truth: pixel -> time, fps -> time, fps -> energy.
  Dag truth;
  VariableDef pixel;
  pixel.name = "pixel";
  pixel.kind = VariableKind::Parameter;
  pixel.states = {"480", "720", "1080"};
  VariableDef fps;
  fps.name = "fps";
  fps.kind = VariableKind::Parameter;
  fps.states = {"5", "10", "15", "20", "25"};
  truth.nodes = {pixel, fps, binary("time"), binary("energy")};
  truth.edges = {{"pixel", "time"}, {"fps", "time"}, {"fps", "energy"}};

  std::map<std::string, std::vector<double>> tables;
  tables["pixel"] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  tables["fps"] = {0.2, 0.2, 0.2, 0.2, 0.2};
  // time fulfilled only when pixel small and fps small (strong and sharp).
  std::vector<double> time_table;
  for (int px = 0; px < 3; ++px) {
    for (int f = 0; f < 5; ++f) {
      const double p_ok = (px + f < 3) ? 0.95 : 0.05;
      time_table.push_back(1.0 - p_ok);
      time_table.push_back(p_ok);
    }
  }
  tables["time"] = time_table;
  std::vector<double> energy_table;
  for (int f = 0; f < 5; ++f) {
    const double p_ok = f < 2 ? 0.97 : 0.1;
    energy_table.push_back(1.0 - p_ok);
    energy_table.push_back(p_ok);
  }
  tables["energy"] = energy_table;

  const auto model = make_model(truth, tables);
  const Dataset data = sample_model(model, 10000, 7);
  const Dag learned = learn_structure(data);

  // Skeleton check: undirected versions of the true edges must be present.
  const auto has_skeleton_edge = [&](const std::string& a, const std::string& b) {
    return learned.has_edge(a, b) || learned.has_edge(b, a);
  };
  CHECK(has_skeleton_edge("pixel", "time"));
  CHECK(has_skeleton_edge("fps", "time"));
  CHECK(has_skeleton_edge("fps", "energy"));

  for (const auto& [p, c] : learned.edges) {
    (void)p;
    CHECK(learned.node(c).kind != VariableKind::Parameter);
  }
  CHECK(learned.is_acyclic());

  Dag empty;
  empty.nodes = data.variables;
  CHECK(bic_score(learned, data) >= bic_score(empty, data));
}

TEST_CASE("learn_structure on a single variable yields no edges") {
  const Dataset data = single_binary_dataset(5, 3);
  const Dag learned = learn_structure(data);
  CHECK(learned.edges.empty());
}

TEST_CASE("fit_parameters applies Laplace smoothing") {
  const Dataset data = single_binary_dataset(9, 1);
  Dag dag;
  dag.nodes = data.variables;
  const auto model = fit_parameters(dag, data, 1.0);
  CHECK(model.cpt("x").prob(0, 1) == doctest::Approx(10.0 / 12.0).epsilon(1e-12));
  CHECK(model.cpt("x").prob(0, 0) == doctest::Approx(2.0 / 12.0).epsilon(1e-12));
  CHECK(model.trained_on == 10);
}

TEST_CASE("unseen parent combinations fall back to uniform") {
  Dag dag;
  dag.nodes = {binary("a"), binary("b")};
  dag.edges.insert({"a", "b"});
  Dataset data;
  data.variables = dag.nodes;
  data.rows = {{0, 0}, {0, 1}}; // a=violated only; a=fulfilled never seen
  const auto model = fit_parameters(dag, data, 1.0);
  CHECK(model.cpt("b").prob(1, 0) == 0.5);
  CHECK(model.cpt("b").prob(1, 1) == 0.5);
}

TEST_CASE("tiny pseudocount recovers empirical frequencies") {
  const Dataset data = single_binary_dataset(30, 10);
  Dag dag;
  dag.nodes = data.variables;
  const auto model = fit_parameters(dag, data, 1e-9);
  CHECK(model.cpt("x").prob(0, 1) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("update_parameters equals refitting on the concatenation") {
  Rng rng(11);
  Dag dag;
  dag.nodes = {binary("a"), binary("b")};
  dag.edges.insert({"a", "b"});

  Dataset part_a, part_b, all;
  part_a.variables = dag.nodes;
  part_b.variables = dag.nodes;
  all.variables = dag.nodes;
  for (int i = 0; i < 50; ++i) {
    std::vector<int> row = {static_cast<int>(rng.uniform_below(2)),
                            static_cast<int>(rng.uniform_below(2))};
    (i < 30 ? part_a : part_b).rows.push_back(row);
    all.rows.push_back(row);
  }

  const auto incremental = update_parameters(fit_parameters(dag, part_a, 1.0), part_b, 1.0);
  const auto refit = fit_parameters(dag, all, 1.0);
  REQUIRE(incremental.trained_on == refit.trained_on);
  for (std::size_t n = 0; n < incremental.cpts.size(); ++n) {
    for (std::size_t k = 0; k < incremental.cpts[n].probs.size(); ++k) {
      CHECK(incremental.cpts[n].probs[k] ==
            doctest::Approx(refit.cpts[n].probs[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("update with an empty dataset leaves the model unchanged") {
  const Dataset data = single_binary_dataset(4, 4);
  Dag dag;
  dag.nodes = data.variables;
  const auto model = fit_parameters(dag, data, 1.0);
  Dataset empty;
  empty.variables = dag.nodes;
  const auto updated = update_parameters(model, empty, 1.0);
  CHECK(updated.trained_on == model.trained_on);
  CHECK(updated.cpts[0].probs == model.cpts[0].probs);
}

TEST_CASE("repeated identical rows drive the probability toward one") {
  Dag dag;
  dag.nodes = {binary("x")};
  auto model = fit_parameters(dag, single_binary_dataset(1, 0), 1.0);
  double last = model.cpt("x").prob(0, 1);
  for (int step = 0; step < 6; ++step) {
    model = update_parameters(model, single_binary_dataset(5, 0), 1.0);
    const double p = model.cpt("x").prob(0, 1);
    CHECK(p > last);
    last = p;
  }
  CHECK(last > 0.9);
}

TEST_CASE("update rejects mismatched variables") {
  const Dataset data = single_binary_dataset(2, 2);
  Dag dag;
  dag.nodes = data.variables;
  const auto model = fit_parameters(dag, data, 1.0);
  Dataset other;
  other.variables = {binary("y")};
  other.rows = {{0}};
  CHECK_THROWS_AS(update_parameters(model, other, 1.0), SchemaError);
}

TEST_CASE("infer returns the marginal CPT of a root without evidence") {
  Dag dag;
  dag.nodes = {binary("a"), binary("b")};
  dag.edges.insert({"a", "b"});
  const auto model =
      make_model(dag, {{"a", {0.25, 0.75}}, {"b", {0.9, 0.1, 0.2, 0.8}}});
  const auto dist = infer(model, {"a"}, {});
  CHECK(dist.prob_of({{"a", "violated"}}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(dist.prob_of({{"a", "fulfilled"}}) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("infer with all parents fixed returns the CPT row") {
  Dag dag;
  dag.nodes = {binary("a"), binary("b"), binary("c")};
  dag.edges = {{"a", "c"}, {"b", "c"}};
  std::vector<double> c_table = {0.9, 0.1, 0.6, 0.4, 0.3, 0.7, 0.05, 0.95};
  const auto model = make_model(
      dag, {{"a", {0.5, 0.5}}, {"b", {0.4, 0.6}}, {"c", c_table}});
  const auto dist = infer(model, {"c"}, {{"a", "fulfilled"}, {"b", "violated"}});
  CHECK(dist.prob_of({{"c", "violated"}}) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(dist.prob_of({{"c", "fulfilled"}}) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("infer matches full-joint enumeration on a hand-built net") {
  Dag dag;
  VariableDef fps;
  fps.name = "fps";
  fps.kind = VariableKind::Parameter;
  fps.states = {"5", "10", "15"};
  dag.nodes = {fps, binary("time"), binary("energy")};
  dag.edges = {{"fps", "time"}, {"fps", "energy"}, {"time", "energy"}};

  std::map<std::string, std::vector<double>> tables;
  tables["fps"] = {0.2, 0.5, 0.3};
  tables["time"] = {0.1, 0.9, 0.4, 0.6, 0.8, 0.2};
  // energy | fps (3) x time (2)
  tables["energy"] = {0.2, 0.8, 0.3, 0.7, 0.5, 0.5, 0.6, 0.4, 0.9, 0.1, 0.95, 0.05};
  const auto model = make_model(dag, tables);

  const auto dist = infer(model, {"time"}, {{"fps", "5"}});
  const auto oracle = brute_force_posterior(model, {"time"}, {{"fps", "5"}});
  CHECK(dist.prob_of({{"time", "fulfilled"}}) ==
        doctest::Approx(oracle.at({{"time", "fulfilled"}})).epsilon(1e-12));

  const auto joint = infer(model, {"time", "energy"}, {{"fps", "10"}});
  const auto joint_oracle = brute_force_posterior(model, {"time", "energy"}, {{"fps", "10"}});
  for (const auto& [key, p] : joint_oracle) {
    CHECK(joint.prob_of(key) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("infer agrees with enumeration on randomized networks") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto model = random_model(rng);
    const auto [query, evidence] = random_query_evidence(model, rng);
    const auto dist = infer(model, query, evidence);
    const auto oracle = brute_force_posterior(model, query, evidence);
    double sum = 0.0;
    for (const auto& [key, p] : oracle) {
      CHECK(dist.prob_of(key) == doctest::Approx(p).epsilon(1e-9));
      sum += dist.prob_of(key);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("infer rejects unknown variables and overlapping query/evidence") {
  Dag dag;
  dag.nodes = {binary("a")};
  const auto model = make_model(dag, {{"a", {0.5, 0.5}}});
  CHECK_THROWS_AS(infer(model, {"nope"}, {}), SchemaError);
  CHECK_THROWS_AS(infer(model, {"a"}, {{"a", "fulfilled"}}), SchemaError);
}

TEST_CASE("row_surprise basics") {
  Dag dag;
  dag.nodes = {binary("x")};
  const auto certain = make_model(dag, {{"x", {0.0, 1.0}}});
  ObservationRow row;
  row.assignment["x"] = "fulfilled";
  CHECK(row_surprise(certain, row) == 0.0);

  const double p = std::exp(-2.0);
  const auto exp_model = make_model(dag, {{"x", {1.0 - p, p}}});
  CHECK(row_surprise(exp_model, row) == doctest::Approx(2.0).epsilon(1e-12));

  // Two factors 0.8 * 0.5 -> -ln 0.4.
  Dag dag2;
  dag2.nodes = {binary("a"), binary("b")};
  dag2.edges.insert({"a", "b"});
  const auto model2 =
      make_model(dag2, {{"a", {0.2, 0.8}}, {"b", {0.9, 0.1, 0.5, 0.5}}});
  ObservationRow row2;
  row2.assignment["a"] = "fulfilled";
  row2.assignment["b"] = "fulfilled";
  CHECK(row_surprise(model2, row2) == doctest::Approx(0.916290731874155).epsilon(1e-12));
}

TEST_CASE("batch_surprise adds row surprises") {
  Dag dag;
  dag.nodes = {binary("x")};
  const auto model = make_model(dag, {{"x", {0.5, 0.5}}});
  // Row prob 0.5 each; second model for {0.25}: use two rows under one model
  // with different states instead.
  const auto model2 = make_model(dag, {{"x", {0.75, 0.25}}});

  Dataset rows;
  rows.variables = dag.nodes;
  rows.rows = {{1}};
  CHECK(batch_surprise(model, rows) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(batch_surprise(model2, rows) == doctest::Approx(std::log(4.0)).epsilon(1e-12));

  // ln 2 + ln 4 = ln 8.
  CHECK(batch_surprise(model, rows) + batch_surprise(model2, rows) ==
        doctest::Approx(2.0794415416798357).epsilon(1e-12));

  Dataset empty;
  empty.variables = dag.nodes;
  CHECK_THROWS_AS(batch_surprise(model, empty), EmptyBatchError);
}

TEST_CASE("batch_surprise decomposes over concatenation") {
  Rng rng(5);
  const auto model = random_model(rng, 4, 3);
  const Dataset d1 = sample_model(model, 40, 1);
  const Dataset d2 = sample_model(model, 25, 2);
  Dataset all = d1;
  all.append(d2);
  CHECK(batch_surprise(model, all) ==
        doctest::Approx(batch_surprise(model, d1) + batch_surprise(model, d2)).epsilon(1e-9));
}

TEST_CASE("row_surprise is non-negative on fitted models") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto truth = random_model(rng, 4, 3);
    const Dataset data = sample_model(truth, 200, static_cast<std::uint64_t>(trial));
    const Dag learned = learn_structure(data);
    const auto fitted = fit_parameters(learned, data, 1.0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      CHECK(row_surprise(fitted, data, i) >= 0.0);
    }
  }
}

TEST_CASE("sample_model determinism and convergence") {
  Dag dag;
  dag.nodes = {binary("x")};
  const auto det = make_model(dag, {{"x", {0.0, 1.0}}});
  const Dataset one = sample_model(det, 1, 123);
  REQUIRE(one.size() == 1);
  CHECK(one.rows[0][0] == 1);

  const auto fair = make_model(dag, {{"x", {0.3, 0.7}}});
  const Dataset a = sample_model(fair, 1000, 42);
  const Dataset b = sample_model(fair, 1000, 42);
  CHECK(a.rows == b.rows);

  const Dataset big = sample_model(fair, 100000, 77);
  double freq = 0.0;
  for (const auto& row : big.rows) freq += row[0];
  freq /= static_cast<double>(big.size());
  CHECK(freq == doctest::Approx(0.7).epsilon(0.015));
}

TEST_CASE("every fitted CPT row sums to one with positive entries") {
  Rng rng(31);
  const auto truth = random_model(rng, 5, 4);
  const Dataset data = sample_model(truth, 500, 9);
  const auto model = fit_parameters(learn_structure(data), data, 1.0);
  for (const auto& cpt : model.cpts) {
    for (std::size_t combo = 0; combo < cpt.combo_count; ++combo) {
      double sum = 0.0;
      for (std::size_t s = 0; s < cpt.state_count; ++s) {
        CHECK(cpt.prob(combo, s) > 0.0);
        sum += cpt.prob(combo, s);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("dag_to_dot lists nodes and edges") {
  Dag dag;
  dag.nodes = {binary("a"), binary("b")};
  dag.edges.insert({"a", "b"});
  const std::string dot = dag_to_dot(dag);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"a\" -> \"b\";") != std::string::npos);
}

TEST_CASE("dag validation") {
  Dag dag;
  VariableDef param;
  param.name = "p";
  param.kind = VariableKind::Parameter;
  param.states = {"0", "1"};
  dag.nodes = {param, binary("s")};

  Dag into_param = dag;
  into_param.edges.insert({"s", "p"});
  CHECK_THROWS_AS(into_param.validate(), SchemaError);

  Dag cyclic;
  cyclic.nodes = {binary("a"), binary("b")};
  cyclic.edges = {{"a", "b"}, {"b", "a"}};
  CHECK_THROWS_AS(cyclic.validate(), SchemaError);
  CHECK(!cyclic.is_acyclic());
}
