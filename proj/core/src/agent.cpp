#include "aifstream/agent.hpp"

#include <algorithm>
#include <cmath>

namespace aifstream {

bool ScoreMatrix::total() const {
  for (const auto& e : entries) {
    if (!e.has_value()) return false;
  }
  return !entries.empty();
}

std::size_t ScoreMatrix::observed_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) {
    if (e && e->provenance == Provenance::Observed) ++n;
  }
  return n;
}

std::string to_string(Rationale r) {
  switch (r) {
    case Rationale::Observed: return "observed";
    case Rationale::Interpolated: return "interpolated";
    case Rationale::TieBreak: return "tie_break";
  }
  return "unknown";
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty sequence");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Configuration midpoint_config(const ParameterSpace& space) {
  Configuration config;
  for (const auto& spec : space.specs) {
    config.assignment[spec.name] = spec.states[(spec.states.size() - 1) / 2].label;
  }
  return config;
}

AgentState make_agent(const ParameterSpace& space, const std::vector<SloSpec>& slos,
                      const AgentHyperparams& hyper) {
  space.validate();
  if (slos.empty()) throw SchemaError("agent needs at least one SLO");
  if (hyper.w_pv <= 0.0 || hyper.w_ig <= 0.0) throw SchemaError("score weights must be positive");
  if (hyper.pseudocount <= 0.0) throw SchemaError("pseudocount must be positive");
  if (hyper.structure_relearn_period < 1)
    throw SchemaError("structure_relearn_period must be at least 1");
  if (hyper.window_ms <= 0) throw SchemaError("window_ms must be positive");
  AgentState state;
  state.space = space;
  state.slos = slos;
  state.hyper = hyper;
  state.accumulated.variables = make_variable_table(space, slos);

  Dag dag;
  dag.nodes = state.accumulated.variables;
  state.model = fit_parameters(dag, Dataset{dag.nodes, {}}, hyper.pseudocount);
  state.model.trained_on = 0;

  state.current = midpoint_config(space);
  state.rng = Rng(mix_seed(hyper.seed, 0x61676e74ull)); // "agnt"
  return state;
}

double compute_pv(const GenerativeModel& model, const Configuration& config,
                  const std::vector<SloSpec>& slos, const ParameterSpace& space) {
  validate_configuration(config, space);
  std::vector<std::string> query;
  std::map<std::string, std::string> target;
  for (const auto& slo : slos) {
    query.push_back(slo.name);
    target[slo.name] = "fulfilled";
  }
  std::map<std::string, std::string> evidence;
  for (const auto& spec : space.specs) evidence[spec.name] = config.at(spec.name);
  const JointDistribution dist = infer(model, query, evidence);
  return 100.0 * dist.prob_of(target);
}

double compute_ig(const std::map<std::size_t, ConfigStats>& stats, std::size_t config_index) {
  auto it = stats.find(config_index);
  if (it == stats.end() || it->second.surprise_history.empty())
    throw ColdStartError("configuration has no surprise history");
  std::vector<double> pooled;
  for (const auto& [idx, cs] : stats) {
    (void)idx;
    pooled.insert(pooled.end(), cs.surprise_history.begin(), cs.surprise_history.end());
  }
  const double global = median(pooled);
  if (global <= 0.0)
    throw DegenerateHistoryError("global median surprise is zero");
  return 100.0 * median(it->second.surprise_history) / global;
}

ScoreMatrix interpolate_scores(ScoreMatrix matrix, const ParameterSpace& space) {
  const std::size_t n = space.grid_size();
  if (matrix.entries.size() != n)
    throw SchemaError("score matrix size does not match the grid");
  std::vector<std::size_t> observed;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix.entries[i]) observed.push_back(i);
  }
  if (observed.empty()) throw ColdStartError("no observed configurations to interpolate from");

  const auto grid = enumerate_configs(space);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix.entries[i]) continue;
    int dmin = -1;
    for (std::size_t o : observed) {
      const int d = neighbor_distance(grid[i], grid[o], space);
      if (dmin < 0 || d < dmin) dmin = d;
    }
    std::vector<std::size_t> contributors;
    for (std::size_t o : observed) {
      if (neighbor_distance(grid[i], grid[o], space) == dmin) contributors.push_back(o);
    }
    ScoreEntry e;
    e.provenance = Provenance::Interpolated;
    if (contributors.size() == 1) {
      // A unique nearest neighbour is copied verbatim.
      e.pv = matrix.entries[contributors.front()]->pv;
      e.ig = matrix.entries[contributors.front()]->ig;
    } else {
      double weight_sum = 0.0, pv = 0.0, ig = 0.0;
      for (std::size_t o : contributors) {
        const double w = 1.0 / static_cast<double>(dmin);
        weight_sum += w;
        pv += w * matrix.entries[o]->pv;
        ig += w * matrix.entries[o]->ig;
      }
      e.pv = pv / weight_sum;
      e.ig = ig / weight_sum;
    }
    matrix.entries[i] = e;
  }
  return matrix;
}

ActionChoice select_action(const ScoreMatrix& matrix, const AgentHyperparams& hyper,
                           Rng& rng) {
  if (!matrix.total()) throw SchemaError("score matrix must cover the whole grid");
  double best = 0.0;
  std::vector<std::size_t> argmax;
  for (std::size_t i = 0; i < matrix.entries.size(); ++i) {
    const double score = hyper.w_pv * matrix.entries[i]->pv + hyper.w_ig * matrix.entries[i]->ig;
    if (argmax.empty() || score > best) {
      best = score;
      argmax.assign(1, i);
    } else if (score == best) {
      argmax.push_back(i);
    }
  }
  ActionChoice choice;
  choice.tie_broken = argmax.size() > 1;
  choice.index = choice.tie_broken
                     ? argmax[static_cast<std::size_t>(rng.uniform_below(argmax.size()))]
                     : argmax.front();
  return choice;
}

ScoreMatrix build_score_matrix(const AgentState& state) {
  ScoreMatrix matrix;
  matrix.entries.resize(state.space.grid_size());

  // Detect a degenerate global median once; every visited entry then falls
  // back to the uniform ig.
  bool degenerate = false;
  {
    std::vector<double> pooled;
    for (const auto& [idx, cs] : state.stats) {
      (void)idx;
      pooled.insert(pooled.end(), cs.surprise_history.begin(), cs.surprise_history.end());
    }
    degenerate = !pooled.empty() && median(pooled) <= 0.0;
  }

  for (const auto& [idx, cs] : state.stats) {
    if (cs.visit_count == 0 || cs.surprise_history.empty()) continue;
    ScoreEntry e;
    e.pv = compute_pv(state.model, config_at(state.space, idx), state.slos, state.space);
    e.ig = degenerate ? 100.0 : compute_ig(state.stats, idx);
    e.provenance = Provenance::Observed;
    matrix.entries[idx] = e;
  }
  return matrix;
}

void perceive(AgentState& state, const MetricBatch& batch) {
  batch.validate(state.space);
  if (!(batch.samples.front().config == state.current))
    throw InvalidConfigError("batch was not captured under the agent's current configuration");

  // Everything that can throw happens before the state is touched.
  const FulfillmentReport report = batch_fulfillment(batch, state.slos, state.space);
  Dataset rows = discretize_batch(batch, state.slos, state.space);
  const double mean_surprise =
      batch_surprise(state.model, rows) / static_cast<double>(rows.size());

  const bool relearn = state.cycle % state.hyper.structure_relearn_period == 0;
  Dataset all = state.accumulated;
  all.append(rows);

  GenerativeModel next_model;
  if (relearn) {
    // The model class is bipartite: parameters are parents, indicators are
    // children. Indicator-to-indicator edges are never considered.
    EdgeBlacklist blacklist;
    for (const auto& parent : all.variables) {
      if (parent.kind != VariableKind::SloIndicator) continue;
      for (const auto& child : all.variables) {
        if (parent.name != child.name) blacklist.edges.insert({parent.name, child.name});
      }
    }
    const Dag dag = learn_structure(all, blacklist);
    next_model = fit_parameters(dag, all, state.hyper.pseudocount);
  } else {
    next_model = update_parameters(state.model, rows, state.hyper.pseudocount);
  }

  const std::size_t idx = config_index(state.space, state.current);
  ConfigStats& cs = state.stats[idx];
  cs.visit_count += 1;
  cs.surprise_history.push_back(mean_surprise);
  cs.last_fulfillment = report.overall;
  state.accumulated = std::move(all);
  state.model = std::move(next_model);
  state.last_perceived = report;
}

Decision act(AgentState& state) {
  Decision decision;
  decision.cycle = state.cycle;
  decision.fulfillment_observed =
      state.last_perceived ? state.last_perceived->overall : 0.0;

  if (state.stats.empty()) {
    // Cold start: nothing observed yet, take the grid midpoint under the
    // uniform priors.
    decision.chosen = midpoint_config(state.space);
    decision.pv = 50.0;
    decision.ig = 100.0;
    decision.rationale = Rationale::TieBreak;
  } else {
    const ScoreMatrix matrix = interpolate_scores(build_score_matrix(state), state.space);
    const ActionChoice choice = select_action(matrix, state.hyper, state.rng);
    const ScoreEntry& entry = *matrix.entries[choice.index];
    decision.chosen = config_at(state.space, choice.index);
    decision.pv = entry.pv;
    decision.ig = entry.ig;
    decision.rationale = choice.tie_broken ? Rationale::TieBreak
                         : entry.provenance == Provenance::Observed
                             ? Rationale::Observed
                             : Rationale::Interpolated;
  }
  decision.score = state.hyper.w_pv * decision.pv + state.hyper.w_ig * decision.ig;

  state.current = decision.chosen;
  state.history.push_back(decision);
  state.cycle += 1;
  return decision;
}

Decision run_cycle(AgentState& state, const MetricBatch& batch) {
  perceive(state, batch);
  return act(state);
}

} // namespace aifstream
