#include "aifstream/bayesnet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aifstream/rng.hpp"

namespace aifstream {

int VariableDef::index_of(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return static_cast<int>(i);
  }
  return -1;
}

int Dag::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

const VariableDef& Dag::node(const std::string& name) const {
  const int i = node_index(name);
  if (i < 0) throw SchemaError("unknown variable: " + name);
  return nodes[static_cast<std::size_t>(i)];
}

std::vector<std::string> Dag::parents_of(const std::string& child) const {
  // Parents reported in node-table order so CPT layouts are deterministic.
  std::vector<std::string> parents;
  for (const auto& n : nodes) {
    if (edges.count({n.name, child})) parents.push_back(n.name);
  }
  return parents;
}

std::vector<std::string> Dag::topological_order() const {
  std::vector<int> indegree(nodes.size(), 0);
  for (const auto& [p, c] : edges) {
    (void)p;
    ++indegree[static_cast<std::size_t>(node_index(c))];
  }
  std::vector<std::string> order;
  std::vector<bool> emitted(nodes.size(), false);
  while (order.size() < nodes.size()) {
    bool progressed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (emitted[i] || indegree[i] != 0) continue;
      emitted[i] = true;
      progressed = true;
      order.push_back(nodes[i].name);
      for (const auto& [p, c] : edges) {
        if (p == nodes[i].name) --indegree[static_cast<std::size_t>(node_index(c))];
      }
    }
    if (!progressed) throw SchemaError("graph contains a cycle");
  }
  return order;
}

bool Dag::is_acyclic() const {
  try {
    (void)topological_order();
    return true;
  } catch (const SchemaError&) {
    return false;
  }
}

void Dag::validate() const {
  for (const auto& [p, c] : edges) {
    if (node_index(p) < 0 || node_index(c) < 0)
      throw SchemaError("edge references unknown node: " + p + " -> " + c);
    if (p == c) throw SchemaError("self-loop on node " + p);
    if (node(c).kind == VariableKind::Parameter)
      throw SchemaError("edge into parameter node " + c);
  }
  if (!is_acyclic()) throw SchemaError("graph contains a cycle");
}

const Cpt& GenerativeModel::cpt(const std::string& node) const {
  const int i = dag.node_index(node);
  if (i < 0) throw SchemaError("unknown variable: " + node);
  return cpts[static_cast<std::size_t>(i)];
}

int Dataset::variable_index(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

void Dataset::add_row(const ObservationRow& row) {
  if (row.assignment.size() != variables.size())
    throw SchemaError("observation row does not cover all variables");
  std::vector<int> indices(variables.size());
  for (std::size_t i = 0; i < variables.size(); ++i) {
    auto it = row.assignment.find(variables[i].name);
    if (it == row.assignment.end())
      throw SchemaError("observation row misses variable '" + variables[i].name + "'");
    const int s = variables[i].index_of(it->second);
    if (s < 0)
      throw SchemaError("unknown state '" + it->second + "' for variable '" +
                        variables[i].name + "'");
    indices[i] = s;
  }
  rows.push_back(std::move(indices));
}

void Dataset::append(const Dataset& other) {
  if (!(other.variables == variables))
    throw SchemaError("datasets have different variable tables");
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

ObservationRow Dataset::row_at(std::size_t i) const {
  ObservationRow row;
  for (std::size_t v = 0; v < variables.size(); ++v) {
    row.assignment[variables[v].name] =
        variables[v].states[static_cast<std::size_t>(rows.at(i)[v])];
  }
  return row;
}

std::vector<VariableDef> make_variable_table(const ParameterSpace& space,
                                             const std::vector<SloSpec>& slos) {
  std::vector<VariableDef> table;
  for (const auto& spec : space.specs) {
    VariableDef def;
    def.name = spec.name;
    def.kind = VariableKind::Parameter;
    for (const auto& st : spec.states) def.states.push_back(st.label);
    table.push_back(std::move(def));
  }
  for (const auto& slo : slos) {
    VariableDef def;
    def.name = slo.name;
    def.kind = VariableKind::SloIndicator;
    def.states = indicator_states();
    table.push_back(std::move(def));
  }
  return table;
}

Dataset discretize_batch(const MetricBatch& batch, const std::vector<SloSpec>& slos,
                         const ParameterSpace& space) {
  batch.validate(space);
  Dataset data;
  data.variables = make_variable_table(space, slos);
  for (const auto& sample : batch.samples) {
    ObservationRow row;
    for (const auto& spec : space.specs)
      row.assignment[spec.name] = sample.config.at(spec.name);
    for (const auto& slo : slos) {
      row.assignment[slo.name] =
          sample_fulfills(sample, slo, space) ? "fulfilled" : "violated";
    }
    data.add_row(row);
  }
  return data;
}

bool EdgeBlacklist::forbids(const Dag& dag, const std::string& parent,
                            const std::string& child) const {
  if (dag.node(child).kind == VariableKind::Parameter) return true;
  return edges.count({parent, child}) > 0;
}

namespace {

// Mixed-radix parent-combination index for one row, most significant parent
// first (parent_order order).
std::size_t combo_of_row(const std::vector<int>& row, const std::vector<int>& parent_vars,
                         const std::vector<std::size_t>& parent_card) {
  std::size_t combo = 0;
  for (std::size_t k = 0; k < parent_vars.size(); ++k) {
    combo = combo * parent_card[k] + static_cast<std::size_t>(row[parent_vars[k]]);
  }
  return combo;
}

struct LocalCounts {
  std::size_t combos = 1;
  std::size_t states = 0;
  std::vector<double> n; // combos * states
};

LocalCounts tally(const Dataset& data, int node, const std::vector<std::string>& parents) {
  LocalCounts lc;
  lc.states = data.variables[static_cast<std::size_t>(node)].states.size();
  std::vector<int> parent_vars;
  std::vector<std::size_t> parent_card;
  for (const auto& p : parents) {
    const int pi = data.variable_index(p);
    if (pi < 0) throw SchemaError("unknown parent variable: " + p);
    parent_vars.push_back(pi);
    parent_card.push_back(data.variables[static_cast<std::size_t>(pi)].states.size());
    lc.combos *= parent_card.back();
  }
  lc.n.assign(lc.combos * lc.states, 0.0);
  for (const auto& row : data.rows) {
    const std::size_t combo = combo_of_row(row, parent_vars, parent_card);
    lc.n[combo * lc.states + static_cast<std::size_t>(row[node])] += 1.0;
  }
  return lc;
}

// Max log-likelihood of one family minus its BIC penalty.
double local_bic(const Dataset& data, int node, const std::vector<std::string>& parents) {
  const LocalCounts lc = tally(data, node, parents);
  double log_l = 0.0;
  for (std::size_t combo = 0; combo < lc.combos; ++combo) {
    double total = 0.0;
    for (std::size_t s = 0; s < lc.states; ++s) total += lc.n[combo * lc.states + s];
    if (total == 0.0) continue;
    for (std::size_t s = 0; s < lc.states; ++s) {
      const double n = lc.n[combo * lc.states + s];
      if (n > 0.0) log_l += n * std::log(n / total);
    }
  }
  const double free_params =
      static_cast<double>(lc.combos) * static_cast<double>(lc.states - 1);
  const double penalty =
      0.5 * std::log(static_cast<double>(data.size())) * free_params;
  return log_l - penalty;
}

} // namespace

double bic_score(const Dag& dag, const Dataset& data) {
  if (data.empty()) throw EmptyBatchError("BIC needs a non-empty dataset");
  double score = 0.0;
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    score += local_bic(data, static_cast<int>(i), dag.parents_of(dag.nodes[i].name));
  }
  return score;
}

Dag learn_structure(const Dataset& data, const EdgeBlacklist& blacklist) {
  if (data.empty()) throw EmptyBatchError("structure learning needs data");
  Dag dag;
  dag.nodes = data.variables;

  const std::size_t n = dag.nodes.size();
  std::vector<double> local(n);
  for (std::size_t i = 0; i < n; ++i)
    local[i] = local_bic(data, static_cast<int>(i), {});

  // Candidate pairs in lexicographic node-name order, fixed for the run.
  std::vector<std::string> names;
  for (const auto& v : dag.nodes) names.push_back(v.name);
  std::sort(names.begin(), names.end());

  const double min_gain = 1e-9;
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& a : names) {
      for (const auto& b : names) {
        if (a == b) continue;
        const std::size_t bi = static_cast<std::size_t>(dag.node_index(b));
        const std::size_t ai = static_cast<std::size_t>(dag.node_index(a));
        if (!dag.has_edge(a, b)) {
          // Try adding a -> b.
          if (blacklist.forbids(dag, a, b)) continue;
          dag.edges.insert({a, b});
          if (!dag.is_acyclic()) {
            dag.edges.erase({a, b});
            continue;
          }
          const double cand = local_bic(data, static_cast<int>(bi), dag.parents_of(b));
          if (cand > local[bi] + min_gain) {
            local[bi] = cand;
            improved = true;
          } else {
            dag.edges.erase({a, b});
          }
        } else {
          // Try removing a -> b.
          dag.edges.erase({a, b});
          const double without = local_bic(data, static_cast<int>(bi), dag.parents_of(b));
          if (without > local[bi] + min_gain) {
            local[bi] = without;
            improved = true;
            continue;
          }
          // Try reversing to b -> a.
          if (!blacklist.forbids(dag, b, a)) {
            dag.edges.insert({b, a});
            if (dag.is_acyclic()) {
              const double cand_a =
                  local_bic(data, static_cast<int>(ai), dag.parents_of(a));
              const double cand_b = without;
              if (cand_a + cand_b > local[ai] + local[bi] + min_gain) {
                local[ai] = cand_a;
                local[bi] = cand_b;
                improved = true;
                continue;
              }
            }
            dag.edges.erase({b, a});
          }
          dag.edges.insert({a, b});
        }
      }
    }
  }
  return dag;
}

GenerativeModel fit_parameters(const Dag& dag, const Dataset& data, double pseudocount) {
  if (pseudocount <= 0.0) throw SchemaError("pseudocount must be positive");
  dag.validate();
  if (!(dag.nodes == data.variables) && !data.empty())
    throw SchemaError("dataset variables do not match the DAG");
  GenerativeModel model;
  model.dag = dag;
  model.trained_on = data.size();
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    const auto parents = dag.parents_of(dag.nodes[i].name);
    Cpt cpt;
    cpt.node = dag.nodes[i].name;
    cpt.parent_order = parents;
    cpt.state_count = dag.nodes[i].states.size();
    if (!data.empty()) {
      const LocalCounts lc = tally(data, static_cast<int>(i), parents);
      cpt.combo_count = lc.combos;
      cpt.counts = lc.n;
    } else {
      cpt.combo_count = 1;
      for (const auto& p : parents) cpt.combo_count *= dag.node(p).states.size();
      cpt.counts.assign(cpt.combo_count * cpt.state_count, 0.0);
    }
    cpt.probs.resize(cpt.counts.size());
    for (std::size_t combo = 0; combo < cpt.combo_count; ++combo) {
      double total = 0.0;
      for (std::size_t s = 0; s < cpt.state_count; ++s)
        total += cpt.counts[combo * cpt.state_count + s];
      const double denom = total + pseudocount * static_cast<double>(cpt.state_count);
      for (std::size_t s = 0; s < cpt.state_count; ++s) {
        cpt.probs[combo * cpt.state_count + s] =
            (cpt.counts[combo * cpt.state_count + s] + pseudocount) / denom;
      }
    }
    model.cpts.push_back(std::move(cpt));
  }
  return model;
}

GenerativeModel update_parameters(const GenerativeModel& model, const Dataset& fresh,
                                  double pseudocount) {
  if (pseudocount <= 0.0) throw SchemaError("pseudocount must be positive");
  if (!(fresh.variables == model.dag.nodes))
    throw SchemaError("update rows do not match the model's variables");
  GenerativeModel next = model;
  next.trained_on += fresh.size();
  if (fresh.empty()) return next;
  for (std::size_t i = 0; i < next.dag.nodes.size(); ++i) {
    Cpt& cpt = next.cpts[i];
    const LocalCounts lc = tally(fresh, static_cast<int>(i), cpt.parent_order);
    for (std::size_t k = 0; k < cpt.counts.size(); ++k) cpt.counts[k] += lc.n[k];
    for (std::size_t combo = 0; combo < cpt.combo_count; ++combo) {
      double total = 0.0;
      for (std::size_t s = 0; s < cpt.state_count; ++s)
        total += cpt.counts[combo * cpt.state_count + s];
      const double denom = total + pseudocount * static_cast<double>(cpt.state_count);
      for (std::size_t s = 0; s < cpt.state_count; ++s) {
        cpt.probs[combo * cpt.state_count + s] =
            (cpt.counts[combo * cpt.state_count + s] + pseudocount) / denom;
      }
    }
  }
  return next;
}

// ---------------------------------------------------------------------------
// Exact inference

namespace {

struct Factor {
  std::vector<int> vars;          // model node indices, ascending
  std::vector<std::size_t> card;  // per var
  std::vector<double> values;     // mixed-radix, vars[0] most significant

  std::size_t size() const { return values.size(); }
};

std::size_t flat_index(const Factor& f, const std::vector<int>& full_assignment) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    idx = idx * f.card[k] + static_cast<std::size_t>(full_assignment[f.vars[k]]);
  }
  return idx;
}

Factor multiply(const Factor& a, const Factor& b, const std::vector<std::size_t>& all_card) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  std::size_t total = 1;
  for (int v : out.vars) {
    out.card.push_back(all_card[static_cast<std::size_t>(v)]);
    total *= all_card[static_cast<std::size_t>(v)];
  }
  out.values.assign(total, 0.0);

  std::vector<int> assignment(all_card.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    for (std::size_t k = out.vars.size(); k-- > 0;) {
      assignment[out.vars[k]] = static_cast<int>(rem % out.card[k]);
      rem /= out.card[k];
    }
    out.values[i] = a.values[flat_index(a, assignment)] * b.values[flat_index(b, assignment)];
  }
  return out;
}

Factor sum_out(const Factor& f, int var, const std::vector<std::size_t>& all_card) {
  Factor out;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (f.vars[k] != var) {
      out.vars.push_back(f.vars[k]);
      out.card.push_back(f.card[k]);
    }
  }
  std::size_t total = 1;
  for (auto c : out.card) total *= c;
  out.values.assign(total, 0.0);

  std::vector<int> assignment(all_card.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t k = f.vars.size(); k-- > 0;) {
      assignment[f.vars[k]] = static_cast<int>(rem % f.card[k]);
      rem /= f.card[k];
    }
    out.values[flat_index(out, assignment)] += f.values[i];
  }
  return out;
}

Factor reduce(const Factor& f, int var, int state, const std::vector<std::size_t>& all_card) {
  Factor out;
  for (std::size_t k = 0; k < f.vars.size(); ++k) {
    if (f.vars[k] != var) {
      out.vars.push_back(f.vars[k]);
      out.card.push_back(f.card[k]);
    }
  }
  std::size_t total = 1;
  for (auto c : out.card) total *= c;
  out.values.assign(total, 0.0);

  std::vector<int> assignment(all_card.size(), 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t k = f.vars.size(); k-- > 0;) {
      assignment[f.vars[k]] = static_cast<int>(rem % f.card[k]);
      rem /= f.card[k];
    }
    if (assignment[var] != state) continue;
    out.values[flat_index(out, assignment)] += f.values[i];
  }
  return out;
}

Factor cpt_factor(const GenerativeModel& model, std::size_t node_idx,
                  const std::vector<std::size_t>& all_card) {
  const Cpt& cpt = model.cpts[node_idx];
  Factor f;
  std::vector<int> scope; // parents then node, CPT layout order
  for (const auto& p : cpt.parent_order) scope.push_back(model.dag.node_index(p));
  scope.push_back(static_cast<int>(node_idx));

  f.vars = scope;
  std::sort(f.vars.begin(), f.vars.end());
  std::size_t total = 1;
  for (int v : f.vars) {
    f.card.push_back(all_card[static_cast<std::size_t>(v)]);
    total *= all_card[static_cast<std::size_t>(v)];
  }
  f.values.assign(total, 0.0);

  std::vector<int> assignment(all_card.size(), 0);
  const std::size_t combos = cpt.combo_count * cpt.state_count;
  for (std::size_t i = 0; i < combos; ++i) {
    std::size_t rem = i;
    for (std::size_t k = scope.size(); k-- > 0;) {
      const std::size_t c = all_card[static_cast<std::size_t>(scope[k])];
      assignment[scope[k]] = static_cast<int>(rem % c);
      rem /= c;
    }
    f.values[flat_index(f, assignment)] = cpt.probs[i];
  }
  return f;
}

} // namespace

double JointDistribution::prob_of(const std::map<std::string, std::string>& assignment) const {
  if (assignment.size() != variables.size())
    throw SchemaError("assignment does not cover the distribution's variables");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < variables.size(); ++k) {
    auto it = assignment.find(variables[k]);
    if (it == assignment.end())
      throw SchemaError("assignment misses variable '" + variables[k] + "'");
    const auto& st = states[k];
    const auto pos = std::find(st.begin(), st.end(), it->second);
    if (pos == st.end())
      throw SchemaError("unknown state '" + it->second + "' for variable '" +
                        variables[k] + "'");
    idx = idx * st.size() + static_cast<std::size_t>(pos - st.begin());
  }
  return probs[idx];
}

JointDistribution infer(const GenerativeModel& model,
                        const std::vector<std::string>& query,
                        const std::map<std::string, std::string>& evidence) {
  const std::size_t n = model.dag.nodes.size();
  std::vector<std::size_t> all_card(n);
  for (std::size_t i = 0; i < n; ++i) all_card[i] = model.dag.nodes[i].states.size();

  if (query.empty()) throw SchemaError("query is empty");
  std::vector<int> query_idx;
  for (const auto& q : query) {
    const int qi = model.dag.node_index(q);
    if (qi < 0) throw SchemaError("unknown query variable: " + q);
    if (evidence.count(q)) throw SchemaError("variable '" + q + "' is both query and evidence");
    query_idx.push_back(qi);
  }
  std::sort(query_idx.begin(), query_idx.end());
  query_idx.erase(std::unique(query_idx.begin(), query_idx.end()), query_idx.end());

  std::vector<Factor> factors;
  for (std::size_t i = 0; i < n; ++i) factors.push_back(cpt_factor(model, i, all_card));

  // Absorb evidence by slicing.
  for (const auto& [name, state] : evidence) {
    const int vi = model.dag.node_index(name);
    if (vi < 0) throw SchemaError("unknown evidence variable: " + name);
    const int si = model.dag.nodes[static_cast<std::size_t>(vi)].index_of(state);
    if (si < 0)
      throw SchemaError("unknown state '" + state + "' for evidence variable '" + name + "'");
    for (auto& f : factors) {
      if (std::find(f.vars.begin(), f.vars.end(), vi) != f.vars.end())
        f = reduce(f, vi, si, all_card);
    }
  }

  // Variables to eliminate: everything not in the query, not evidence.
  std::set<int> to_eliminate;
  for (std::size_t i = 0; i < n; ++i) {
    const int vi = static_cast<int>(i);
    if (std::find(query_idx.begin(), query_idx.end(), vi) != query_idx.end()) continue;
    if (evidence.count(model.dag.nodes[i].name)) continue;
    to_eliminate.insert(vi);
  }

  while (!to_eliminate.empty()) {
    // Greedy: eliminate the variable whose product factor is smallest.
    int best = -1;
    std::size_t best_size = 0;
    for (int v : to_eliminate) {
      std::size_t size = 1;
      std::set<int> scope;
      for (const auto& f : factors) {
        if (std::find(f.vars.begin(), f.vars.end(), v) != f.vars.end())
          scope.insert(f.vars.begin(), f.vars.end());
      }
      for (int s : scope) size *= all_card[static_cast<std::size_t>(s)];
      if (best < 0 || size < best_size) {
        best = v;
        best_size = size;
      }
    }
    Factor prod;
    prod.values = {1.0};
    std::vector<Factor> rest;
    for (auto& f : factors) {
      if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end()) {
        prod = multiply(prod, f, all_card);
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(sum_out(prod, best, all_card));
    factors = std::move(rest);
    to_eliminate.erase(best);
  }

  Factor result;
  result.values = {1.0};
  for (const auto& f : factors) result = multiply(result, f, all_card);

  // Expand to cover any query variable that dropped out (cannot normally
  // happen, but keeps the contract airtight).
  for (int q : query_idx) {
    if (std::find(result.vars.begin(), result.vars.end(), q) == result.vars.end()) {
      Factor uniform;
      uniform.vars = {q};
      uniform.card = {all_card[static_cast<std::size_t>(q)]};
      uniform.values.assign(uniform.card[0], 1.0);
      result = multiply(result, uniform, all_card);
    }
  }

  double total = 0.0;
  for (double v : result.values) total += v;
  if (total <= 0.0) throw Error("inference produced a zero-mass distribution");

  JointDistribution dist;
  for (std::size_t k = 0; k < result.vars.size(); ++k) {
    const auto& node = model.dag.nodes[static_cast<std::size_t>(result.vars[k])];
    dist.variables.push_back(node.name);
    dist.states.push_back(node.states);
  }
  dist.probs.resize(result.size());
  for (std::size_t i = 0; i < result.size(); ++i) dist.probs[i] = result.values[i] / total;
  return dist;
}

double row_surprise(const GenerativeModel& model, const Dataset& data, std::size_t row) {
  if (!(data.variables == model.dag.nodes))
    throw SchemaError("dataset variables do not match the model");
  const auto& r = data.rows.at(row);
  double log_p = 0.0;
  for (std::size_t i = 0; i < model.cpts.size(); ++i) {
    const Cpt& cpt = model.cpts[i];
    std::vector<int> parent_vars;
    std::vector<std::size_t> parent_card;
    for (const auto& p : cpt.parent_order) {
      const int pi = model.dag.node_index(p);
      parent_vars.push_back(pi);
      parent_card.push_back(model.dag.nodes[static_cast<std::size_t>(pi)].states.size());
    }
    const std::size_t combo = combo_of_row(r, parent_vars, parent_card);
    log_p += std::log(cpt.prob(combo, static_cast<std::size_t>(r[i])));
  }
  const double surprise = -log_p;
  return surprise < 0.0 ? 0.0 : surprise; // guard against -0.0 and rounding
}

double row_surprise(const GenerativeModel& model, const ObservationRow& row) {
  Dataset tmp;
  tmp.variables = model.dag.nodes;
  tmp.add_row(row);
  return row_surprise(model, tmp, 0);
}

double batch_surprise(const GenerativeModel& model, const Dataset& data) {
  if (data.empty()) throw EmptyBatchError("surprise of an empty dataset is undefined");
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) total += row_surprise(model, data, i);
  return total;
}

Dataset sample_model(const GenerativeModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw SchemaError("sample count must be positive");
  Dataset data;
  data.variables = model.dag.nodes;
  const auto order = model.dag.topological_order();
  Rng rng(mix_seed(seed));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> row(model.dag.nodes.size(), -1);
    for (const auto& name : order) {
      const std::size_t vi = static_cast<std::size_t>(model.dag.node_index(name));
      const Cpt& cpt = model.cpts[vi];
      std::vector<int> parent_vars;
      std::vector<std::size_t> parent_card;
      for (const auto& p : cpt.parent_order) {
        const int pi = model.dag.node_index(p);
        parent_vars.push_back(pi);
        parent_card.push_back(model.dag.nodes[static_cast<std::size_t>(pi)].states.size());
      }
      const std::size_t combo = combo_of_row(row, parent_vars, parent_card);
      const double u = rng.uniform01();
      double acc = 0.0;
      int chosen = static_cast<int>(cpt.state_count) - 1;
      for (std::size_t s = 0; s < cpt.state_count; ++s) {
        acc += cpt.prob(combo, s);
        if (u < acc) {
          chosen = static_cast<int>(s);
          break;
        }
      }
      row[vi] = chosen;
    }
    data.rows.push_back(std::move(row));
  }
  return data;
}

std::string dag_to_dot(const Dag& dag) {
  std::ostringstream out;
  out << "digraph generative_model {\n";
  for (const auto& node : dag.nodes) {
    out << "  \"" << node.name << "\"";
    if (node.kind == VariableKind::Parameter) out << " [shape=box]";
    out << ";\n";
  }
  for (const auto& [p, c] : dag.edges) {
    out << "  \"" << p << "\" -> \"" << c << "\";\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace aifstream
