#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "aifstream/domain.hpp"
#include "aifstream/slo.hpp"

namespace aifstream {

enum class VariableKind { Parameter, SloIndicator };

/// SloIndicator variables always have exactly these two states, in this order.
inline const std::vector<std::string>& indicator_states() {
  static const std::vector<std::string> states = {"violated", "fulfilled"};
  return states;
}

struct VariableDef {
  std::string name;
  VariableKind kind = VariableKind::Parameter;
  std::vector<std::string> states;

  int index_of(const std::string& state) const;
  bool operator==(const VariableDef& other) const = default;
};

/// Directed acyclic graph over named variables. Parameter nodes are
/// exogenous: no edge may terminate at one.
struct Dag {
  std::vector<VariableDef> nodes;
  std::set<std::pair<std::string, std::string>> edges; // (parent, child)

  int node_index(const std::string& name) const;
  const VariableDef& node(const std::string& name) const;
  std::vector<std::string> parents_of(const std::string& child) const;
  bool has_edge(const std::string& parent, const std::string& child) const {
    return edges.count({parent, child}) > 0;
  }
  bool is_acyclic() const;

  /// Node names in a deterministic topological order (stable within ties).
  std::vector<std::string> topological_order() const;

  /// Throws SchemaError if the edge set references unknown nodes, contains a
  /// self-loop, points into a Parameter node, or creates a cycle.
  void validate() const;
};

/// Conditional probability table of one node. Rows are indexed by the
/// mixed-radix combination of parent states (parent_order, most significant
/// first). Raw counts are kept so posterior updates stay exact.
struct Cpt {
  std::string node;
  std::vector<std::string> parent_order;
  std::size_t state_count = 0;
  std::size_t combo_count = 1;
  std::vector<double> probs;  // combo_count * state_count, rows sum to 1
  std::vector<double> counts; // same shape, raw observation counts

  double prob(std::size_t combo, std::size_t state) const {
    return probs[combo * state_count + state];
  }
};

/// The agent's internal model: DAG + one CPT per node.
struct GenerativeModel {
  Dag dag;
  std::vector<Cpt> cpts; // aligned with dag.nodes
  std::size_t trained_on = 0;

  const Cpt& cpt(const std::string& node) const;
};

/// A complete assignment of every model variable to a state label.
struct ObservationRow {
  std::map<std::string, std::string> assignment;
};

/// Rows stored as state indices against a shared variable table.
struct Dataset {
  std::vector<VariableDef> variables;
  std::vector<std::vector<int>> rows; // each row: one state index per variable

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  int variable_index(const std::string& name) const;

  /// Appends a row given as name -> state label; throws SchemaError on
  /// unknown variables or states or incomplete assignments.
  void add_row(const ObservationRow& row);
  void append(const Dataset& other);
  ObservationRow row_at(std::size_t i) const;
};

/// Variable table used by the agent: parameters in space order, then one
/// boolean indicator per SLO.
std::vector<VariableDef> make_variable_table(const ParameterSpace& space,
                                             const std::vector<SloSpec>& slos);

/// One row per sample: parameter states from the batch configuration, each
/// SLO indicator set from the per-sample fulfillment check.
Dataset discretize_batch(const MetricBatch& batch, const std::vector<SloSpec>& slos,
                         const ParameterSpace& space);

/// Edges that structure search must never add. Edges into Parameter nodes
/// are always forbidden regardless of the explicit list.
struct EdgeBlacklist {
  std::set<std::pair<std::string, std::string>> edges;
  bool forbids(const Dag& dag, const std::string& parent, const std::string& child) const;
};

/// BIC = max log-likelihood - (ln N / 2) * free parameter count.
double bic_score(const Dag& dag, const Dataset& data);

/// Greedy hill climbing from the empty graph over add/remove/reverse moves,
/// first-improvement with lexicographic move order; deterministic.
Dag learn_structure(const Dataset& data, const EdgeBlacklist& blacklist = {});

/// Laplace-smoothed CPTs: (count + pseudocount) / (combo total + pseudocount
/// * state count). Unseen parent combinations yield uniform rows.
GenerativeModel fit_parameters(const Dag& dag, const Dataset& data, double pseudocount);

/// Accumulates counts of `fresh` into the model; equivalent to refitting on
/// the concatenation of everything seen so far.
GenerativeModel update_parameters(const GenerativeModel& model, const Dataset& fresh,
                                  double pseudocount);

/// Exact joint posterior over query variables given evidence.
struct JointDistribution {
  std::vector<std::string> variables;              // model order
  std::vector<std::vector<std::string>> states;    // per variable
  std::vector<double> probs;                       // mixed-radix over states

  double prob_of(const std::map<std::string, std::string>& assignment) const;
};

/// Variable elimination; matches brute-force full-joint enumeration.
JointDistribution infer(const GenerativeModel& model,
                        const std::vector<std::string>& query,
                        const std::map<std::string, std::string>& evidence);

/// -ln P(row | model) from the DAG factorization; finite because fitted CPTs
/// have no zero entries.
double row_surprise(const GenerativeModel& model, const ObservationRow& row);
double row_surprise(const GenerativeModel& model, const Dataset& data, std::size_t row);

/// Sum of row surprises.
double batch_surprise(const GenerativeModel& model, const Dataset& data);

/// Ancestral sampling in topological order; deterministic for a fixed seed.
Dataset sample_model(const GenerativeModel& model, std::size_t n, std::uint64_t seed);

/// GraphViz text, one line per edge; orphan nodes are listed too.
std::string dag_to_dot(const Dag& dag);

} // namespace aifstream
