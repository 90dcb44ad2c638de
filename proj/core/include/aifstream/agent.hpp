#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aifstream/bayesnet.hpp"
#include "aifstream/domain.hpp"
#include "aifstream/rng.hpp"
#include "aifstream/slo.hpp"

namespace aifstream {

/// Running record for one grid configuration.
struct ConfigStats {
  std::size_t visit_count = 0;
  std::vector<double> surprise_history; // mean per-row surprise per visit
  std::optional<double> last_fulfillment;
};

enum class Provenance { Observed, Interpolated };

struct ScoreEntry {
  double pv = 0.0; // percent, [0, 100]
  double ig = 0.0; // percent, >= 0
  Provenance provenance = Provenance::Interpolated;
};

/// Scores over the whole grid, indexed by canonical configuration index.
/// Entries may be missing before interpolation.
struct ScoreMatrix {
  std::vector<std::optional<ScoreEntry>> entries;

  bool total() const;
  std::size_t observed_count() const;
};

struct AgentHyperparams {
  double w_pv = 2.0;
  double w_ig = 1.0;
  double pseudocount = 1.0;
  int structure_relearn_period = 10;
  std::int64_t window_ms = 2000;
  std::uint64_t seed = 0;
};

enum class Rationale { Observed, Interpolated, TieBreak };

std::string to_string(Rationale r);

struct Decision {
  int cycle = 0;
  Configuration chosen;
  double pv = 0.0;
  double ig = 0.0;
  double score = 0.0;
  double fulfillment_observed = 0.0;
  Rationale rationale = Rationale::Observed;
};

/// The full agent: generative model, per-configuration statistics, and the
/// decision history. Treat as a value; drive one instance sequentially.
struct AgentState {
  ParameterSpace space;
  std::vector<SloSpec> slos;
  AgentHyperparams hyper;

  GenerativeModel model;
  std::map<std::size_t, ConfigStats> stats; // by configuration index
  Dataset accumulated;                      // everything seen, for relearns
  Configuration current;
  int cycle = 0;
  std::vector<Decision> history;
  std::optional<FulfillmentReport> last_perceived;

  Rng rng{0};
};

/// Fresh agent: uniform model over the variable table, grid-midpoint initial
/// configuration, no history.
AgentState make_agent(const ParameterSpace& space, const std::vector<SloSpec>& slos,
                      const AgentHyperparams& hyper);

/// Grid midpoint: lower-median rank per parameter.
Configuration midpoint_config(const ParameterSpace& space);

/// 100 * P(every SLO indicator = fulfilled | parameters = config).
double compute_pv(const GenerativeModel& model, const Configuration& config,
                  const std::vector<SloSpec>& slos, const ParameterSpace& space);

/// 100 * median(config's surprise history) / median(all pooled surprises).
/// Throws DegenerateHistoryError when the global median is zero and
/// ColdStartError when the configuration has no history.
double compute_ig(const std::map<std::size_t, ConfigStats>& stats, std::size_t config_index);

/// Fills every missing entry from the nearest observed configurations:
/// inverse-distance weighted mean over all observed entries at minimal
/// Manhattan distance. Observed entries are never modified.
ScoreMatrix interpolate_scores(ScoreMatrix matrix, const ParameterSpace& space);

struct ActionChoice {
  std::size_t index = 0;
  bool tie_broken = false;
};

/// Argmax of w_pv * pv + w_ig * ig; exact ties are resolved uniformly at
/// random from `rng`.
ActionChoice select_action(const ScoreMatrix& matrix, const AgentHyperparams& hyper,
                           Rng& rng);

/// The score matrix act() would use right now (no RNG involved).
ScoreMatrix build_score_matrix(const AgentState& state);

/// Perception half of the cycle: evaluate fulfillment, record surprise under
/// the current model, update CPTs, periodically relearn the structure.
/// The state is untouched if an error is thrown.
void perceive(AgentState& state, const MetricBatch& batch);

/// Action half: score the grid, pick the best configuration, append a
/// Decision, advance the cycle counter.
Decision act(AgentState& state);

/// perceive followed by act; exactly one Decision per call.
Decision run_cycle(AgentState& state, const MetricBatch& batch);

/// Median with the usual even-length average; input is copied.
double median(std::vector<double> values);

} // namespace aifstream
