#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aifstream/errors.hpp"

namespace aifstream {

/// One discrete state of a tunable parameter. States that represent numbers
/// (fps, pixel height) carry their numeric value; categorical states (e.g.
/// a point-cloud mode) do not.
struct ParamState {
  std::string label;
  std::optional<double> numeric;
};

/// A tunable knob: ordered list of discrete states. The position of a state
/// in the list is its ordinal rank.
struct ParameterSpec {
  std::string name;
  std::vector<ParamState> states;

  /// Rank of a state label, or -1 if unknown.
  int rank_of(const std::string& label) const;
  const ParamState& state_at(std::size_t rank) const { return states.at(rank); }
  std::size_t state_count() const { return states.size(); }
};

/// The ordered grid of all tunable knobs.
struct ParameterSpace {
  std::vector<ParameterSpec> specs;

  const ParameterSpec* find(const std::string& name) const;
  const ParameterSpec& spec(const std::string& name) const;
  std::size_t grid_size() const;

  /// Throws SchemaError if names collide, a spec has no states, or state
  /// labels repeat within a spec.
  void validate() const;
};

/// One point in the parameter grid: parameter name -> state label.
struct Configuration {
  std::map<std::string, std::string> assignment;

  bool operator==(const Configuration& other) const = default;
  const std::string& at(const std::string& param) const;
};

/// Checks that `config` covers every spec of `space` exactly once with known
/// states; throws InvalidConfigError otherwise.
void validate_configuration(const Configuration& config, const ParameterSpace& space);

/// Full Cartesian product in lexicographic order of spec order and state
/// rank. Index 0..N-1 of the result is the canonical grid index.
std::vector<Configuration> enumerate_configs(const ParameterSpace& space);

/// Canonical grid index of a configuration (inverse of enumerate_configs).
std::size_t config_index(const ParameterSpace& space, const Configuration& config);

/// Configuration at a canonical grid index.
Configuration config_at(const ParameterSpace& space, std::size_t index);

/// Manhattan distance over ordinal ranks.
int neighbor_distance(const Configuration& a, const Configuration& b,
                      const ParameterSpace& space);

/// Sum of ordinal ranks; used as the "cheaper configuration" tie-break.
int total_rank(const Configuration& config, const ParameterSpace& space);

/// Compact human-readable label, e.g. "pixel=1080|fps=5" (spec order).
std::string config_label(const Configuration& config, const ParameterSpace& space);

/// A bound that is either a constant or `numerator / numeric(parameter)`,
/// evaluated against the active configuration.
struct ThresholdExpr {
  enum class Kind { Constant, ScaledReciprocal };
  Kind kind = Kind::Constant;
  double value = 0.0;      // Constant: the bound. ScaledReciprocal: numerator.
  std::string parameter;   // ScaledReciprocal only.

  static ThresholdExpr constant(double v);
  static ThresholdExpr scaled_reciprocal(double numerator, std::string parameter);
};

double evaluate_threshold(const ThresholdExpr& expr, const Configuration& config,
                          const ParameterSpace& space);

/// A named bound on one metric. Missing lower/upper bounds are open
/// (-inf / +inf); both bounds are inclusive.
struct SloSpec {
  std::string name;
  std::string metric;
  std::optional<ThresholdExpr> lower;
  std::optional<ThresholdExpr> upper;
};

/// One raw observation: all metric values captured at one instant under a
/// known configuration.
struct MetricSample {
  std::int64_t timestamp_ms = 0;
  std::map<std::string, double> values;
  Configuration config;
};

/// One evaluation window of samples captured under a single configuration.
struct MetricBatch {
  std::vector<MetricSample> samples;
  std::int64_t window_ms = 0;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }

  /// Checks the batch invariants: uniform config, non-decreasing timestamps.
  void validate(const ParameterSpace& space) const;
};

/// Parameter grid + SLO set + metric list for one service, as read from a
/// scenario definition file.
struct ServiceDefinition {
  ParameterSpace space;
  std::vector<SloSpec> slos;
  std::vector<std::string> metrics;
};

/// Batch CSV: header `timestamp_ms,<param...>,<metric...>`, one row per
/// sample. Doubles are written in shortest round-trip form.
void write_batch_csv(std::ostream& out, const MetricBatch& batch,
                     const ParameterSpace& space,
                     const std::vector<std::string>& metric_order);

/// Reads rows of the batch CSV format back into samples (no windowing).
std::vector<MetricSample> read_samples_csv(std::istream& in, const ParameterSpace& space);

/// Shortest round-trip decimal form of a double (used by every CSV writer so
/// outputs are byte-stable).
std::string format_double(double v);

} // namespace aifstream
