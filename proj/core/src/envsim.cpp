#include "aifstream/envsim.hpp"

#include <algorithm>
#include <cmath>

#include "aifstream/rng.hpp"
#include "aifstream/slo.hpp"

namespace aifstream {

const std::map<std::string, MetricGen>& ServiceProfile::cell(std::size_t config_idx) const {
  if (config_idx >= cells.size())
    throw InvalidConfigError("no generator cell for grid index " + std::to_string(config_idx));
  return cells[config_idx];
}

void ServiceProfile::validate() const {
  space.validate();
  if (slos.empty()) throw SchemaError("service profile '" + id + "' declares no SLOs");
  if (cells.size() != space.grid_size())
    throw SchemaError("service profile '" + id + "' has " + std::to_string(cells.size()) +
                      " cells for a grid of " + std::to_string(space.grid_size()));
  for (const auto& cell : cells) {
    for (const auto& m : metrics) {
      auto it = cell.find(m);
      if (it == cell.end())
        throw SchemaError("service profile '" + id + "' misses metric '" + m + "' in a cell");
      if (it->second.stddev < 0.0)
        throw SchemaError("negative stddev in service profile '" + id + "'");
    }
  }
}

MetricGen adjusted_generator(const Scenario& scenario, std::size_t config_idx,
                             const std::string& metric) {
  const auto& cell = scenario.service.cell(config_idx);
  auto it = cell.find(metric);
  if (it == cell.end())
    throw SchemaError("no generator for metric '" + metric + "'");
  MetricGen g = it->second;
  if (metric == "time") {
    g.mean *= scenario.device.time_multiplier;
    g.stddev *= scenario.device.time_multiplier;
  } else if (metric == "energy") {
    g.mean = g.mean * scenario.device.energy_multiplier + scenario.device.energy_offset;
    g.stddev *= scenario.device.energy_multiplier;
  }
  return g;
}

namespace {

double fps_numeric(const Scenario& scenario, const Configuration& config) {
  const ParameterSpec* fps = scenario.service.space.find("fps");
  if (fps == nullptr) return 1.0;
  const int rank = fps->rank_of(config.at("fps"));
  const auto& numeric = fps->states[static_cast<std::size_t>(rank)].numeric;
  return numeric.value_or(1.0);
}

} // namespace

MetricBatch generate_batch(const Scenario& scenario, const Configuration& config,
                           int cycle) {
  validate_configuration(config, scenario.service.space);
  const std::size_t idx = config_index(scenario.service.space, config);

  const double fps = fps_numeric(scenario, config);
  const double per_window = fps * static_cast<double>(scenario.window_ms) / 1000.0;
  const std::size_t count =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(per_window)));
  const double step_ms = static_cast<double>(scenario.window_ms) / static_cast<double>(count);

  Rng rng(mix_seed(scenario.seed, static_cast<std::uint64_t>(cycle), idx));

  MetricBatch batch;
  batch.window_ms = scenario.window_ms;
  batch.samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    MetricSample sample;
    sample.timestamp_ms = static_cast<std::int64_t>(cycle) * scenario.window_ms +
                          static_cast<std::int64_t>(step_ms * static_cast<double>(i));
    sample.config = config;
    for (const auto& metric : scenario.service.metrics) {
      const MetricGen g = adjusted_generator(scenario, idx, metric);
      sample.values[metric] = rng.truncated_normal(g.mean, g.stddev);
    }
    batch.samples.push_back(std::move(sample));
  }
  return batch;
}

double true_fulfillment(const Scenario& scenario, const Configuration& config,
                        std::size_t n) {
  validate_configuration(config, scenario.service.space);
  if (n == 0) throw SchemaError("sample count must be positive");
  const std::size_t idx = config_index(scenario.service.space, config);

  // Independent stream, tagged so it never collides with generate_batch.
  Rng rng(mix_seed(scenario.seed, 0x6f7261636cull, idx)); // "oracl"

  const auto& space = scenario.service.space;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    MetricSample sample;
    sample.config = config;
    for (const auto& metric : scenario.service.metrics) {
      const MetricGen g = adjusted_generator(scenario, idx, metric);
      sample.values[metric] = rng.truncated_normal(g.mean, g.stddev);
    }
    double hits = 0.0;
    for (const auto& slo : scenario.service.slos) {
      hits += static_cast<double>(sample_fulfills(sample, slo, space));
    }
    sum += hits / static_cast<double>(scenario.service.slos.size());
  }
  return sum / static_cast<double>(n);
}

std::pair<Configuration, double> true_optimum(const Scenario& scenario, std::size_t n) {
  const auto grid = enumerate_configs(scenario.service.space);
  Configuration best;
  double best_value = -1.0;
  int best_rank = 0;
  for (const auto& config : grid) {
    const double value = true_fulfillment(scenario, config, n);
    const int rank = total_rank(config, scenario.service.space);
    const bool better =
        value > best_value || (value == best_value && rank < best_rank);
    if (best_value < 0.0 || better) {
      best = config;
      best_value = value;
      best_rank = rank;
    }
  }
  return {best, best_value};
}

Scenario make_builtin_scenario(const std::string& service_id, const std::string& device_id,
                               std::uint64_t seed, std::int64_t window_ms) {
  Scenario scenario;
  scenario.service = builtin_service(service_id);
  scenario.device = builtin_device_for(service_id, device_id);
  scenario.seed = seed;
  scenario.window_ms = window_ms;
  return scenario;
}

} // namespace aifstream
