#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "aifstream/domain.hpp"

namespace aifstream {

/// Zero-truncated Normal generator for one metric in one grid cell.
struct MetricGen {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Per-configuration metric generators for one stream processing service,
/// calibrated against an unconstrained reference device.
struct ServiceProfile {
  std::string id;
  ParameterSpace space;
  std::vector<SloSpec> slos;
  std::vector<std::string> metrics;
  std::vector<std::map<std::string, MetricGen>> cells; // by configuration index

  const std::map<std::string, MetricGen>& cell(std::size_t config_idx) const;
  void validate() const;
};

/// How a concrete device shifts the reference generators: processing time
/// scales with time_multiplier, energy scales with energy_multiplier and is
/// shifted by energy_offset (watts).
struct DeviceProfile {
  std::string id;
  double time_multiplier = 1.0;
  double energy_offset = 0.0;
  double energy_multiplier = 1.0;
};

struct Scenario {
  ServiceProfile service;
  DeviceProfile device;
  std::uint64_t seed = 0;
  std::int64_t window_ms = 2000;
};

/// Metric generator for a scenario cell after device adjustment.
MetricGen adjusted_generator(const Scenario& scenario, std::size_t config_idx,
                             const std::string& metric);

/// One evaluation window under `config`: max(1, round(fps * window / 1000))
/// samples, each metric drawn from its adjusted generator. The batch is a
/// pure function of (seed, cycle, config).
MetricBatch generate_batch(const Scenario& scenario, const Configuration& config,
                           int cycle);

/// Monte-Carlo estimate of the mean SLO fulfillment over n fresh samples.
double true_fulfillment(const Scenario& scenario, const Configuration& config,
                        std::size_t n);

/// Exhaustive argmax of true_fulfillment over the grid; ties go to the
/// configuration with the lowest total ordinal rank.
std::pair<Configuration, double> true_optimum(const Scenario& scenario, std::size_t n);

// --- builtin calibrated catalog ---------------------------------------------

const std::vector<std::string>& builtin_service_ids(); // CV, QR, LI
const std::vector<std::string>& builtin_device_ids();  // AGX+, AGX-, NX+, NX-

ServiceProfile builtin_service(const std::string& id);
DeviceProfile builtin_device(const std::string& id);

/// Device impact is workload-specific: limiting GPU cores hits the CUDA
/// services hard while the CPU-only service mostly keeps its power draw.
DeviceProfile builtin_device_for(const std::string& service_id, const std::string& device_id);

/// Composes a builtin service and device into a ready scenario.
Scenario make_builtin_scenario(const std::string& service_id, const std::string& device_id,
                               std::uint64_t seed, std::int64_t window_ms = 2000);

} // namespace aifstream
