#pragma once

#include <map>
#include <string>
#include <vector>

#include "aifstream/domain.hpp"

namespace aifstream {

/// Per-SLO fulfillment ratios plus their unweighted mean for one batch.
struct FulfillmentReport {
  std::map<std::string, double> per_slo;
  double overall = 0.0;
  std::size_t sample_count = 0;
};

/// 1 iff the sample's metric lies within the SLO's (inclusive) bounds after
/// threshold evaluation; missing bounds are open.
int sample_fulfills(const MetricSample& sample, const SloSpec& slo,
                    const ParameterSpace& space);

/// Fraction of batch samples that fulfill the SLO.
double slo_fulfillment(const MetricBatch& batch, const SloSpec& slo,
                       const ParameterSpace& space);

/// Per-SLO ratios and their mean. Throws SchemaError on an empty SLO set,
/// EmptyBatchError on an empty batch.
FulfillmentReport batch_fulfillment(const MetricBatch& batch,
                                    const std::vector<SloSpec>& slos,
                                    const ParameterSpace& space);

} // namespace aifstream
