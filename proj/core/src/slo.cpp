#include "aifstream/slo.hpp"

namespace aifstream {

int sample_fulfills(const MetricSample& sample, const SloSpec& slo,
                    const ParameterSpace& space) {
  auto it = sample.values.find(slo.metric);
  if (it == sample.values.end())
    throw MissingMetricError("sample lacks metric '" + slo.metric + "' required by SLO '" +
                             slo.name + "'");
  const double value = it->second;
  if (slo.lower && value < evaluate_threshold(*slo.lower, sample.config, space)) return 0;
  if (slo.upper && value > evaluate_threshold(*slo.upper, sample.config, space)) return 0;
  return 1;
}

double slo_fulfillment(const MetricBatch& batch, const SloSpec& slo,
                       const ParameterSpace& space) {
  if (batch.empty()) throw EmptyBatchError("cannot evaluate SLO on an empty batch");
  std::size_t hits = 0;
  for (const auto& sample : batch.samples) {
    hits += static_cast<std::size_t>(sample_fulfills(sample, slo, space));
  }
  return static_cast<double>(hits) / static_cast<double>(batch.size());
}

FulfillmentReport batch_fulfillment(const MetricBatch& batch,
                                    const std::vector<SloSpec>& slos,
                                    const ParameterSpace& space) {
  if (slos.empty()) throw SchemaError("SLO set is empty");
  if (batch.empty()) throw EmptyBatchError("cannot evaluate SLOs on an empty batch");
  FulfillmentReport report;
  report.sample_count = batch.size();
  double sum = 0.0;
  for (const auto& slo : slos) {
    const double f = slo_fulfillment(batch, slo, space);
    report.per_slo[slo.name] = f;
    sum += f;
  }
  report.overall = sum / static_cast<double>(slos.size());
  return report;
}

} // namespace aifstream
