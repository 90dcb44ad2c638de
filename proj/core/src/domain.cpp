#include "aifstream/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace aifstream {

int ParameterSpec::rank_of(const std::string& label) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

const ParameterSpec* ParameterSpace::find(const std::string& name) const {
  for (const auto& s : specs) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const ParameterSpec& ParameterSpace::spec(const std::string& name) const {
  if (const auto* s = find(name)) return *s;
  throw SchemaError("unknown parameter: " + name);
}

std::size_t ParameterSpace::grid_size() const {
  std::size_t n = 1;
  for (const auto& s : specs) n *= s.states.size();
  return n;
}

void ParameterSpace::validate() const {
  std::set<std::string> names;
  for (const auto& s : specs) {
    if (s.states.empty()) throw SchemaError("parameter '" + s.name + "' has no states");
    if (!names.insert(s.name).second)
      throw SchemaError("duplicate parameter name: " + s.name);
    std::set<std::string> labels;
    for (const auto& st : s.states) {
      if (!labels.insert(st.label).second)
        throw SchemaError("duplicate state '" + st.label + "' in parameter '" + s.name + "'");
    }
  }
}

const std::string& Configuration::at(const std::string& param) const {
  auto it = assignment.find(param);
  if (it == assignment.end())
    throw InvalidConfigError("configuration has no assignment for parameter '" + param + "'");
  return it->second;
}

void validate_configuration(const Configuration& config, const ParameterSpace& space) {
  if (config.assignment.size() != space.specs.size())
    throw InvalidConfigError("configuration does not cover the parameter space");
  for (const auto& spec : space.specs) {
    auto it = config.assignment.find(spec.name);
    if (it == config.assignment.end())
      throw InvalidConfigError("configuration misses parameter '" + spec.name + "'");
    if (spec.rank_of(it->second) < 0)
      throw InvalidConfigError("unknown state '" + it->second + "' for parameter '" +
                               spec.name + "'");
  }
}

std::vector<Configuration> enumerate_configs(const ParameterSpace& space) {
  const std::size_t n = space.grid_size();
  std::vector<Configuration> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(config_at(space, i));
  return out;
}

std::size_t config_index(const ParameterSpace& space, const Configuration& config) {
  validate_configuration(config, space);
  std::size_t index = 0;
  for (const auto& spec : space.specs) {
    const int rank = spec.rank_of(config.at(spec.name));
    index = index * spec.states.size() + static_cast<std::size_t>(rank);
  }
  return index;
}

Configuration config_at(const ParameterSpace& space, std::size_t index) {
  if (index >= space.grid_size()) throw InvalidConfigError("grid index out of range");
  Configuration config;
  // Mixed-radix decode, least significant digit = last spec.
  for (auto it = space.specs.rbegin(); it != space.specs.rend(); ++it) {
    const std::size_t k = it->states.size();
    config.assignment[it->name] = it->states[index % k].label;
    index /= k;
  }
  return config;
}

int neighbor_distance(const Configuration& a, const Configuration& b,
                      const ParameterSpace& space) {
  validate_configuration(a, space);
  validate_configuration(b, space);
  int d = 0;
  for (const auto& spec : space.specs) {
    d += std::abs(spec.rank_of(a.at(spec.name)) - spec.rank_of(b.at(spec.name)));
  }
  return d;
}

int total_rank(const Configuration& config, const ParameterSpace& space) {
  int r = 0;
  for (const auto& spec : space.specs) r += spec.rank_of(config.at(spec.name));
  return r;
}

std::string config_label(const Configuration& config, const ParameterSpace& space) {
  std::string out;
  for (const auto& spec : space.specs) {
    if (!out.empty()) out += '|';
    out += spec.name;
    out += '=';
    out += config.at(spec.name);
  }
  return out;
}

ThresholdExpr ThresholdExpr::constant(double v) {
  ThresholdExpr e;
  e.kind = Kind::Constant;
  e.value = v;
  return e;
}

ThresholdExpr ThresholdExpr::scaled_reciprocal(double numerator, std::string parameter) {
  ThresholdExpr e;
  e.kind = Kind::ScaledReciprocal;
  e.value = numerator;
  e.parameter = std::move(parameter);
  return e;
}

double evaluate_threshold(const ThresholdExpr& expr, const Configuration& config,
                          const ParameterSpace& space) {
  if (expr.kind == ThresholdExpr::Kind::Constant) return expr.value;
  const ParameterSpec& spec = space.spec(expr.parameter);
  const int rank = spec.rank_of(config.at(expr.parameter));
  if (rank < 0)
    throw ThresholdError("unknown state for parameter '" + expr.parameter + "'");
  const auto& numeric = spec.states[static_cast<std::size_t>(rank)].numeric;
  if (!numeric.has_value() || *numeric == 0.0)
    throw ThresholdError("parameter '" + expr.parameter +
                         "' has no usable numeric value for threshold evaluation");
  return expr.value / *numeric;
}

void MetricBatch::validate(const ParameterSpace& space) const {
  if (samples.empty()) throw EmptyBatchError("metric batch is empty");
  validate_configuration(samples.front().config, space);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].config == samples.front().config))
      throw InvalidConfigError("batch mixes configurations");
    if (samples[i].timestamp_ms < samples[i - 1].timestamp_ms)
      throw SchemaError("batch timestamps decrease");
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_batch_csv(std::ostream& out, const MetricBatch& batch,
                     const ParameterSpace& space,
                     const std::vector<std::string>& metric_order) {
  out << "timestamp_ms";
  for (const auto& spec : space.specs) out << ',' << spec.name;
  for (const auto& m : metric_order) out << ',' << m;
  out << '\n';
  for (const auto& sample : batch.samples) {
    out << sample.timestamp_ms;
    for (const auto& spec : space.specs) out << ',' << sample.config.at(spec.name);
    for (const auto& m : metric_order) {
      auto it = sample.values.find(m);
      if (it == sample.values.end())
        throw MissingMetricError("sample lacks metric '" + m + "'");
      out << ',' << format_double(it->second);
    }
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("bad numeric value '" + s + "' in " + context);
  return v;
}

} // namespace

std::vector<MetricSample> read_samples_csv(std::istream& in, const ParameterSpace& space) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.empty() || header[0] != "timestamp_ms")
    throw IoError("trace CSV must start with a timestamp_ms column");

  std::vector<bool> is_param(header.size(), false);
  for (std::size_t i = 1; i < header.size(); ++i) {
    is_param[i] = space.find(header[i]) != nullptr;
  }
  for (const auto& spec : space.specs) {
    if (std::find(header.begin(), header.end(), spec.name) == header.end())
      throw SchemaError("trace CSV misses parameter column '" + spec.name + "'");
  }

  std::vector<MetricSample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw IoError("trace CSV line " + std::to_string(line_no) + " has " +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(header.size()));
    MetricSample sample;
    sample.timestamp_ms = static_cast<std::int64_t>(
        parse_double(cells[0], "line " + std::to_string(line_no)));
    for (std::size_t i = 1; i < header.size(); ++i) {
      if (is_param[i]) {
        sample.config.assignment[header[i]] = cells[i];
      } else {
        sample.values[header[i]] = parse_double(cells[i], "line " + std::to_string(line_no));
      }
    }
    validate_configuration(sample.config, space);
    samples.push_back(std::move(sample));
  }
  return samples;
}

} // namespace aifstream
