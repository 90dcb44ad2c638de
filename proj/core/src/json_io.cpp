#include "aifstream/json_io.hpp"

#include <fstream>
#include <sstream>

#include "aifstream/harness.hpp"

#include <json.hpp>

namespace aifstream {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

namespace {

json parse(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError("malformed JSON in " + what);
  return j;
}

json threshold_to_json(const ThresholdExpr& expr) {
  if (expr.kind == ThresholdExpr::Kind::Constant) {
    return json{{"const", expr.value}};
  }
  return json{{"reciprocal", {{"numerator", expr.value}, {"parameter", expr.parameter}}}};
}

ThresholdExpr threshold_from_json(const json& j) {
  if (j.contains("const")) return ThresholdExpr::constant(j.at("const").get<double>());
  if (j.contains("reciprocal")) {
    const auto& r = j.at("reciprocal");
    return ThresholdExpr::scaled_reciprocal(r.at("numerator").get<double>(),
                                            r.at("parameter").get<std::string>());
  }
  throw SchemaError("threshold must be {const: x} or {reciprocal:{numerator, parameter}}");
}

json parameters_to_json(const ParameterSpace& space) {
  json arr = json::array();
  for (const auto& spec : space.specs) {
    json states = json::array();
    for (const auto& st : spec.states) {
      json s{{"label", st.label}};
      if (st.numeric) s["numeric"] = *st.numeric;
      states.push_back(std::move(s));
    }
    arr.push_back(json{{"name", spec.name}, {"states", std::move(states)}});
  }
  return arr;
}

ParameterSpace parameters_from_json(const json& arr) {
  ParameterSpace space;
  for (const auto& p : arr) {
    ParameterSpec spec;
    spec.name = p.at("name").get<std::string>();
    for (const auto& s : p.at("states")) {
      ParamState st;
      st.label = s.at("label").get<std::string>();
      if (s.contains("numeric")) st.numeric = s.at("numeric").get<double>();
      spec.states.push_back(std::move(st));
    }
    space.specs.push_back(std::move(spec));
  }
  space.validate();
  return space;
}

json slos_to_json(const std::vector<SloSpec>& slos) {
  json arr = json::array();
  for (const auto& slo : slos) {
    json s{{"name", slo.name}, {"metric", slo.metric}};
    if (slo.lower) s["lower"] = threshold_to_json(*slo.lower);
    if (slo.upper) s["upper"] = threshold_to_json(*slo.upper);
    arr.push_back(std::move(s));
  }
  return arr;
}

std::vector<SloSpec> slos_from_json(const json& arr) {
  std::vector<SloSpec> slos;
  for (const auto& s : arr) {
    SloSpec slo;
    slo.name = s.at("name").get<std::string>();
    slo.metric = s.at("metric").get<std::string>();
    if (s.contains("lower")) slo.lower = threshold_from_json(s.at("lower"));
    if (s.contains("upper")) slo.upper = threshold_from_json(s.at("upper"));
    if (!slo.lower && !slo.upper)
      throw SchemaError("SLO '" + slo.name + "' needs at least one bound");
    slos.push_back(std::move(slo));
  }
  return slos;
}

std::vector<std::string> default_metrics(const std::vector<SloSpec>& slos) {
  std::vector<std::string> metrics;
  for (const auto& slo : slos) {
    if (std::find(metrics.begin(), metrics.end(), slo.metric) == metrics.end())
      metrics.push_back(slo.metric);
  }
  return metrics;
}

} // namespace

ServiceDefinition service_definition_from_json(const std::string& text) {
  const json j = parse(text, "service definition");
  ServiceDefinition def;
  def.space = parameters_from_json(j.at("parameters"));
  def.slos = slos_from_json(j.at("slos"));
  if (j.contains("metrics")) {
    def.metrics = j.at("metrics").get<std::vector<std::string>>();
  } else {
    def.metrics = default_metrics(def.slos);
  }
  return def;
}

std::string service_definition_to_json(const ServiceDefinition& def) {
  json j;
  j["parameters"] = parameters_to_json(def.space);
  j["slos"] = slos_to_json(def.slos);
  j["metrics"] = def.metrics;
  return j.dump(2) + "\n";
}

// --- generative model --------------------------------------------------------

std::string model_to_json(const GenerativeModel& model) {
  json j;
  json vars = json::array();
  for (const auto& node : model.dag.nodes) {
    vars.push_back(json{
        {"name", node.name},
        {"kind", node.kind == VariableKind::Parameter ? "parameter" : "slo_indicator"},
        {"states", node.states}});
  }
  j["variables"] = std::move(vars);

  json edges = json::array();
  for (const auto& [p, c] : model.dag.edges) edges.push_back(json::array({p, c}));
  j["edges"] = std::move(edges);

  json cpts = json::object();
  for (const auto& cpt : model.cpts) {
    json table = json::object();
    std::vector<std::size_t> card;
    for (const auto& p : cpt.parent_order) card.push_back(model.dag.node(p).states.size());
    for (std::size_t combo = 0; combo < cpt.combo_count; ++combo) {
      std::string key;
      std::size_t rem = combo;
      std::vector<std::size_t> ranks(card.size());
      for (std::size_t k = card.size(); k-- > 0;) {
        ranks[k] = rem % card[k];
        rem /= card[k];
      }
      for (std::size_t k = 0; k < card.size(); ++k) {
        if (k > 0) key += ',';
        key += cpt.parent_order[k] + "=" + model.dag.node(cpt.parent_order[k]).states[ranks[k]];
      }
      std::vector<double> probs(cpt.probs.begin() + static_cast<long>(combo * cpt.state_count),
                                cpt.probs.begin() +
                                    static_cast<long>((combo + 1) * cpt.state_count));
      table[key] = probs;
    }
    cpts[cpt.node] = json{{"parents", cpt.parent_order}, {"table", std::move(table)}};
  }
  j["cpts"] = std::move(cpts);
  j["trained_on"] = model.trained_on;
  return j.dump(2) + "\n";
}

GenerativeModel model_from_json(const std::string& text) {
  const json j = parse(text, "model file");
  GenerativeModel model;
  for (const auto& v : j.at("variables")) {
    VariableDef def;
    def.name = v.at("name").get<std::string>();
    const auto kind = v.at("kind").get<std::string>();
    if (kind == "parameter") {
      def.kind = VariableKind::Parameter;
    } else if (kind == "slo_indicator") {
      def.kind = VariableKind::SloIndicator;
    } else {
      throw SchemaError("unknown variable kind '" + kind + "'");
    }
    def.states = v.at("states").get<std::vector<std::string>>();
    model.dag.nodes.push_back(std::move(def));
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw SchemaError("edges must be [parent, child] pairs");
    model.dag.edges.insert({e[0].get<std::string>(), e[1].get<std::string>()});
  }
  model.dag.validate();

  const auto& cpts = j.at("cpts");
  for (const auto& node : model.dag.nodes) {
    if (!cpts.contains(node.name)) throw SchemaError("missing CPT for node " + node.name);
    const auto& jc = cpts.at(node.name);
    Cpt cpt;
    cpt.node = node.name;
    cpt.parent_order = jc.at("parents").get<std::vector<std::string>>();
    {
      auto expected = model.dag.parents_of(node.name);
      auto got = cpt.parent_order;
      std::sort(expected.begin(), expected.end());
      std::sort(got.begin(), got.end());
      if (expected != got)
        throw SchemaError("CPT parents of " + node.name + " do not match the edges");
    }
    cpt.state_count = node.states.size();
    std::vector<std::size_t> card;
    cpt.combo_count = 1;
    for (const auto& p : cpt.parent_order) {
      card.push_back(model.dag.node(p).states.size());
      cpt.combo_count *= card.back();
    }
    cpt.probs.assign(cpt.combo_count * cpt.state_count, 0.0);
    cpt.counts.assign(cpt.combo_count * cpt.state_count, 0.0);

    const auto& table = jc.at("table");
    if (table.size() != cpt.combo_count)
      throw SchemaError("CPT of " + node.name + " has " + std::to_string(table.size()) +
                        " rows, expected " + std::to_string(cpt.combo_count));
    for (auto it = table.begin(); it != table.end(); ++it) {
      // Key "p1=s1,p2=s2" in parent order; root nodes use "".
      std::size_t combo = 0;
      if (!cpt.parent_order.empty()) {
        std::stringstream ss(it.key());
        std::string part;
        std::size_t k = 0;
        while (std::getline(ss, part, ',')) {
          const auto eq = part.find('=');
          if (eq == std::string::npos || k >= cpt.parent_order.size())
            throw SchemaError("bad CPT key '" + it.key() + "' for node " + node.name);
          const std::string pname = part.substr(0, eq);
          const std::string pstate = part.substr(eq + 1);
          if (pname != cpt.parent_order[k])
            throw SchemaError("CPT key '" + it.key() + "' out of parent order for node " +
                              node.name);
          const int si = model.dag.node(pname).index_of(pstate);
          if (si < 0)
            throw SchemaError("unknown state '" + pstate + "' in CPT key of node " + node.name);
          combo = combo * card[k] + static_cast<std::size_t>(si);
          ++k;
        }
        if (k != cpt.parent_order.size())
          throw SchemaError("CPT key '" + it.key() + "' incomplete for node " + node.name);
      }
      const auto probs = it.value().get<std::vector<double>>();
      if (probs.size() != cpt.state_count)
        throw SchemaError("CPT row length mismatch for node " + node.name);
      for (std::size_t s = 0; s < cpt.state_count; ++s)
        cpt.probs[combo * cpt.state_count + s] = probs[s];
    }
    model.cpts.push_back(std::move(cpt));
  }
  model.trained_on = j.value("trained_on", std::size_t{0});
  return model;
}

void save_model(const GenerativeModel& model, const fs::path& path) {
  write_text_file(path, model_to_json(model));
}

GenerativeModel load_model(const fs::path& path) {
  return model_from_json(read_text_file(path));
}

// --- scenario profiles -------------------------------------------------------

std::string profile_to_json(const ServiceProfile& service, const DeviceProfile& device) {
  json j;
  j["service"] = service.id;
  j["device"] = json{{"id", device.id},
                     {"time_multiplier", device.time_multiplier},
                     {"energy_multiplier", device.energy_multiplier},
                     {"energy_offset", device.energy_offset}};
  j["parameters"] = parameters_to_json(service.space);
  j["slos"] = slos_to_json(service.slos);
  j["metrics"] = service.metrics;

  json cells = json::array();
  const auto grid = enumerate_configs(service.space);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    json config = json::object();
    for (const auto& [name, state] : grid[i].assignment) config[name] = state;
    json metrics = json::object();
    for (const auto& m : service.metrics) {
      const auto& gen = service.cell(i).at(m);
      metrics[m] = json{{"mean", gen.mean}, {"std", gen.stddev}};
    }
    cells.push_back(json{{"config", std::move(config)}, {"metrics", std::move(metrics)}});
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

std::pair<ServiceProfile, DeviceProfile> profile_from_json(const std::string& text) {
  const json j = parse(text, "profile file");
  ServiceProfile service;
  service.id = j.at("service").get<std::string>();
  service.space = parameters_from_json(j.at("parameters"));
  service.slos = slos_from_json(j.at("slos"));
  service.metrics = j.contains("metrics") ? j.at("metrics").get<std::vector<std::string>>()
                                          : default_metrics(service.slos);

  service.cells.resize(service.space.grid_size());
  std::vector<bool> seen(service.cells.size(), false);
  for (const auto& cell : j.at("cells")) {
    Configuration config;
    for (const auto& [name, state] : cell.at("config").items())
      config.assignment[name] = state.get<std::string>();
    const std::size_t idx = config_index(service.space, config);
    if (seen[idx]) throw SchemaError("duplicate profile cell for " +
                                     config_label(config, service.space));
    seen[idx] = true;
    for (const auto& [metric, gen] : cell.at("metrics").items()) {
      service.cells[idx][metric] =
          MetricGen{gen.at("mean").get<double>(), gen.at("std").get<double>()};
    }
  }
  service.validate();

  DeviceProfile device;
  if (j.contains("device")) {
    const auto& d = j.at("device");
    if (d.is_string()) {
      device = builtin_device(d.get<std::string>());
    } else {
      device.id = d.at("id").get<std::string>();
      device.time_multiplier = d.value("time_multiplier", 1.0);
      device.energy_multiplier = d.value("energy_multiplier", 1.0);
      device.energy_offset = d.value("energy_offset", 0.0);
    }
  }
  if (device.time_multiplier <= 0.0 || device.energy_multiplier <= 0.0)
    throw SchemaError("device multipliers must be positive");
  return {std::move(service), device};
}

void save_profile(const ServiceProfile& service, const DeviceProfile& device,
                  const fs::path& path) {
  write_text_file(path, profile_to_json(service, device));
}

std::pair<ServiceProfile, DeviceProfile> load_profile(const fs::path& path) {
  return profile_from_json(read_text_file(path));
}

// --- experiment configs ------------------------------------------------------

namespace {

ExperimentConfig experiment_config_from(const json& j) {
  ExperimentConfig config;
  config.service = j.value("service", std::string{});
  config.device = j.value("device", std::string{});
  if (j.contains("profile")) config.profile = fs::path(j.at("profile").get<std::string>());
  if (config.service.empty() && !config.profile)
    throw SchemaError("experiment config needs either service/device ids or a profile path");
  config.seed = j.value("seed", std::uint64_t{0});
  config.cycle_count = j.value("cycles", 40);
  config.window_ms = j.value("window_ms", std::int64_t{2000});
  if (j.contains("out")) config.out_dir = fs::path(j.at("out").get<std::string>());

  const std::string mode = j.value("mode", std::string{"simulate"});
  if (mode == "simulate") {
    config.mode = ExperimentConfig::Mode::Simulate;
  } else if (mode == "replay") {
    config.mode = ExperimentConfig::Mode::Replay;
    if (!j.contains("trace")) throw SchemaError("replay mode needs a trace path");
  } else {
    throw SchemaError("unknown mode '" + mode + "' (simulate|replay)");
  }
  if (j.contains("trace")) config.trace = fs::path(j.at("trace").get<std::string>());

  if (j.contains("hyper")) {
    const auto& h = j.at("hyper");
    config.hyper.w_pv = h.value("w_pv", 2.0);
    config.hyper.w_ig = h.value("w_ig", 1.0);
    config.hyper.pseudocount = h.value("pseudocount", 1.0);
    config.hyper.structure_relearn_period = h.value("relearn_period", 10);
    if (config.hyper.w_pv <= 0.0 || config.hyper.w_ig <= 0.0)
      throw SchemaError("score weights must be positive");
    if (config.hyper.pseudocount <= 0.0) throw SchemaError("pseudocount must be positive");
    if (config.hyper.structure_relearn_period < 1)
      throw SchemaError("relearn_period must be at least 1");
  }
  return config;
}

} // namespace

ExperimentConfig experiment_config_from_json(const std::string& text) {
  return experiment_config_from(parse(text, "experiment config"));
}

std::vector<ExperimentConfig> suite_configs_from_json(const std::string& text) {
  const json j = parse(text, "suite config");
  const json& arr = j.is_array() ? j : j.at("experiments");
  if (!arr.is_array() || arr.empty())
    throw SchemaError("suite config needs a non-empty experiments array");
  std::vector<ExperimentConfig> configs;
  for (const auto& e : arr) configs.push_back(experiment_config_from(e));
  return configs;
}

} // namespace aifstream
