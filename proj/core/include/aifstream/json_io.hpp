#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "aifstream/bayesnet.hpp"
#include "aifstream/domain.hpp"
#include "aifstream/envsim.hpp"

namespace aifstream {

// Scenario definition: {parameters:[{name,states:[{label,numeric?}]}],
// slos:[{name,metric,lower?,upper?}], metrics?:[...]}. Bounds are
// {const: x} or {reciprocal:{numerator, parameter}}.
ServiceDefinition service_definition_from_json(const std::string& text);
std::string service_definition_to_json(const ServiceDefinition& def);

// Generative model: {variables, edges, cpts:{node:{parents, table}}, trained_on}.
// CPT table keys are "p1=s1,p2=s2" in parent order; root nodes use "".
std::string model_to_json(const GenerativeModel& model);
GenerativeModel model_from_json(const std::string& text);
void save_model(const GenerativeModel& model, const std::filesystem::path& path);
GenerativeModel load_model(const std::filesystem::path& path);

// Scenario profile: {service, device:{id,time_multiplier,energy_multiplier,
// energy_offset}, parameters, slos, metrics, cells:[{config, metrics:{m:{mean,std}}}]}.
std::string profile_to_json(const ServiceProfile& service, const DeviceProfile& device);
std::pair<ServiceProfile, DeviceProfile> profile_from_json(const std::string& text);
void save_profile(const ServiceProfile& service, const DeviceProfile& device,
                  const std::filesystem::path& path);
std::pair<ServiceProfile, DeviceProfile> load_profile(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace aifstream
