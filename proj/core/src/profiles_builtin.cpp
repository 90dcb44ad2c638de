#include <array>

#include "aifstream/envsim.hpp"

// Calibrated generator tables for the three stream processing services on
// the heterogeneous edge devices. The reference device is the unconstrained
// AGX board; the other devices derive from it through their multipliers.
// Time cells are U-shaped in fps: low frame rates let the device clock down
// (longer per-frame latency), high frame rates add queueing pressure.

namespace aifstream {

namespace {

constexpr std::array<double, 5> kFps = {5, 10, 15, 20, 25};

ParameterSpec numeric_spec(const std::string& name, std::initializer_list<double> values) {
  ParameterSpec spec;
  spec.name = name;
  for (double v : values) {
    ParamState st;
    st.label = format_double(v);
    st.numeric = v;
    spec.states.push_back(std::move(st));
  }
  return spec;
}

ParameterSpec label_spec(const std::string& name, std::initializer_list<const char*> labels) {
  ParameterSpec spec;
  spec.name = name;
  for (const char* l : labels) spec.states.push_back(ParamState{l, std::nullopt});
  return spec;
}

SloSpec time_slo() {
  SloSpec slo;
  slo.name = "time";
  slo.metric = "time";
  slo.upper = ThresholdExpr::scaled_reciprocal(1000.0, "fps");
  return slo;
}

SloSpec energy_slo() {
  SloSpec slo;
  slo.name = "energy";
  slo.metric = "energy";
  slo.upper = ThresholdExpr::constant(15.0);
  return slo;
}

SloSpec rate_slo() {
  SloSpec slo;
  slo.name = "rate";
  slo.metric = "rate";
  slo.lower = ThresholdExpr::constant(10.0);
  return slo;
}

// rows follow the first parameter's states, columns the fps states
using CellTable = std::array<std::array<double, 5>, 3>;

void fill_cells(ServiceProfile& profile, const CellTable& time_mean,
                const CellTable& energy_mean, double energy_std,
                const std::array<double, 3>* rate_mean, double rate_std) {
  const std::size_t n = profile.space.grid_size();
  profile.cells.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::size_t row = idx / kFps.size();
    const std::size_t col = idx % kFps.size();
    auto& cell = profile.cells[idx];
    cell["time"] = MetricGen{time_mean[row][col], 0.05 * time_mean[row][col]};
    cell["energy"] = MetricGen{energy_mean[row][col], energy_std};
    if (rate_mean != nullptr) cell["rate"] = MetricGen{(*rate_mean)[row], rate_std};
  }
}

ServiceProfile make_cv() {
  ServiceProfile p;
  p.id = "CV";
  p.space.specs = {numeric_spec("pixel", {480, 720, 1080}),
                   numeric_spec("fps", {5, 10, 15, 20, 25})};
  p.slos = {time_slo(), energy_slo(), rate_slo()};
  p.metrics = {"time", "energy", "rate"};
  const CellTable time = {{{71.7, 42, 34, 39, 41},
                           {124, 53.7, 40, 47, 50},
                           {111, 46, 80, 82, 86}}};
  const CellTable energy = {{{15.8, 16.1, 16.3, 17.8, 18.3},
                             {10.8, 11.18, 14.77, 17.8, 18.3},
                             {14.194, 15.45, 18.0, 18.4, 18.8}}};
  const std::array<double, 3> rate = {9.3, 10.77, 12.4}; // detections per frame
  fill_cells(p, time, energy, 0.8, &rate, 1.2);
  return p;
}

ServiceProfile make_qr() {
  ServiceProfile p;
  p.id = "QR";
  p.space.specs = {numeric_spec("pixel", {480, 720, 1080}),
                   numeric_spec("fps", {5, 10, 15, 20, 25})};
  p.slos = {time_slo(), energy_slo()};
  p.metrics = {"time", "energy"};
  const CellTable time = {{{145, 26, 27, 28, 30},
                           {95, 80, 50, 52, 55},
                           {92, 30, 32, 35, 38}}};
  const CellTable energy = {{{12.0, 16.55, 16.3, 17.0, 17.6},
                             {13.1, 13.4, 10.13, 17.3, 17.9},
                             {16.5, 19.5, 17.1, 17.5, 17.9}}};
  fill_cells(p, time, energy, 1.0, nullptr, 0.0);
  return p;
}

ServiceProfile make_li() {
  ServiceProfile p;
  p.id = "LI";
  p.space.specs = {label_spec("mode", {"single", "double", "all"}),
                   numeric_spec("fps", {5, 10, 15, 20, 25})};
  p.slos = {time_slo(), energy_slo()};
  p.metrics = {"time", "energy"};
  const CellTable time = {{{73.8, 52, 49, 50, 53},
                           {105, 80, 76, 78, 82},
                           {145, 112, 107, 110, 115}}};
  const CellTable energy = {{{13.02, 15.55, 16.5, 17.0, 17.5},
                             {17.0, 17.4, 17.8, 18.2, 18.6},
                             {18.4, 18.8, 19.2, 19.6, 20.0}}};
  fill_cells(p, time, energy, 1.1, nullptr, 0.0);
  return p;
}

} // namespace

const std::vector<std::string>& builtin_service_ids() {
  static const std::vector<std::string> ids = {"CV", "QR", "LI"};
  return ids;
}

const std::vector<std::string>& builtin_device_ids() {
  static const std::vector<std::string> ids = {"AGX+", "AGX-", "NX+", "NX-"};
  return ids;
}

ServiceProfile builtin_service(const std::string& id) {
  if (id == "CV") return make_cv();
  if (id == "QR") return make_qr();
  if (id == "LI") return make_li();
  throw SchemaError("unknown service profile: " + id);
}

namespace {

DeviceProfile device_entry(const std::string& id, double tm, double em, double eo) {
  DeviceProfile d;
  d.id = id;
  d.time_multiplier = tm;
  d.energy_multiplier = em;
  d.energy_offset = eo;
  return d;
}

} // namespace

DeviceProfile builtin_device(const std::string& id) {
  // GPU-bound reference adjustments (the CUDA services).
  if (id == "AGX+") return device_entry(id, 1.0, 1.0, 0.0);
  if (id == "AGX-") return device_entry(id, 1.5, 0.85, 3.2);
  if (id == "NX+") return device_entry(id, 1.8, 0.75, 4.6);
  if (id == "NX-") return device_entry(id, 2.6, 0.6, 4.5);
  throw SchemaError("unknown device profile: " + id);
}

DeviceProfile builtin_device_for(const std::string& service_id, const std::string& device_id) {
  if (service_id == "CV" && device_id == "NX+") {
    return device_entry(device_id, 1.8, 0.9, 1.3);
  }
  if (service_id == "QR") {
    // CPU-only: every board runs its own voltage curve, so the power scale
    // differs per device while the draw itself barely moves with load.
    if (device_id == "AGX+") return device_entry(device_id, 1.0, 1.3, 0.0);
    if (device_id == "AGX-") return device_entry(device_id, 1.5, 1.0, 0.1);
    if (device_id == "NX+") return device_entry(device_id, 1.8, 1.0, 0.2);
    if (device_id == "NX-") return device_entry(device_id, 2.6, 0.8, 0.15);
    throw SchemaError("unknown device profile: " + device_id);
  }
  return builtin_device(device_id);
}

} // namespace aifstream
