// Regenerates the calibrated scenario profile files under data/profiles/.
// Development utility; the shipped JSON files are produced by this tool.

#include <filesystem>
#include <iostream>

#include "aifstream/envsim.hpp"
#include "aifstream/json_io.hpp"
#include "aifstream/harness.hpp"

using namespace aifstream;

int main(int argc, char** argv) {
  const std::filesystem::path out_dir = argc > 1 ? argv[1] : "data/profiles";
  for (const auto& service : builtin_service_ids()) {
    for (const auto& device : builtin_device_ids()) {
      const auto path = out_dir / (scenario_slug(service, device) + ".json");
      save_profile(builtin_service(service), builtin_device_for(service, device), path);
      std::cout << "wrote " << path.string() << "\n";
    }
  }
  return 0;
}
