#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "nvsim/scenario.hpp"

namespace {

int print_constants() {
  namespace c = nvsim::constants;
  struct Row {
    const char* name;
    double value;
    const char* unit;
  };
  const Row rows[] = {
      {"hbar", c::hbar, "J s"},
      {"planck", c::planck, "J s"},
      {"speed_of_light", c::speed_of_light, "m/s"},
      {"vacuum_permittivity", c::vacuum_permittivity, "F/m"},
      {"electron_volt", c::electron_volt, "J"},
      {"bohr_magneton", c::bohr_magneton_hz_per_gauss, "Hz/G"},
  };
  std::printf("constants table version %d\n", c::table_version);
  for (const auto& r : rows) std::printf("%-20s %-18.12g %s\n", r.name, r.value, r.unit);
  return 0;
}

int print_list() {
  for (const auto& e : nvsim::scenario::catalog()) {
    std::printf("%s\n  %s\n  keys:\n", e.name.c_str(), e.reproduces.c_str());
    for (const auto& k : e.schema) std::printf("    %s\n", k.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NV-center spin and optics simulations"};
  app.require_subcommand(1);

  std::string config_path, output_dir;
  auto* run = app.add_subcommand("run", "Run a scenario config and print its manifest as JSON");
  run->add_option("config", config_path, "Scenario config (YAML)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir, "Write data files here instead of the configured directory");
  app.add_subcommand("list", "List scenarios and their config keys");
  app.add_subcommand("constants", "Print the pinned physical constants");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (app.got_subcommand("list")) return print_list();
  if (app.got_subcommand("constants")) return print_constants();

  try {
    std::optional<std::string> dir;
    if (!output_dir.empty()) dir = output_dir;
    const auto manifest = nvsim::scenario::run(config_path, dir);
    std::cout << manifest.to_json().dump(2) << "\n";
    return 0;
  } catch (const nvsim::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const nvsim::ModelError& e) {
    std::cerr << "ScenarioError: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
