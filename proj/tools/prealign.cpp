// Command-line front end: parse flags, merge them into the scenario config,
// run one experiment family and write CSV/JSON results.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "prealign/errors.hpp"
#include "prealign/io/commands.hpp"
#include "prealign/species.hpp"

namespace {

using prealign::io::ConfigOverrides;

void add_scenario_flags(CLI::App* app, std::string& config_path, ConfigOverrides& o) {
  app->add_option("--config", config_path, "Scenario file ([section] key = value)");
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--samples", o.samples, "Ensemble size");
  app->add_option("--bins", o.bins, "Histogram bins");
  app->add_option("--out", o.out_dir, "Output directory");
  app->add_option("--species", o.species, "Species name from the species file");
  app->add_option("--species-file", o.species_file, "Species CSV file");
  app->add_option("--kick", o.kick, "Kick strength P (units of hbar); 0 disables the kick");
  app->add_option("--kick-axis", o.kick_axis, "Kick polarization: z or x");
  auto* jt = app->add_option("--jt", o.j_thermal, "Thermal angular momentum J_T");
  auto* temp = app->add_option("--temp", o.temperature_k, "Rotational temperature (K)");
  jt->excludes(temp);
  app->add_option("--intensity", o.intensity_w_cm2, "Deflecting peak intensity (W/cm^2)");
  app->add_option("--waist", o.waist_um, "Deflecting beam waist w0 (um)");
  app->add_option("--tau", o.tau_ns, "Deflecting pulse FWHM (ns)");
  app->add_option("--vx", o.v_x, "Beam velocity v_x (m/s)");
  app->add_option("--impact", o.impact_um, "Impact parameter z (um)");
  app->add_option("--mode", o.mode, "Deflection treatment: weak or strong");
  app->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

int run(const std::string& command, const std::string& config_path, const ConfigOverrides& overrides) {
  try {
    auto cfg = config_path.empty() ? prealign::io::ScenarioConfig{} : prealign::io::load_config(config_path);
    prealign::io::apply_overrides(cfg, overrides);
    const auto report = prealign::io::run_and_write(command, cfg);
    std::cout << report.summary.dump(2) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "prealign " << command << ": " << e.what() << "\n";
    return prealign::io::exit_status_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deflection of prealigned molecules: quantum and classical alignment distributions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", prealign::io::version());

  std::string config_path;
  ConfigOverrides overrides;
  std::string command;

  for (const auto& [name, help] : std::initializer_list<std::pair<const char*, const char*>>{
           {"quantum-dist", "Quantum distribution of A_{J,m} for a (kicked) thermal ensemble"},
           {"classical-dist", "Classical Monte Carlo distribution of the alignment factor"},
           {"strong-deflect", "Deflection velocities and angles along trajectories through the beam"},
           {"asymptotics", "Large-kick moments of A against Monte Carlo"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_scenario_flags(sub, config_path, overrides);
    if (std::string(name) == "classical-dist") {
      sub->add_flag("--dump-samples", overrides.dump_samples, "Also write every sampled A");
    }
    if (std::string(name) == "asymptotics") {
      sub->add_option("--p-list", overrides.kick_list, "Kick strengths")->delimiter(',');
      sub->add_option("--jt-list", overrides.j_thermal_list, "Thermal J_T values")->delimiter(',');
    }
    sub->callback([&command, name = std::string(name)] { command = name; });
  }

  auto* species = app.add_subcommand("species", "Inspect the species file");
  species->require_subcommand(1);
  std::string species_file;
  species->add_option("--species-file", species_file, "Species CSV file (default: shipped file)");
  species->add_subcommand("list", "Print all records")->callback([&command] { command = "species list"; });
  species->add_subcommand("validate", "Check every record")->callback([&command] { command = "species validate"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (command.rfind("species", 0) == 0) {
    try {
      const auto registry = species_file.empty() ? prealign::SpeciesRegistry::builtin()
                                                 : prealign::SpeciesRegistry::from_file(species_file);
      for (const auto& s : registry.records()) s.validate();
      if (command == "species list") {
        registry.write(std::cout);
      } else {
        std::cout << registry.records().size() << " species records valid\n";
      }
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "prealign species: " << e.what() << "\n";
      return 2;
    }
  }
  return run(command, config_path, overrides);
}
