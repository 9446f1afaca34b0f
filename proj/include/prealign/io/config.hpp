#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "prealign/deflection.hpp"
#include "prealign/species.hpp"
#include "prealign/units.hpp"

namespace prealign::io {

/// One scenario: what to simulate and where to write it. Sections of the
/// config file map onto the groups below; command-line flags override them.
struct ScenarioConfig {
  std::string species_name = "CS2";
  std::optional<MolecularSpecies> inline_species;
  std::string species_file;

  ThermalSpec thermal = ThermalSpec::from_j_thermal(5.0);
  std::optional<KickPulse> kick;

  deflection::DeflectingBeam beam;
  deflection::ScatteringGeometry geometry;
  deflection::Mode mode = deflection::Mode::weak;

  /// Unset means the command's own default.
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  unsigned threads = 0;

  std::string out_dir = ".";
  std::size_t bins = 200;
  bool dump_samples = false;

  std::vector<double> kick_list;
  std::vector<double> j_thermal_list;

  /// Path of the file the scenario came from, empty for flags only.
  std::string source;

  nlohmann::json echo() const;
};

/// Parses `[section]` / `key = value` text. Lines starting with '#' or ';'
/// are comments. Unknown sections or keys and unparsable values throw
/// ConfigError naming the offending `section.key`.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::string& path);

/// Values given on the command line; each set field replaces the config's.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> bins;
  std::optional<std::string> out_dir;
  std::optional<std::string> species;
  std::optional<std::string> species_file;
  std::optional<double> kick;
  std::optional<std::string> kick_axis;
  std::optional<double> j_thermal;
  std::optional<double> temperature_k;
  std::optional<double> intensity_w_cm2;
  std::optional<double> waist_um;
  std::optional<double> tau_ns;
  std::optional<double> v_x;
  std::optional<double> impact_um;
  std::optional<std::string> mode;
  std::optional<unsigned> threads;
  std::optional<std::vector<double>> kick_list;
  std::optional<std::vector<double>> j_thermal_list;
  bool dump_samples = false;
};

void apply_overrides(ScenarioConfig& config, const ConfigOverrides& overrides);

/// Species named by the config (inline record first, then the species file
/// or the shipped registry), validated.
MolecularSpecies resolve_species(const ScenarioConfig& config);

/// Checks every physical field; throws ConfigError with a field-level message.
void validate(const ScenarioConfig& config);

}  // namespace prealign::io
