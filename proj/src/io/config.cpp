#include "prealign/io/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "prealign/errors.hpp"

namespace prealign::io {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"species", {"name", "file", "alpha_parallel_a3", "alpha_perp_a3", "b_cm1", "mass_amu", "j_parity"}},
      {"thermal", {"temperature_k", "j_thermal"}},
      {"kick", {"strength", "intensity_w_cm2", "fwhm_ps", "axis"}},
      {"beam", {"intensity_w_cm2", "waist_um", "tau_ns"}},
      {"geometry", {"vx_m_s", "impact_um"}},
      {"ensemble", {"samples", "seed", "threads"}},
      {"output", {"dir", "bins", "dump_samples"}},
      {"run", {"mode"}},
      {"asymptotics", {"kicks", "j_thermal"}},
  };
  return keys;
}

double parse_double(const std::string& field, const std::string& text) {
  const auto s = boost::algorithm::trim_copy(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ConfigError(field + ": expected a number, got '" + text + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(const std::string& field, const std::string& text) {
  const auto s = boost::algorithm::trim_copy(text);
  Int v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ConfigError(field + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& field, const std::string& text) {
  const auto s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError(field + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_double(field, p));
  return out;
}

KickAxis parse_axis(const std::string& field, const std::string& text) {
  const auto s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(text));
  if (s == "z") return KickAxis::z_parallel;
  if (s == "x") return KickAxis::x_perpendicular;
  throw ConfigError(field + ": expected z or x, got '" + text + "'");
}

deflection::Mode parse_mode_field(const std::string& field, const std::string& text) {
  const auto s = boost::algorithm::trim_copy(text);
  if (s == "weak") return deflection::Mode::weak;
  if (s == "strong") return deflection::Mode::strong;
  throw ConfigError(field + ": expected weak or strong, got '" + text + "'");
}

std::string strip_hash_comments(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') {
      out << '\n';
    } else {
      out << line << '\n';
    }
  }
  return out.str();
}

}  // namespace

nlohmann::json ScenarioConfig::echo() const {
  nlohmann::json j;
  j["species"] = species_name;
  if (inline_species) {
    j["inline_species"] = {{"alpha_parallel_a3", inline_species->alpha_parallel_a3},
                           {"alpha_perp_a3", inline_species->alpha_perp_a3},
                           {"b_cm1", inline_species->b_cm1},
                           {"mass_amu", inline_species->mass_amu},
                           {"j_parity", to_string(inline_species->j_parity)}};
  }
  if (!species_file.empty()) j["species_file"] = species_file;
  if (thermal.temperature_k) j["temperature_k"] = *thermal.temperature_k;
  if (thermal.j_thermal) j["j_thermal"] = *thermal.j_thermal;
  if (kick) {
    nlohmann::json k;
    if (kick->kick_strength) k["strength"] = *kick->kick_strength;
    if (kick->peak_intensity_w_cm2) k["intensity_w_cm2"] = *kick->peak_intensity_w_cm2;
    if (kick->fwhm_s) k["fwhm_ps"] = *kick->fwhm_s * 1e12;
    k["axis"] = kick->polarization == KickAxis::z_parallel ? "z" : "x";
    j["kick"] = k;
  }
  j["beam"] = {{"intensity_w_cm2", beam.peak_intensity_w_cm2},
               {"waist_um", beam.waist_m * 1e6},
               {"tau_ns", beam.fwhm_s * 1e9}};
  j["geometry"] = {{"vx_m_s", geometry.v_x_m_s}, {"impact_um", geometry.impact_z_m * 1e6}};
  j["mode"] = deflection::to_string(mode);
  if (samples) j["samples"] = *samples;
  j["seed"] = seed;
  j["threads"] = threads;
  j["bins"] = bins;
  j["out_dir"] = out_dir;
  if (!kick_list.empty()) j["kicks"] = kick_list;
  if (!j_thermal_list.empty()) j["j_thermal_list"] = j_thermal_list;
  if (!source.empty()) j["config_file"] = source;
  return j;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream in(strip_hash_comments(text));
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": line " + std::to_string(e.line()) + ": " + e.message());
  }

  ScenarioConfig cfg;
  cfg.source = source;
  std::optional<double> kick_strength, kick_intensity, kick_fwhm_ps;
  std::optional<double> temperature_k, j_thermal;
  KickAxis axis = KickAxis::z_parallel;
  bool kick_section = false;
  std::map<std::string, std::string> species_fields;

  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(source + ": key '" + section + "' outside of any [section]");
    }
    if (known == known_keys().end()) throw ConfigError(source + ": unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      if (!known->second.contains(key)) throw ConfigError(field + ": unknown key");
      const std::string value = boost::algorithm::trim_copy(node.data());
      if (section == "species") {
        if (key == "name") {
          cfg.species_name = value;
        } else if (key == "file") {
          cfg.species_file = value;
        } else {
          species_fields[key] = value;
        }
      } else if (section == "thermal") {
        const double v = parse_double(field, value);
        if (key == "temperature_k") {
          temperature_k = v;
        } else {
          j_thermal = v;
        }
      } else if (section == "kick") {
        kick_section = true;
        if (key == "strength") kick_strength = parse_double(field, value);
        if (key == "intensity_w_cm2") kick_intensity = parse_double(field, value);
        if (key == "fwhm_ps") kick_fwhm_ps = parse_double(field, value);
        if (key == "axis") axis = parse_axis(field, value);
      } else if (section == "beam") {
        const double v = parse_double(field, value);
        if (key == "intensity_w_cm2") cfg.beam.peak_intensity_w_cm2 = v;
        if (key == "waist_um") cfg.beam.waist_m = v * 1e-6;
        if (key == "tau_ns") cfg.beam.fwhm_s = v * 1e-9;
      } else if (section == "geometry") {
        const double v = parse_double(field, value);
        if (key == "vx_m_s") cfg.geometry.v_x_m_s = v;
        if (key == "impact_um") cfg.geometry.impact_z_m = v * 1e-6;
      } else if (section == "ensemble") {
        if (key == "samples") cfg.samples = parse_integer<std::size_t>(field, value);
        if (key == "seed") cfg.seed = parse_integer<std::uint64_t>(field, value);
        if (key == "threads") cfg.threads = parse_integer<unsigned>(field, value);
      } else if (section == "output") {
        if (key == "dir") cfg.out_dir = value;
        if (key == "bins") cfg.bins = parse_integer<std::size_t>(field, value);
        if (key == "dump_samples") cfg.dump_samples = parse_bool(field, value);
      } else if (section == "run") {
        cfg.mode = parse_mode_field(field, value);
      } else if (section == "asymptotics") {
        if (key == "kicks") cfg.kick_list = parse_list(field, value);
        if (key == "j_thermal") cfg.j_thermal_list = parse_list(field, value);
      }
    }
  }

  if (temperature_k && j_thermal) throw ConfigError("thermal: give temperature_k or j_thermal, not both");
  if (temperature_k) cfg.thermal = ThermalSpec::from_temperature(*temperature_k);
  if (j_thermal) cfg.thermal = ThermalSpec::from_j_thermal(*j_thermal);

  if (kick_section) {
    if (kick_strength && (kick_intensity || kick_fwhm_ps)) {
      throw ConfigError("kick: give strength or intensity_w_cm2 with fwhm_ps, not both");
    }
    if (kick_strength) {
      cfg.kick = KickPulse::with_strength(*kick_strength, axis);
    } else if (kick_intensity && kick_fwhm_ps) {
      cfg.kick = KickPulse::from_pulse(*kick_intensity, *kick_fwhm_ps * 1e-12, axis);
    } else {
      throw ConfigError("kick: needs strength, or intensity_w_cm2 together with fwhm_ps");
    }
  }

  if (!species_fields.empty()) {
    const char* required[] = {"alpha_parallel_a3", "alpha_perp_a3", "b_cm1", "mass_amu"};
    MolecularSpecies s;
    s.name = cfg.species_name;
    for (const char* r : required) {
      if (!species_fields.contains(r)) throw ConfigError(std::string("species.") + r + ": missing for inline record");
    }
    s.alpha_parallel_a3 = parse_double("species.alpha_parallel_a3", species_fields["alpha_parallel_a3"]);
    s.alpha_perp_a3 = parse_double("species.alpha_perp_a3", species_fields["alpha_perp_a3"]);
    s.b_cm1 = parse_double("species.b_cm1", species_fields["b_cm1"]);
    s.mass_amu = parse_double("species.mass_amu", species_fields["mass_amu"]);
    if (species_fields.contains("j_parity")) {
      try {
        s.j_parity = parse_j_parity(species_fields["j_parity"]);
      } catch (const Error& e) {
        throw ConfigError(std::string("species.j_parity: ") + e.what());
      }
    }
    cfg.inline_species = s;
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

void apply_overrides(ScenarioConfig& cfg, const ConfigOverrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.samples) cfg.samples = *o.samples;
  if (o.bins) cfg.bins = *o.bins;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.species) {
    cfg.species_name = *o.species;
    cfg.inline_species.reset();
  }
  if (o.species_file) cfg.species_file = *o.species_file;
  if (o.j_thermal && o.temperature_k) throw ConfigError("--jt and --temp are mutually exclusive");
  if (o.j_thermal) cfg.thermal = ThermalSpec::from_j_thermal(*o.j_thermal);
  if (o.temperature_k) cfg.thermal = ThermalSpec::from_temperature(*o.temperature_k);
  if (o.kick_axis) {
    const KickAxis axis = parse_axis("--kick-axis", *o.kick_axis);
    if (cfg.kick) cfg.kick->polarization = axis;
    if (o.kick) cfg.kick = KickPulse::with_strength(*o.kick, axis);
  } else if (o.kick) {
    cfg.kick = KickPulse::with_strength(*o.kick, cfg.kick ? cfg.kick->polarization : KickAxis::z_parallel);
  }
  // A zero kick on the command line switches prealignment off.
  if (cfg.kick && cfg.kick->kick_strength && *cfg.kick->kick_strength == 0.0) cfg.kick.reset();
  if (o.intensity_w_cm2) cfg.beam.peak_intensity_w_cm2 = *o.intensity_w_cm2;
  if (o.waist_um) cfg.beam.waist_m = *o.waist_um * 1e-6;
  if (o.tau_ns) cfg.beam.fwhm_s = *o.tau_ns * 1e-9;
  if (o.v_x) cfg.geometry.v_x_m_s = *o.v_x;
  if (o.impact_um) cfg.geometry.impact_z_m = *o.impact_um * 1e-6;
  if (o.mode) cfg.mode = parse_mode_field("--mode", *o.mode);
  if (o.threads) cfg.threads = *o.threads;
  if (o.kick_list) cfg.kick_list = *o.kick_list;
  if (o.j_thermal_list) cfg.j_thermal_list = *o.j_thermal_list;
  if (o.dump_samples) cfg.dump_samples = true;
}

MolecularSpecies resolve_species(const ScenarioConfig& cfg) {
  try {
    if (cfg.inline_species) {
      cfg.inline_species->validate();
      return *cfg.inline_species;
    }
    const auto registry =
        cfg.species_file.empty() ? SpeciesRegistry::builtin() : SpeciesRegistry::from_file(cfg.species_file);
    const auto s = registry.at(cfg.species_name);
    s.validate();
    return s;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("species: ") + e.what());
  }
}

void validate(const ScenarioConfig& cfg) {
  const auto species = resolve_species(cfg);
  auto positive = [](const std::string& field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field + ": must be positive");
  };
  if (cfg.thermal.temperature_k) positive("thermal.temperature_k", *cfg.thermal.temperature_k);
  if (cfg.thermal.j_thermal) positive("thermal.j_thermal", *cfg.thermal.j_thermal);
  if (cfg.kick) {
    if (cfg.kick->kick_strength && !(*cfg.kick->kick_strength >= 0.0)) {
      throw ConfigError("kick.strength: must be non-negative");
    }
    if (cfg.kick->peak_intensity_w_cm2) positive("kick.intensity_w_cm2", *cfg.kick->peak_intensity_w_cm2);
    if (cfg.kick->fwhm_s) positive("kick.fwhm_ps", *cfg.kick->fwhm_s);
    try {
      cfg.kick->strength(species);
    } catch (const Error& e) {
      throw ConfigError(std::string("kick: ") + e.what());
    }
  }
  if (!(cfg.beam.peak_intensity_w_cm2 >= 0.0) || !std::isfinite(cfg.beam.peak_intensity_w_cm2)) {
    throw ConfigError("beam.intensity_w_cm2: must be non-negative");
  }
  positive("beam.waist_um", cfg.beam.waist_m);
  positive("beam.tau_ns", cfg.beam.fwhm_s);
  positive("geometry.vx_m_s", cfg.geometry.v_x_m_s);
  if (!std::isfinite(cfg.geometry.impact_z_m)) throw ConfigError("geometry.impact_um: must be finite");
  if (cfg.samples && *cfg.samples < 1) throw ConfigError("ensemble.samples: must be at least 1");
  if (cfg.bins < 2) throw ConfigError("output.bins: must be at least 2");
  if (cfg.out_dir.empty()) throw ConfigError("output.dir: must not be empty");
  for (double p : cfg.kick_list) positive("asymptotics.kicks", p);
  for (double jt : cfg.j_thermal_list) positive("asymptotics.j_thermal", jt);
}

}  // namespace prealign::io
