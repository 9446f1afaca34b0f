#include "prealign/species.hpp"

#include <boost/algorithm/string.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "prealign/constants.hpp"
#include "prealign/errors.hpp"

namespace prealign {

namespace {

double polarizability_si(double volume_a3) {
  return 4.0 * constants::pi * constants::vacuum_permittivity * volume_a3 * constants::cubic_angstrom;
}

double parse_field(const std::string& text, const std::string& field, const std::string& where) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw InvalidSpecies(where + ": cannot parse " + field + " from '" + text + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(JParity parity) {
  switch (parity) {
    case JParity::even_only:
      return "even_only";
    case JParity::odd_only:
      return "odd_only";
    case JParity::all:
      break;
  }
  return "all";
}

JParity parse_j_parity(std::string_view text) {
  if (text == "all") return JParity::all;
  if (text == "even_only" || text == "even") return JParity::even_only;
  if (text == "odd_only" || text == "odd") return JParity::odd_only;
  throw InvalidSpecies("unknown j_parity '" + std::string(text) + "'");
}

void MolecularSpecies::validate() const {
  auto positive = [this](double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw InvalidSpecies("species '" + name + "': " + field + " must be positive and finite");
    }
  };
  if (name.empty()) throw InvalidSpecies("species name is empty");
  positive(alpha_parallel_a3, "alpha_par_A3");
  positive(alpha_perp_a3, "alpha_perp_A3");
  positive(b_cm1, "B_cm1");
  positive(mass_amu, "mass_amu");
}

double MolecularSpecies::alpha_parallel_si() const { return polarizability_si(alpha_parallel_a3); }
double MolecularSpecies::alpha_perp_si() const { return polarizability_si(alpha_perp_a3); }
double MolecularSpecies::mean_polarizability_si() const { return polarizability_si(mean_polarizability_a3()); }
double MolecularSpecies::anisotropy_si() const { return polarizability_si(anisotropy_a3()); }
double MolecularSpecies::mass_kg() const { return mass_amu * constants::atomic_mass_unit; }
double MolecularSpecies::b_per_m() const { return b_cm1 * constants::per_cm; }

double moment_of_inertia(const MolecularSpecies& species) {
  if (!(species.b_cm1 > 0.0) || !std::isfinite(species.b_cm1)) {
    throw InvalidSpecies("species '" + species.name + "': rotational constant must be positive");
  }
  return constants::hbar / (4.0 * constants::pi * species.b_per_m() * constants::speed_of_light);
}

MolecularSpecies carbon_disulfide() {
  return MolecularSpecies{"CS2", 15.14, 5.54, 0.109, 76.14, JParity::even_only};
}

SpeciesRegistry::SpeciesRegistry(std::vector<MolecularSpecies> records) : records_(std::move(records)) {
  for (const auto& r : records_) r.validate();
}

SpeciesRegistry SpeciesRegistry::from_stream(std::istream& in, const std::string& source) {
  std::vector<MolecularSpecies> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    boost::algorithm::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    boost::algorithm::split(fields, line, boost::is_any_of(","));
    for (auto& f : fields) boost::algorithm::trim(f);
    const std::string where = source + ":" + std::to_string(line_no);
    if (fields.size() != 6) {
      throw InvalidSpecies(where + ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    MolecularSpecies s;
    s.name = fields[0];
    s.alpha_parallel_a3 = parse_field(fields[1], "alpha_par_A3", where);
    s.alpha_perp_a3 = parse_field(fields[2], "alpha_perp_A3", where);
    s.b_cm1 = parse_field(fields[3], "B_cm1", where);
    s.mass_amu = parse_field(fields[4], "mass_amu", where);
    s.j_parity = parse_j_parity(fields[5]);
    s.validate();
    records.push_back(std::move(s));
  }
  return SpeciesRegistry(std::move(records));
}

SpeciesRegistry SpeciesRegistry::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpecies("cannot open species file " + path.string());
  return from_stream(in, path.string());
}

SpeciesRegistry SpeciesRegistry::builtin() {
  const std::filesystem::path shipped = PREALIGN_DEFAULT_SPECIES_FILE;
  std::error_code ec;
  if (std::filesystem::exists(shipped, ec)) return from_file(shipped);
  return SpeciesRegistry({carbon_disulfide()});
}

std::optional<MolecularSpecies> SpeciesRegistry::find(std::string_view name) const {
  for (const auto& r : records_) {
    if (boost::algorithm::iequals(r.name, name)) return r;
  }
  return std::nullopt;
}

const MolecularSpecies& SpeciesRegistry::at(std::string_view name) const {
  for (const auto& r : records_) {
    if (boost::algorithm::iequals(r.name, name)) return r;
  }
  std::string known;
  for (const auto& r : records_) known += (known.empty() ? "" : ", ") + r.name;
  throw InvalidSpecies("unknown species '" + std::string(name) + "' (known: " + known + ")");
}

void SpeciesRegistry::write(std::ostream& out) const {
  out << "# name,alpha_par_A3,alpha_perp_A3,B_cm1,mass_amu,j_parity\n";
  for (const auto& r : records_) {
    out << r.name << ',' << r.alpha_parallel_a3 << ',' << r.alpha_perp_a3 << ',' << r.b_cm1 << ','
        << r.mass_amu << ',' << to_string(r.j_parity) << '\n';
  }
}

}  // namespace prealign
