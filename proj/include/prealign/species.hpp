#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prealign {

/// Which rotational levels nuclear spin statistics allow.
enum class JParity { all, even_only, odd_only };

std::string_view to_string(JParity parity);
JParity parse_j_parity(std::string_view text);

/// True if level J is populated for the given parity restriction.
constexpr bool allows(JParity parity, int j) {
  switch (parity) {
    case JParity::even_only:
      return j % 2 == 0;
    case JParity::odd_only:
      return j % 2 != 0;
    case JParity::all:
      break;
  }
  return true;
}

/// Linear molecule: polarizability volumes (cubic angstrom), rotational
/// constant (cm^-1) and mass (amu). SI accessors do the conversions.
struct MolecularSpecies {
  std::string name;
  double alpha_parallel_a3 = 0.0;
  double alpha_perp_a3 = 0.0;
  double b_cm1 = 0.0;
  double mass_amu = 0.0;
  JParity j_parity = JParity::all;

  /// Throws InvalidSpecies unless all scalar fields are positive and finite.
  void validate() const;

  double mean_polarizability_a3() const { return (alpha_parallel_a3 + 2.0 * alpha_perp_a3) / 3.0; }
  double anisotropy_a3() const { return alpha_parallel_a3 - alpha_perp_a3; }

  // Polarizabilities in C m^2 / V (4 pi eps0 times the volume).
  double alpha_parallel_si() const;
  double alpha_perp_si() const;
  double mean_polarizability_si() const;
  double anisotropy_si() const;

  double mass_kg() const;
  double b_per_m() const;
};

/// I = hbar / (4 pi B c). Throws InvalidSpecies for non-positive B.
double moment_of_inertia(const MolecularSpecies& species);

/// The CS2 record shipped with the library.
MolecularSpecies carbon_disulfide();

/// Records parsed from the species data file (CSV with header comment lines).
class SpeciesRegistry {
 public:
  SpeciesRegistry() = default;
  explicit SpeciesRegistry(std::vector<MolecularSpecies> records);

  static SpeciesRegistry from_stream(std::istream& in, const std::string& source = "<stream>");
  static SpeciesRegistry from_file(const std::filesystem::path& path);
  /// Shipped data file if present, otherwise the built-in CS2 record.
  static SpeciesRegistry builtin();

  std::optional<MolecularSpecies> find(std::string_view name) const;
  /// Like find() but throws InvalidSpecies with the known names.
  const MolecularSpecies& at(std::string_view name) const;
  const std::vector<MolecularSpecies>& records() const { return records_; }

  void write(std::ostream& out) const;

 private:
  std::vector<MolecularSpecies> records_;
};

}  // namespace prealign
