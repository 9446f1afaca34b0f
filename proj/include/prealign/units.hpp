#pragma once

#include <optional>

#include "prealign/species.hpp"

namespace prealign {

/// Temperature or dimensionless thermal angular momentum J_T = sqrt(kT / hBc).
/// Exactly one of the two is set; resolve() derives the other.
struct ThermalSpec {
  std::optional<double> temperature_k;
  std::optional<double> j_thermal;

  static ThermalSpec from_temperature(double kelvin) { return {kelvin, std::nullopt}; }
  static ThermalSpec from_j_thermal(double jt) { return {std::nullopt, jt}; }

  struct Resolved {
    double temperature_k;
    double j_thermal;
  };
  /// Throws DomainError unless exactly one positive field is given.
  Resolved resolve(const MolecularSpecies& species) const;
};

double j_thermal_from_temperature(const MolecularSpecies& species, double kelvin);
double temperature_from_j_thermal(const MolecularSpecies& species, double jt);

enum class KickAxis { z_parallel, x_perpendicular };

/// Impulsive prealignment pulse. Either the dimensionless kick strength P is
/// given directly, or a Gaussian pulse peak intensity and FWHM.
struct KickPulse {
  std::optional<double> kick_strength;
  std::optional<double> peak_intensity_w_cm2;
  std::optional<double> fwhm_s;
  KickAxis polarization = KickAxis::z_parallel;

  static KickPulse with_strength(double p, KickAxis axis = KickAxis::z_parallel) {
    return {p, std::nullopt, std::nullopt, axis};
  }
  static KickPulse from_pulse(double intensity_w_cm2, double fwhm, KickAxis axis = KickAxis::z_parallel) {
    return {std::nullopt, intensity_w_cm2, fwhm, axis};
  }

  /// Dimensionless P. Throws DomainError for negative or missing inputs.
  double strength(const MolecularSpecies& species) const;
};

/// Peak field amplitude E0 for a cycle-averaged intensity I = eps0 c E0^2 / 2.
double field_amplitude_from_intensity(double intensity_w_cm2);
double intensity_from_field_amplitude(double e0_v_per_m);

/// P = (delta alpha / 4 hbar) * integral of eps^2 dt for a Gaussian intensity
/// envelope exp(-4 ln2 t^2 / fwhm^2). Negative anisotropy gives P < 0.
double kick_strength_from_pulse(const MolecularSpecies& species, double peak_intensity_w_cm2, double fwhm_s);
/// Peak intensity that yields kick strength P for the given FWHM.
double pulse_intensity_for_kick(const MolecularSpecies& species, double kick_strength, double fwhm_s);

/// Kick strength in thermal momentum units: P hbar / sqrt(k T I).
double reduced_kick(const MolecularSpecies& species, double temperature_k, double kick_strength);

/// Depth of the alignment well, delta alpha E0^2 / 4, in joules.
double alignment_well_depth(const MolecularSpecies& species, double intensity_w_cm2);

}  // namespace prealign
