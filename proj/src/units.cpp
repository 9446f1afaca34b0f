#include "prealign/units.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "prealign/constants.hpp"
#include "prealign/errors.hpp"

namespace prealign {

namespace {

using namespace constants;

// hBc: rotational energy unit, E_J = hBc J(J+1).
double rotational_energy_unit(const MolecularSpecies& species) {
  species.validate();
  return planck * species.b_per_m() * speed_of_light;
}

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) throw DomainError(std::string(what) + " must be positive and finite");
}

// Integral over time of a Gaussian intensity envelope with unit peak.
double gaussian_envelope_area(double fwhm) {
  return fwhm * std::sqrt(pi / (4.0 * std::log(2.0)));
}

}  // namespace

double j_thermal_from_temperature(const MolecularSpecies& species, double kelvin) {
  require_positive(kelvin, "temperature");
  return std::sqrt(boltzmann * kelvin / rotational_energy_unit(species));
}

double temperature_from_j_thermal(const MolecularSpecies& species, double jt) {
  require_positive(jt, "J_T");
  return jt * jt * rotational_energy_unit(species) / boltzmann;
}

ThermalSpec::Resolved ThermalSpec::resolve(const MolecularSpecies& species) const {
  if (temperature_k.has_value() == j_thermal.has_value()) {
    throw DomainError("thermal spec needs exactly one of temperature or J_T");
  }
  if (temperature_k) return {*temperature_k, j_thermal_from_temperature(species, *temperature_k)};
  return {temperature_from_j_thermal(species, *j_thermal), *j_thermal};
}

double KickPulse::strength(const MolecularSpecies& species) const {
  if (kick_strength) {
    if (!std::isfinite(*kick_strength) || *kick_strength < 0.0) {
      throw DomainError("kick strength must be non-negative");
    }
    return *kick_strength;
  }
  if (!peak_intensity_w_cm2 || !fwhm_s) throw DomainError("kick pulse needs a strength or intensity and FWHM");
  return kick_strength_from_pulse(species, *peak_intensity_w_cm2, *fwhm_s);
}

double field_amplitude_from_intensity(double intensity_w_cm2) {
  if (!(intensity_w_cm2 >= 0.0)) throw DomainError("intensity must be non-negative");
  return std::sqrt(2.0 * intensity_w_cm2 * w_per_cm2 / (vacuum_permittivity * speed_of_light));
}

double intensity_from_field_amplitude(double e0_v_per_m) {
  return 0.5 * vacuum_permittivity * speed_of_light * e0_v_per_m * e0_v_per_m / w_per_cm2;
}

double kick_strength_from_pulse(const MolecularSpecies& species, double peak_intensity_w_cm2, double fwhm_s) {
  species.validate();
  if (!(peak_intensity_w_cm2 >= 0.0)) throw DomainError("pulse intensity must be non-negative");
  require_positive(fwhm_s, "pulse FWHM");
  if (species.anisotropy_a3() <= 0.0) {
    std::clog << "warning: species '" << species.name
              << "' has non-positive polarizability anisotropy; the kick defocuses alignment\n";
  }
  const double e0 = field_amplitude_from_intensity(peak_intensity_w_cm2);
  const double fluence_e2 = e0 * e0 * gaussian_envelope_area(fwhm_s);
  return species.anisotropy_si() * fluence_e2 / (4.0 * hbar);
}

double pulse_intensity_for_kick(const MolecularSpecies& species, double kick_strength, double fwhm_s) {
  const double unit = kick_strength_from_pulse(species, 1.0, fwhm_s);
  if (unit == 0.0) throw DomainError("isotropic species cannot be kicked");
  return kick_strength / unit;
}

double reduced_kick(const MolecularSpecies& species, double temperature_k, double kick_strength) {
  require_positive(temperature_k, "temperature");
  return kick_strength * hbar / std::sqrt(boltzmann * temperature_k * moment_of_inertia(species));
}

double alignment_well_depth(const MolecularSpecies& species, double intensity_w_cm2) {
  const double e0 = field_amplitude_from_intensity(intensity_w_cm2);
  return 0.25 * species.anisotropy_si() * e0 * e0;
}

}  // namespace prealign
