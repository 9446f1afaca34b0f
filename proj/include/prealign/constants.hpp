#pragma once

#include <numbers>

// SI values (exact where the 2019 SI fixes them, CODATA 2018 otherwise).
namespace prealign::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double hbar = planck / (2.0 * pi);          // J s
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double boltzmann = 1.380649e-23;            // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;    // kg
inline constexpr double electron_volt = 1.602176634e-19;         // J

inline constexpr double cubic_angstrom = 1e-30;    // m^3
inline constexpr double per_cm = 100.0;            // cm^-1 -> m^-1
inline constexpr double w_per_cm2 = 1e4;           // W/cm^2 -> W/m^2

}  // namespace prealign::constants
