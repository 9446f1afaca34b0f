#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prealign/classical.hpp"
#include "prealign/species.hpp"
#include "prealign/units.hpp"

namespace prealign::strongfield {

/// Coefficients of u' ^2 = g(u) with u = cos^2 theta, all in s^-2 except
/// p_phi_over_i (s^-1).
///   alpha = delta_alpha E^2 / 2I,  beta = (2/I)(H + E^2 alpha_perp / 4)
struct FieldCoefficients {
  double alpha_sf = 0.0;
  double beta_sf = 0.0;
  double p_phi_over_i = 0.0;

  double c() const { return p_phi_over_i * p_phi_over_i; }

  /// Coefficients for energy H (J), angular momentum p_phi (J s) and field
  /// amplitude E (V/m).
  static FieldCoefficients from_state(const MolecularSpecies& species, double h, double p_phi, double e_field);
};

enum class Regime { rotating, pendular, separatrix };
std::string to_string(Regime regime);

/// Roots of g ordered u1 <= u2 <= u3. One of u1, u2 is exactly zero.
/// Rotating: u2 = 0 and the motion covers [0, u3]; u1 is the remaining root
/// when it is negative and 0 when it lies above 1 or does not exist.
/// Pendular: u1 = 0 and the motion covers [u2, u3].
struct RootTriple {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  Regime regime = Regime::rotating;

  double lo() const { return regime == Regime::pendular ? u2 : 0.0; }
  double hi() const { return u3; }
};

/// g(u) = 4u[(1 - u) beta - (P_phi/I)^2 + (1 - u) alpha u].
double g_polynomial(double u, const FieldCoefficients& coeffs);

/// Deflates the root at 0 and solves the remaining quadratic in closed form.
/// Throws InadmissibleState when g has no positive stretch on (0, 1).
RootTriple find_roots(const FieldCoefficients& coeffs);

/// I_theta = (I/4) * integral of sqrt(g)/(u(1-u)) over the oscillation
/// interval (J s). In both regimes this is the phase area swept between the
/// turning points on one side of the equator, so it is continuous across the
/// separatrix. For the free rotor it equals (pi/2)(|J| - |P_phi|).
double adiabatic_invariant(const FieldCoefficients& coeffs, const RootTriple& roots, double inertia);

/// Time average of u over one oscillation. Exactly at the separatrix the
/// period diverges and the limit lo() is returned.
double average_alignment_strong(const FieldCoefficients& coeffs, const RootTriple& roots);

/// Integral of du / sqrt(g) over the oscillation interval (s), which is
/// also dI_theta/dH. Infinite at the separatrix.
double half_period_integral(const FieldCoefficients& coeffs, const RootTriple& roots);

/// Field-free rotor plus its conserved action.
struct AdiabaticRecord {
  double h0 = 0.0;
  double p_phi = 0.0;
  double i_theta0 = 0.0;
  double h = 0.0;
  Regime regime = Regime::rotating;

  /// From a reduced classical state at temperature T. Throws DegenerateRotor
  /// for a rotor at rest.
  static AdiabaticRecord from_rotor(const MolecularSpecies& species, const classical::ClassicalRotorState& state,
                                    double temperature_k);
};

struct SolveOptions {
  double rel_tol = 1e-10;
  int max_iterations = 200;
};

/// Solution of I_theta(H, E) = I_theta0 at one field value.
struct FieldState {
  double h = 0.0;
  FieldCoefficients coeffs;
  RootTriple roots;
  double mean_u = 0.0;
};

/// Solves for H at field amplitude E (V/m) and stores H and the regime in the
/// record. E = 0 returns H0 exactly. Throws NumericalFailure with the root
/// structure when the bracket cannot be established.
FieldState solve_energy(AdiabaticRecord& record, double e_field, const MolecularSpecies& species,
                        const SolveOptions& options = {});

struct StrongAlignmentDistribution {
  std::vector<double> samples;
  std::size_t pendular = 0;
  std::size_t separatrix = 0;
  std::size_t rejected = 0;
  std::size_t failed = 0;

  std::size_t attempted() const { return samples.size() + rejected + failed; }
};

/// <u> at the peak field for a thermal ensemble, optionally kicked first.
StrongAlignmentDistribution peak_alignment_distribution(const classical::EnsembleSpec& spec,
                                                        const MolecularSpecies& species, double peak_intensity_w_cm2,
                                                        const std::optional<KickPulse>& pulse = std::nullopt);

}  // namespace prealign::strongfield
