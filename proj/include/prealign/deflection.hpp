#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prealign/classical.hpp"
#include "prealign/species.hpp"
#include "prealign/stats.hpp"
#include "prealign/strongfield.hpp"
#include "prealign/units.hpp"

namespace prealign::deflection {

/// Gaussian deflecting pulse polarized along z. The field amplitude is
/// E0 exp[-(x^2 + z^2)/w0^2] exp[-2 ln2 t^2 / tau^2].
struct DeflectingBeam {
  double peak_intensity_w_cm2 = 3e9;
  double waist_m = 7e-6;
  double fwhm_s = 14e-9;

  double e0() const { return field_amplitude_from_intensity(peak_intensity_w_cm2); }
  /// Throws DomainError unless the waist and FWHM are positive and the
  /// intensity is non-negative.
  void validate() const;
};

/// Straight line x = v_x t at fixed impact parameter z.
struct ScatteringGeometry {
  double v_x_m_s = 500.0;
  double impact_z_m = -4e-6;

  void validate() const;
};

/// Mean deflection angle of an isotropic ensemble (radians).
double gamma0(const MolecularSpecies& species, const DeflectingBeam& beam, const ScatteringGeometry& geom);

/// Weak-field angle gamma0 [alpha_par A + alpha_perp (1 - A)] / alpha_mean.
double deflect_weak(double a, const MolecularSpecies& species, const DeflectingBeam& beam,
                    const ScatteringGeometry& geom);

/// Squared field amplitude seen by the molecule at time t (V^2/m^2).
double field_squared_at(const DeflectingBeam& beam, const ScatteringGeometry& geom, double t_s);

struct TrajectoryOptions {
  /// Largest ratio of E^2 between neighbouring grid points.
  double max_e2_ratio = 1.005;
  /// The adaptive grid stops once E^2 falls below this fraction of its peak.
  /// The rest of the window is integrated analytically with <u> frozen.
  double e2_floor = 1e-6;
  strongfield::SolveOptions solve;
};

struct TrajectoryResult {
  double v_z = 0.0;
  double gamma = 0.0;
  double peak_mean_u = 0.0;
  strongfield::Regime peak_regime = strongfield::Regime::rotating;
  bool separatrix_crossed = false;
  std::size_t grid_points = 0;
};

/// Integration window half-width max(3 tau, 6 w0 / v_x).
double time_window(const DeflectingBeam& beam, const ScatteringGeometry& geom);

/// Times 0 = t_0 < t_1 < ... up to where E^2 drops to e2_floor of its peak.
/// The trajectory is even in t, so only this half is sampled.
std::vector<double> trajectory_grid(const DeflectingBeam& beam, const ScatteringGeometry& geom,
                                    const TrajectoryOptions& options = {});

/// Transverse velocity from the time-integrated dipole force with <cos^2>
/// following the adiabatic solution at every grid point.
TrajectoryResult deflect_strong_trajectory(const strongfield::AdiabaticRecord& rotor, const MolecularSpecies& species,
                                           const DeflectingBeam& beam, const ScatteringGeometry& geom,
                                           const TrajectoryOptions& options = {});

enum class Mode { weak, strong };
std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct DeflectionResult {
  /// Per kept molecule, in sample order.
  std::vector<double> v_z;
  std::vector<double> gamma;
  /// Field-free A of the (kicked) rotor.
  std::vector<double> alignment;
  /// <u> at the peak field (strong mode only).
  std::vector<double> peak_mean_u;

  std::size_t rejected = 0;
  std::size_t failed = 0;
  std::size_t separatrix_crossed = 0;
  std::size_t pendular_at_peak = 0;

  Summary v_z_summary() const { return summarize(v_z); }
  Summary gamma_summary() const { return summarize(gamma); }
};

/// Weak mode maps each sampled A through deflect_weak; strong mode integrates
/// a trajectory per rotor. The kick, if any, is applied to the thermal state
/// before H0 and P_phi are taken.
DeflectionResult deflection_distribution(const classical::EnsembleSpec& spec, const std::optional<KickPulse>& pulse,
                                         const MolecularSpecies& species, const DeflectingBeam& beam,
                                         const ScatteringGeometry& geom, Mode mode,
                                         const TrajectoryOptions& options = {});

}  // namespace prealign::deflection
