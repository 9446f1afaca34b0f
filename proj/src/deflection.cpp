#include "prealign/deflection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prealign/errors.hpp"
#include "prealign/parallel.hpp"

namespace prealign::deflection {

namespace {

/// Decay rate k of E^2(t) = E^2(0) exp(-k t^2) along x = v_x t.
double decay_rate(const DeflectingBeam& beam, const ScatteringGeometry& geom) {
  const double v = geom.v_x_m_s / beam.waist_m;
  return 2.0 * (v * v + 2.0 * std::numbers::ln2 / (beam.fwhm_s * beam.fwhm_s));
}

double peak_field_squared(const DeflectingBeam& beam, const ScatteringGeometry& geom) {
  const double e0 = beam.e0();
  const double z = geom.impact_z_m / beam.waist_m;
  return e0 * e0 * std::exp(-2.0 * z * z);
}

}  // namespace

void DeflectingBeam::validate() const {
  if (!(peak_intensity_w_cm2 >= 0.0) || !std::isfinite(peak_intensity_w_cm2)) {
    throw DomainError("deflecting intensity must be finite and non-negative");
  }
  if (!(waist_m > 0.0) || !std::isfinite(waist_m)) throw DomainError("beam waist must be positive");
  if (!(fwhm_s > 0.0) || !std::isfinite(fwhm_s)) throw DomainError("deflecting pulse FWHM must be positive");
}

void ScatteringGeometry::validate() const {
  if (!(v_x_m_s > 0.0) || !std::isfinite(v_x_m_s)) throw DomainError("beam velocity v_x must be positive");
  if (!std::isfinite(impact_z_m)) throw DomainError("impact parameter must be finite");
}

double gamma0(const MolecularSpecies& species, const DeflectingBeam& beam, const ScatteringGeometry& geom) {
  beam.validate();
  geom.validate();
  const double e0 = beam.e0();
  const double v = geom.v_x_m_s;
  const double w0 = beam.waist_m;
  const double z = geom.impact_z_m;
  const double stretch = 1.0 + 2.0 * w0 * w0 * std::numbers::ln2 / (beam.fwhm_s * beam.fwhm_s * v * v);
  return species.mean_polarizability_si() * e0 * e0 / (4.0 * species.mass_kg() * v * v) * (-4.0 * z / w0) *
         std::sqrt(0.5 * std::numbers::pi) / std::sqrt(stretch) * std::exp(-2.0 * z * z / (w0 * w0));
}

double deflect_weak(double a, const MolecularSpecies& species, const DeflectingBeam& beam,
                    const ScatteringGeometry& geom) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("alignment factor must lie in [0, 1]");
  const double effective = species.alpha_parallel_a3 * a + species.alpha_perp_a3 * (1.0 - a);
  return gamma0(species, beam, geom) * effective / species.mean_polarizability_a3();
}

double field_squared_at(const DeflectingBeam& beam, const ScatteringGeometry& geom, double t_s) {
  return peak_field_squared(beam, geom) * std::exp(-decay_rate(beam, geom) * t_s * t_s);
}

double time_window(const DeflectingBeam& beam, const ScatteringGeometry& geom) {
  return std::max(3.0 * beam.fwhm_s, 6.0 * beam.waist_m / geom.v_x_m_s);
}

std::vector<double> trajectory_grid(const DeflectingBeam& beam, const ScatteringGeometry& geom,
                                    const TrajectoryOptions& options) {
  beam.validate();
  geom.validate();
  if (!(options.max_e2_ratio > 1.0) || !(options.e2_floor > 0.0 && options.e2_floor < 1.0)) {
    throw DomainError("trajectory grid needs max_e2_ratio > 1 and 0 < e2_floor < 1");
  }
  const double k = decay_rate(beam, geom);
  const double window = time_window(beam, geom);
  // E^2 ratio between t_i and t_{i+1} is exp(k (t_{i+1}^2 - t_i^2)); the
  // extra cap keeps the trapezoid rule accurate near the peak.
  const double dt2 = std::log(options.max_e2_ratio) / k;
  const double dt_cap = 1.0 / (40.0 * std::sqrt(k));
  const double t_floor = std::min(window, std::sqrt(-std::log(options.e2_floor) / k));
  std::vector<double> t{0.0};
  while (t.back() < t_floor) {
    const double last = t.back();
    const double next = std::min(std::sqrt(last * last + dt2), last + dt_cap);
    t.push_back(std::min(next, t_floor));
  }
  return t;
}

TrajectoryResult deflect_strong_trajectory(const strongfield::AdiabaticRecord& rotor, const MolecularSpecies& species,
                                           const DeflectingBeam& beam, const ScatteringGeometry& geom,
                                           const TrajectoryOptions& options) {
  TrajectoryResult out;
  if (beam.peak_intensity_w_cm2 == 0.0) {
    auto rec = rotor;
    const auto st = strongfield::solve_energy(rec, 0.0, species, options.solve);
    out.peak_mean_u = st.mean_u;
    out.peak_regime = st.roots.regime;
    return out;
  }
  const auto t = trajectory_grid(beam, geom, options);
  out.grid_points = t.size();
  const double d_ln_e2_dz = -4.0 * geom.impact_z_m / (beam.waist_m * beam.waist_m);

  // Walk in from the tail, where H is close to H0, toward the peak; the
  // solution depends only on E^2, so the order is free.
  std::vector<double> force(t.size());
  auto rec = rotor;
  const strongfield::Regime free_regime = rotor.regime;
  double prev_e2 = 0.0, prev_h = rotor.h0;
  double prev2_e2 = 0.0, prev2_h = rotor.h0;
  for (std::size_t n = t.size(); n-- > 0;) {
    const double e2 = field_squared_at(beam, geom, t[n]);
    // Linear extrapolation of H in E^2 as the Newton starting point.
    if (prev_e2 > prev2_e2) rec.h = prev_h + (prev_h - prev2_h) * (e2 - prev_e2) / (prev_e2 - prev2_e2);
    const auto st = strongfield::solve_energy(rec, std::sqrt(e2), species, options.solve);
    if (st.roots.regime != free_regime) out.separatrix_crossed = true;
    const double effective = species.anisotropy_si() * st.mean_u + species.alpha_perp_si();
    force[n] = 0.25 * effective * d_ln_e2_dz * e2;
    prev2_e2 = prev_e2;
    prev2_h = prev_h;
    prev_e2 = e2;
    prev_h = st.h;
    if (n == 0) {
      out.peak_mean_u = st.mean_u;
      out.peak_regime = st.roots.regime;
    }
  }

  double impulse = 0.0;
  for (std::size_t n = 0; n + 1 < t.size(); ++n) impulse += 0.5 * (force[n] + force[n + 1]) * (t[n + 1] - t[n]);
  // Beyond the last grid point <u> is frozen and the Gaussian envelope is
  // integrated exactly up to the end of the window.
  const double t_last = t.back();
  const double window = time_window(beam, geom);
  if (window > t_last) {
    const double rk = std::sqrt(decay_rate(beam, geom));
    impulse += force.back() * std::exp(rk * rk * t_last * t_last) * std::sqrt(std::numbers::pi) / (2.0 * rk) *
               (std::erfc(rk * t_last) - std::erfc(rk * window));
  }
  // The envelope is even in t.
  out.v_z = 2.0 * impulse / species.mass_kg();
  out.gamma = out.v_z / geom.v_x_m_s;
  return out;
}

std::string to_string(Mode mode) { return mode == Mode::weak ? "weak" : "strong"; }

Mode parse_mode(const std::string& text) {
  if (text == "weak") return Mode::weak;
  if (text == "strong") return Mode::strong;
  throw DomainError("mode must be weak or strong, got '" + text + "'");
}

DeflectionResult deflection_distribution(const classical::EnsembleSpec& spec, const std::optional<KickPulse>& pulse,
                                         const MolecularSpecies& species, const DeflectingBeam& beam,
                                         const ScatteringGeometry& geom, Mode mode,
                                         const TrajectoryOptions& options) {
  beam.validate();
  geom.validate();
  if (spec.n_samples < 1) throw DomainError("ensemble needs at least one sample");
  const double temperature = spec.thermal.resolve(species).temperature_k;
  const double p_s = classical::reduced_kick_strength(species, spec.thermal, pulse);
  const KickAxis axis = pulse ? pulse->polarization : KickAxis::z_parallel;
  const double g0 = gamma0(species, beam, geom);

  enum class Outcome : unsigned char { ok, rejected, failed };
  struct Slot {
    Outcome outcome = Outcome::ok;
    double a = 0.0;
    TrajectoryResult traj;
  };
  std::vector<Slot> slots(spec.n_samples);
  parallel_for(slots.size(), spec.threads, [&](std::size_t i) {
    auto& slot = slots[i];
    const auto s = classical::apply_kick(classical::sample_thermal_one(spec.rng, i), p_s, axis);
    try {
      slot.a = classical::time_averaged_alignment(s);
      if (mode == Mode::weak) {
        const double effective = species.alpha_parallel_a3 * slot.a + species.alpha_perp_a3 * (1.0 - slot.a);
        slot.traj.gamma = g0 * effective / species.mean_polarizability_a3();
        slot.traj.v_z = slot.traj.gamma * geom.v_x_m_s;
      } else {
        const auto rec = strongfield::AdiabaticRecord::from_rotor(species, s, temperature);
        slot.traj = deflect_strong_trajectory(rec, species, beam, geom, options);
      }
    } catch (const DegenerateRotor&) {
      slot.outcome = Outcome::rejected;
    } catch (const NumericalFailure&) {
      slot.outcome = Outcome::failed;
    } catch (const InadmissibleState&) {
      slot.outcome = Outcome::failed;
    }
  });

  DeflectionResult out;
  for (const auto& slot : slots) {
    if (slot.outcome == Outcome::rejected) {
      ++out.rejected;
      continue;
    }
    if (slot.outcome == Outcome::failed) {
      ++out.failed;
      continue;
    }
    out.v_z.push_back(slot.traj.v_z);
    out.gamma.push_back(slot.traj.gamma);
    out.alignment.push_back(slot.a);
    if (mode == Mode::strong) {
      out.peak_mean_u.push_back(slot.traj.peak_mean_u);
      if (slot.traj.separatrix_crossed) ++out.separatrix_crossed;
      if (slot.traj.peak_regime == strongfield::Regime::pendular) ++out.pendular_at_peak;
    }
  }
  return out;
}

}  // namespace prealign::deflection
