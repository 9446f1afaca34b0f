#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "prealign/rng.hpp"
#include "prealign/species.hpp"
#include "prealign/stats.hpp"
#include "prealign/units.hpp"

namespace prealign::classical {

/// Free rotor in reduced variables: momenta in units of sqrt(k T I), time
/// t' in units of sqrt(I / k T).
struct ClassicalRotorState {
  double theta = 0.5 * 3.14159265358979323846;
  double phi = 0.0;
  double p_theta = 0.0;
  double p_phi = 0.0;

  /// Reduced angular speed sqrt(P_theta^2 + P_phi^2 / sin^2 theta).
  double omega() const;
  /// Throws DomainError on non-finite fields or sin(theta) = 0 with P_phi != 0.
  void validate() const;
};

struct EnsembleSpec {
  std::size_t n_samples = 1'000'000;
  ThermalSpec thermal = ThermalSpec::from_j_thermal(15.0);
  RngSpec rng;
  unsigned threads = 0;
};

/// Thermal rotor number `index` of the ensemble stream. Sample k is the same
/// whatever n_samples or the thread count.
ClassicalRotorState sample_thermal_one(const RngSpec& rng, std::uint64_t index);
std::vector<ClassicalRotorState> sample_thermal(const EnsembleSpec& spec);

/// Impulsive kick of reduced strength p_s along z or x.
ClassicalRotorState apply_kick(const ClassicalRotorState& state, double p_s, KickAxis axis);

/// Reduced kick P hbar / sqrt(k T I) = sqrt(2) P / J_T for the ensemble's
/// temperature. Zero when there is no pulse.
double reduced_kick_strength(const MolecularSpecies& species, const ThermalSpec& thermal,
                             const std::optional<KickPulse>& pulse);

/// Time average of cos^2 theta under free rotation. Throws DegenerateRotor
/// when omega = 0.
double time_averaged_alignment(const ClassicalRotorState& state);

/// cos theta at reduced time t' after the state was prepared.
double cos_theta_at(const ClassicalRotorState& state, double t_reduced);

struct AlignmentDistribution {
  std::vector<double> samples;
  std::size_t rejected = 0;

  Histogram histogram(std::size_t bins = 200) const { return Histogram::of_samples(samples, 0.0, 1.0, bins); }
  Summary summary() const { return summarize(samples); }
};

/// Thermal sampling, optional kick, then A per rotor. Degenerate rotors are
/// dropped and counted.
AlignmentDistribution ensemble_alignment_distribution(const EnsembleSpec& spec, const MolecularSpecies& species,
                                                      const std::optional<KickPulse>& pulse);

enum class RainbowVariant { thermal, perpendicular };

/// 1/sqrt(1 - 2A) (thermal) or (sqrt2/pi)/sqrt(A(1 - 2A)) (perpendicular) on
/// the support; zero outside it.
double rainbow_reference_pdf(double a, RainbowVariant variant);
double rainbow_reference_cdf(double a, RainbowVariant variant);
/// Mean and standard deviation of the reference laws.
std::pair<double, double> rainbow_reference_moments(RainbowVariant variant);

/// Large-kick mean and standard deviation of A for a z kick:
/// 1/2 - (sqrt(pi)/8)(J_T/P) and sqrt((sqrt(pi)/32)(J_T/P)).
std::pair<double, double> parallel_kick_asymptotics(double kick_strength, double j_thermal);

/// Ensemble mean of cos^2 theta at each reduced time. Degenerate rotors are
/// skipped; the count is written to *rejected when given.
std::vector<double> classical_alignment_trace(std::span<const ClassicalRotorState> states,
                                              std::span<const double> times_reduced, unsigned threads = 0,
                                              std::size_t* rejected = nullptr);

/// Conversion of a lab time to reduced time t' = t sqrt(k T / I).
double reduced_time(const MolecularSpecies& species, double temperature_k, double t_s);

}  // namespace prealign::classical
