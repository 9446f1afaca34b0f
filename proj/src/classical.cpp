#include "prealign/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "prealign/constants.hpp"
#include "prealign/errors.hpp"
#include "prealign/parallel.hpp"

namespace prealign::classical {

using std::numbers::pi;

double ClassicalRotorState::omega() const {
  const double s = std::sin(theta);
  const double w2 = p_theta * p_theta + (p_phi == 0.0 ? 0.0 : p_phi * p_phi / (s * s));
  return std::sqrt(w2);
}

void ClassicalRotorState::validate() const {
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(p_theta) || !std::isfinite(p_phi)) {
    throw DomainError("rotor state has non-finite fields");
  }
  if (p_phi != 0.0 && std::sin(theta) == 0.0) throw DomainError("rotor at the pole with nonzero P_phi");
}

ClassicalRotorState sample_thermal_one(const RngSpec& rng, std::uint64_t index) {
  auto stream = rng_substream(rng, index);
  ClassicalRotorState s;
  // 1 - 2u lies in (-1, 1], so theta never lands exactly on pi.
  const double cos_theta = 1.0 - 2.0 * stream.uniform();
  s.theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
  s.phi = 2.0 * pi * stream.uniform();
  std::normal_distribution<double> normal;
  s.p_theta = normal(stream);
  normal.reset();
  s.p_phi = normal(stream) * std::sin(s.theta);
  return s;
}

std::vector<ClassicalRotorState> sample_thermal(const EnsembleSpec& spec) {
  if (spec.n_samples < 1) throw DomainError("ensemble needs at least one sample");
  std::vector<ClassicalRotorState> out(spec.n_samples);
  parallel_for(out.size(), spec.threads, [&](std::size_t i) { out[i] = sample_thermal_one(spec.rng, i); });
  return out;
}

ClassicalRotorState apply_kick(const ClassicalRotorState& state, double p_s, KickAxis axis) {
  ClassicalRotorState out = state;
  if (p_s == 0.0) return out;
  const double sin2t = std::sin(2.0 * state.theta);
  if (axis == KickAxis::z_parallel) {
    out.p_theta -= p_s * sin2t;
  } else {
    const double c = std::cos(state.phi);
    const double st = std::sin(state.theta);
    out.p_theta += p_s * c * c * sin2t;
    out.p_phi -= p_s * st * st * std::sin(2.0 * state.phi);
  }
  return out;
}

double reduced_kick_strength(const MolecularSpecies& species, const ThermalSpec& thermal,
                             const std::optional<KickPulse>& pulse) {
  if (!pulse) return 0.0;
  const auto t = thermal.resolve(species);
  return reduced_kick(species, t.temperature_k, pulse->strength(species));
}

double time_averaged_alignment(const ClassicalRotorState& state) {
  const double w = state.omega();
  if (!(w > 0.0)) throw DegenerateRotor("rotor has zero angular velocity");
  const double r = state.p_theta / w;
  const double r2 = std::min(r * r, 1.0);
  const double a = 0.25 * (1.0 + r2) + 0.25 * (1.0 - r2) * std::cos(2.0 * state.theta);
  return std::clamp(a, 0.0, 0.5);
}

double cos_theta_at(const ClassicalRotorState& state, double t_reduced) {
  const double w = state.omega();
  if (w == 0.0) return std::cos(state.theta);
  const double r = state.p_theta / w;
  return 0.5 * (1.0 - r) * std::cos(state.theta - w * t_reduced) +
         0.5 * (1.0 + r) * std::cos(state.theta + w * t_reduced);
}

AlignmentDistribution ensemble_alignment_distribution(const EnsembleSpec& spec, const MolecularSpecies& species,
                                                      const std::optional<KickPulse>& pulse) {
  if (spec.n_samples < 1) throw DomainError("ensemble needs at least one sample");
  const double p_s = reduced_kick_strength(species, spec.thermal, pulse);
  const KickAxis axis = pulse ? pulse->polarization : KickAxis::z_parallel;

  // NaN marks a rejected rotor; compaction below keeps index order.
  std::vector<double> a(spec.n_samples);
  parallel_for(a.size(), spec.threads, [&](std::size_t i) {
    const auto s = apply_kick(sample_thermal_one(spec.rng, i), p_s, axis);
    try {
      a[i] = time_averaged_alignment(s);
    } catch (const DegenerateRotor&) {
      a[i] = std::nan("");
    }
  });

  AlignmentDistribution out;
  out.samples.reserve(a.size());
  for (double x : a) {
    if (std::isnan(x)) {
      ++out.rejected;
    } else {
      out.samples.push_back(x);
    }
  }
  return out;
}

double rainbow_reference_pdf(double a, RainbowVariant variant) {
  if (variant == RainbowVariant::thermal) {
    if (a < 0.0 || a >= 0.5) return 0.0;
    return 1.0 / std::sqrt(1.0 - 2.0 * a);
  }
  if (a <= 0.0 || a >= 0.5) return 0.0;
  return std::numbers::sqrt2 / pi / std::sqrt(a * (1.0 - 2.0 * a));
}

double rainbow_reference_cdf(double a, RainbowVariant variant) {
  if (a <= 0.0) return 0.0;
  if (a >= 0.5) return 1.0;
  if (variant == RainbowVariant::thermal) return 1.0 - std::sqrt(1.0 - 2.0 * a);
  return 2.0 / pi * std::asin(std::sqrt(2.0 * a));
}

std::pair<double, double> rainbow_reference_moments(RainbowVariant variant) {
  if (variant == RainbowVariant::thermal) {
    // Substituting s = sqrt(1 - 2A): A = (1 - s^2)/2 with s uniform on [0, 1].
    return {1.0 / 3.0, std::sqrt(1.0 / 45.0)};
  }
  // A = sin^2(x)/2 with x uniform on [0, pi/2]: mean 1/4, E[A^2] = 3/32.
  return {0.25, std::sqrt(3.0 / 32.0 - 1.0 / 16.0)};
}

std::pair<double, double> parallel_kick_asymptotics(double kick_strength, double j_thermal) {
  if (!(kick_strength > 0.0) || !(j_thermal > 0.0)) throw DomainError("asymptotics need P > 0 and J_T > 0");
  const double x = j_thermal / kick_strength;
  const double sqrt_pi = std::sqrt(pi);
  return {0.5 - sqrt_pi / 8.0 * x, std::sqrt(sqrt_pi / 32.0 * x)};
}

std::vector<double> classical_alignment_trace(std::span<const ClassicalRotorState> states,
                                              std::span<const double> times_reduced, unsigned threads,
                                              std::size_t* rejected) {
  // Fixed-size blocks summed in block order keep the result independent of
  // the number of threads.
  constexpr std::size_t block = 4096;
  const std::size_t n_blocks = (states.size() + block - 1) / block;
  std::vector<std::vector<double>> partial(n_blocks, std::vector<double>(times_reduced.size(), 0.0));
  std::vector<std::size_t> kept(n_blocks, 0);
  parallel_for(n_blocks, threads, [&](std::size_t b) {
    const std::size_t end = std::min(states.size(), (b + 1) * block);
    for (std::size_t i = b * block; i < end; ++i) {
      const auto& s = states[i];
      if (!(s.omega() > 0.0)) continue;
      ++kept[b];
      for (std::size_t k = 0; k < times_reduced.size(); ++k) {
        const double c = cos_theta_at(s, times_reduced[k]);
        partial[b][k] += c * c;
      }
    }
  });
  std::vector<double> out(times_reduced.size(), 0.0);
  std::size_t n_kept = 0;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    n_kept += kept[b];
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += partial[b][k];
  }
  if (rejected) *rejected = states.size() - n_kept;
  if (n_kept == 0) throw DegenerateRotor("every rotor in the trace ensemble is degenerate");
  for (double& v : out) v /= static_cast<double>(n_kept);
  return out;
}

double reduced_time(const MolecularSpecies& species, double temperature_k, double t_s) {
  return t_s * std::sqrt(constants::boltzmann * temperature_k / moment_of_inertia(species));
}

}  // namespace prealign::classical
