#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "prealign/species.hpp"
#include "prealign/stats.hpp"
#include "prealign/units.hpp"

namespace prealign::quantum {

/// Exact rational in lowest terms with a positive denominator. Ordering is
/// numeric.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b) { return a.num * b.den < b.num * a.den; }
};

/// <J,m|cos^2 theta|J,m> = 1/3 + (2/3) [J(J+1) - 3m^2] / [(2J+3)(2J-1)], exact.
/// Throws DomainError for J < 0 or |m| > J.
Rational alignment_factor_exact(int j, int m);
double alignment_factor(int j, int m);

enum class Cos2Operator { cos2_theta, cos2_phi_sin2_theta };

/// Matrix element <J',m'|op|J,m> in the Condon-Shortley |J,m> basis. All
/// elements are real; forbidden couplings return 0.
double cos2_matrix_element(int jp, int mp, int j, int m, Cos2Operator op);

/// Coefficients c_{J,m} on the truncated basis 0 <= J <= j_max, |m| <= J.
class QuantumState {
 public:
  explicit QuantumState(int j_max);
  static QuantumState basis_state(int j, int m, int j_max);

  static constexpr std::size_t index(int j, int m) {
    return static_cast<std::size_t>(j * j + j + m);
  }

  int j_max() const { return j_max_; }
  std::size_t size() const { return c_.size(); }

  std::complex<double>& at(int j, int m) { return c_[index(j, m)]; }
  const std::complex<double>& at(int j, int m) const { return c_[index(j, m)]; }
  std::span<std::complex<double>> coefficients() { return c_; }
  std::span<const std::complex<double>> coefficients() const { return c_; }

  double norm() const;
  double population(int j, int m) const { return std::norm(at(j, m)); }
  /// Total population in the `shells` highest J shells.
  double top_shell_population(int shells = 2) const;
  /// sum |c_{J,m}|^2 A_{J,m}: the time average of <cos^2 theta> under free rotation.
  double diagonal_alignment() const;

 private:
  int j_max_;
  std::vector<std::complex<double>> c_;
};

struct KickOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Largest population allowed in the two top shells after the kick.
  double leak_tol = 1e-8;
};

/// Basis size for kicking |J0,...>: J0 + ceil(6P) + 10, at least 20.
int kick_basis_j_max(int j0, double kick_strength);

/// exp(i P op)|psi> with op = cos^2 theta (z axis) or cos^2 phi sin^2 theta
/// (x axis), integrating dc/dxi = i P M c over xi in [0, 1]. The state keeps
/// its j_max. Throws TruncationLeak if the top two shells end up populated.
QuantumState kick_propagate(const QuantumState& state, double kick_strength, KickAxis axis,
                            const KickOptions& options = {});

/// Allowed initial level with its normalized Boltzmann weight (per m state).
struct InitialLevel {
  int j;
  int m;
  double weight;
};

/// Levels |J0,m0> with J0 up to the smallest J whose cumulative Boltzmann
/// weight reaches 1 - cutoff; weights renormalized to sum to one.
std::vector<InitialLevel> boltzmann_levels(const MolecularSpecies& species, const ThermalSpec& thermal,
                                           double cutoff = 1e-6);

struct AlignmentLine {
  Rational a;
  double weight;
};

/// Lines (A_{J,m}, weight) grouped by exact A value, sorted by A.
struct DiscreteAlignmentDistribution {
  std::vector<AlignmentLine> lines;

  double total_weight() const;
  double mean() const;
  double stddev() const;
};

struct ThermalOptions {
  double boltzmann_cutoff = 1e-6;
  unsigned threads = 0;
  KickOptions kick;
};

/// Distribution of A_{J,m} over a thermal ensemble, optionally after an
/// impulsive kick applied to every initial level.
DiscreteAlignmentDistribution thermal_distribution(const MolecularSpecies& species, const ThermalSpec& thermal,
                                                   const std::optional<KickPulse>& pulse,
                                                   const ThermalOptions& options = {});

/// Equal-width bins on [0, 1]. Throws DomainError for bins < 2.
Histogram coarse_grain(const DiscreteAlignmentDistribution& dist, std::size_t bins);

/// Full revival period 1/(2Bc).
double revival_period(const MolecularSpecies& species);

/// <cos^2 theta>(t) under free rotation E_J = hBc J(J+1).
std::vector<double> alignment_expectation_trace(const QuantumState& state, const MolecularSpecies& species,
                                                std::span<const double> times_s);

/// Boltzmann-weighted <cos^2 theta>(t) of a kicked thermal ensemble.
std::vector<double> thermal_alignment_trace(const MolecularSpecies& species, const ThermalSpec& thermal,
                                            const std::optional<KickPulse>& pulse,
                                            std::span<const double> times_s, const ThermalOptions& options = {});

}  // namespace prealign::quantum
