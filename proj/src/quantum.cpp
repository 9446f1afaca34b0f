#include "prealign/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "prealign/constants.hpp"
#include "prealign/errors.hpp"
#include "prealign/parallel.hpp"

namespace prealign::quantum {

namespace {

bool valid_level(int j, int m) { return j >= 0 && std::abs(m) <= j; }

// <J+2,m|cos^2 theta|J,m>
double cos2_up(int j, int m) {
  const double jj = j;
  const double mm = static_cast<double>(m) * m;
  const double num = ((jj + 1) * (jj + 1) - mm) * ((jj + 2) * (jj + 2) - mm);
  return std::sqrt(num) / ((2 * jj + 3) * std::sqrt((2 * jj + 1) * (2 * jj + 5)));
}

double cos2_theta_element(int jp, int j, int m) {
  if (jp == j) return alignment_factor(j, m);
  if (jp == j + 2) return cos2_up(j, m);
  if (jp == j - 2) return cos2_up(jp, m);
  return 0.0;
}

// <J',m+1| sin(theta) e^{i phi} |J,m>, Condon-Shortley phases.
double raise_element(int jp, int j, int m) {
  if (!valid_level(j, m) || !valid_level(jp, m + 1)) return 0.0;
  const double jj = j;
  if (jp == j + 1) {
    return -std::sqrt((jj + m + 1) * (jj + m + 2) / ((2 * jj + 1) * (2 * jj + 3)));
  }
  if (jp == j - 1) {
    return std::sqrt((jj - m) * (jj - m - 1) / ((2 * jj - 1) * (2 * jj + 1)));
  }
  return 0.0;
}

// <J',m+2| sin^2(theta) e^{2 i phi} |J,m>; the intermediate sum runs over J +- 1 only.
double raise2_element(int jp, int j, int m) {
  double acc = 0.0;
  for (int mid : {j - 1, j + 1}) acc += raise_element(jp, mid, m + 1) * raise_element(mid, j, m);
  return acc;
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

Rational alignment_factor_exact(int j, int m) {
  if (!valid_level(j, m)) {
    throw DomainError("alignment factor needs J >= 0 and |m| <= J (got J=" + std::to_string(j) +
                      ", m=" + std::to_string(m) + ")");
  }
  const std::int64_t jj = j, mm = m;
  const std::int64_t d = (2 * jj + 3) * (2 * jj - 1);
  const std::int64_t n = jj * (jj + 1) - 3 * mm * mm;
  return Rational::make(d + 2 * n, 3 * d);
}

double alignment_factor(int j, int m) { return alignment_factor_exact(j, m).value(); }

double cos2_matrix_element(int jp, int mp, int j, int m, Cos2Operator op) {
  if (!valid_level(j, m) || !valid_level(jp, mp)) return 0.0;
  if (op == Cos2Operator::cos2_theta) return mp == m ? cos2_theta_element(jp, j, m) : 0.0;

  // cos^2(phi) sin^2(theta) = (1 - cos^2 theta)/2 + (S+^2 + S-^2)/4, S+- = sin(theta) e^{+-i phi}
  if (mp == m) return 0.5 * (jp == j ? 1.0 : 0.0) - 0.5 * cos2_theta_element(jp, j, m);
  if (mp == m + 2) return 0.25 * raise2_element(jp, j, m);
  if (mp == m - 2) return 0.25 * raise2_element(j, jp, mp);
  return 0.0;
}

QuantumState::QuantumState(int j_max) : j_max_(j_max) {
  if (j_max < 0) throw DomainError("j_max must be non-negative");
  c_.assign(index(j_max, j_max) + 1, {0.0, 0.0});
}

QuantumState QuantumState::basis_state(int j, int m, int j_max) {
  if (!valid_level(j, m) || j > j_max) throw DomainError("basis state outside the truncated basis");
  QuantumState s(j_max);
  s.at(j, m) = 1.0;
  return s;
}

double QuantumState::norm() const {
  double acc = 0.0;
  for (const auto& c : c_) acc += std::norm(c);
  return std::sqrt(acc);
}

double QuantumState::top_shell_population(int shells) const {
  double acc = 0.0;
  for (int j = std::max(0, j_max_ - shells + 1); j <= j_max_; ++j) {
    for (int m = -j; m <= j; ++m) acc += population(j, m);
  }
  return acc;
}

double QuantumState::diagonal_alignment() const {
  double acc = 0.0;
  for (int j = 0; j <= j_max_; ++j) {
    for (int m = -j; m <= j; ++m) {
      const double p = population(j, m);
      if (p != 0.0) acc += p * alignment_factor(j, m);
    }
  }
  return acc;
}

int kick_basis_j_max(int j0, double kick_strength) {
  return std::max(20, j0 + static_cast<int>(std::ceil(6.0 * std::abs(kick_strength))) + 10);
}

std::vector<InitialLevel> boltzmann_levels(const MolecularSpecies& species, const ThermalSpec& thermal,
                                           double cutoff) {
  const double jt = thermal.resolve(species).j_thermal;
  auto level_weight = [&](int j) { return std::exp(-static_cast<double>(j) * (j + 1) / (jt * jt)); };

  std::vector<double> shell;  // (2J+1) exp(-E_J/kT), zero for forbidden J
  double total = 0.0;
  for (int j = 0;; ++j) {
    const double w = allows(species.j_parity, j) ? (2 * j + 1) * level_weight(j) : 0.0;
    shell.push_back(w);
    total += w;
    if (w > 0.0 && static_cast<double>(j) * j > jt * jt && w < 1e-18 * total) break;
  }

  int j_cut = 0;
  double cumulative = 0.0;
  for (; j_cut < static_cast<int>(shell.size()); ++j_cut) {
    cumulative += shell[j_cut];
    if (cumulative >= (1.0 - cutoff) * total) break;
  }

  std::vector<InitialLevel> levels;
  for (int j = 0; j <= j_cut; ++j) {
    if (!allows(species.j_parity, j)) continue;
    const double w = level_weight(j) / cumulative;
    for (int m = -j; m <= j; ++m) levels.push_back({j, m, w});
  }
  return levels;
}

double DiscreteAlignmentDistribution::total_weight() const {
  double acc = 0.0;
  for (const auto& l : lines) acc += l.weight;
  return acc;
}

double DiscreteAlignmentDistribution::mean() const {
  double acc = 0.0;
  for (const auto& l : lines) acc += l.weight * l.a.value();
  return acc / total_weight();
}

double DiscreteAlignmentDistribution::stddev() const {
  const double mu = mean();
  double acc = 0.0;
  for (const auto& l : lines) acc += l.weight * (l.a.value() - mu) * (l.a.value() - mu);
  return std::sqrt(acc / total_weight());
}

DiscreteAlignmentDistribution thermal_distribution(const MolecularSpecies& species, const ThermalSpec& thermal,
                                                   const std::optional<KickPulse>& pulse,
                                                   const ThermalOptions& options) {
  const auto levels = boltzmann_levels(species, thermal, options.boltzmann_cutoff);
  const double p = pulse ? pulse->strength(species) : 0.0;
  std::map<Rational, double> grouped;

  if (p == 0.0) {
    for (const auto& l : levels) grouped[alignment_factor_exact(l.j, l.m)] += l.weight;
  } else {
    const KickAxis axis = pulse->polarization;
    // |J0,-m0> kicks into the mirror image of |J0,m0> (phi -> -phi), with identical A values.
    std::vector<InitialLevel> half;
    for (const auto& l : levels) {
      if (l.m >= 0) half.push_back({l.j, l.m, l.m > 0 ? 2.0 * l.weight : l.weight});
    }
    std::vector<std::vector<AlignmentLine>> contributions(half.size());
    parallel_for(half.size(), options.threads, [&](std::size_t i) {
      const auto& l = half[i];
      const auto kicked =
          kick_propagate(QuantumState::basis_state(l.j, l.m, kick_basis_j_max(l.j, p)), p, axis, options.kick);
      auto& out = contributions[i];
      for (int j = 0; j <= kicked.j_max(); ++j) {
        for (int m = -j; m <= j; ++m) {
          const double pop = kicked.population(j, m);
          if (pop > 0.0) out.push_back({alignment_factor_exact(j, m), pop * l.weight});
        }
      }
    });
    for (const auto& c : contributions) {
      for (const auto& line : c) grouped[line.a] += line.weight;
    }
  }

  double total = 0.0;
  for (const auto& [a, w] : grouped) total += w;
  DiscreteAlignmentDistribution dist;
  dist.lines.reserve(grouped.size());
  for (const auto& [a, w] : grouped) dist.lines.push_back({a, w / total});
  return dist;
}

Histogram coarse_grain(const DiscreteAlignmentDistribution& dist, std::size_t bins) {
  if (bins < 2) throw DomainError("coarse graining needs at least 2 bins");
  Histogram h(0.0, 1.0, bins);
  for (const auto& l : dist.lines) h.add(l.a.value(), l.weight);
  return h;
}

double revival_period(const MolecularSpecies& species) {
  species.validate();
  return 1.0 / (2.0 * species.b_per_m() * constants::speed_of_light);
}

namespace {

// <cos^2 theta>(t) = diagonal + sum_J Re[coherence_J exp(i w_J t)], w_J = 2 pi B c (4J + 6).
struct TraceTerms {
  double diagonal = 0.0;
  std::vector<std::complex<double>> coherence;  // indexed by the lower J of the J, J+2 pair

  explicit TraceTerms(int j_max) : coherence(static_cast<std::size_t>(std::max(j_max - 1, 0)), 0.0) {}

  void add(const QuantumState& s, double weight) {
    diagonal += weight * s.diagonal_alignment();
    for (int j = 0; j + 2 <= s.j_max(); ++j) {
      std::complex<double> acc = 0.0;
      for (int m = -j; m <= j; ++m) {
        const auto& lo = s.at(j, m);
        const auto& hi = s.at(j + 2, m);
        if (lo != 0.0 && hi != 0.0) acc += 2.0 * std::conj(hi) * lo * cos2_up(j, m);
      }
      coherence[static_cast<std::size_t>(j)] += weight * acc;
    }
  }

  std::vector<double> evaluate(const MolecularSpecies& species, std::span<const double> times) const {
    const double bc = species.b_per_m() * constants::speed_of_light;
    std::vector<double> out(times.size(), diagonal);
    for (std::size_t j = 0; j < coherence.size(); ++j) {
      if (coherence[j] == 0.0) continue;
      const double w = 2.0 * constants::pi * bc * (4.0 * static_cast<double>(j) + 6.0);
      for (std::size_t k = 0; k < times.size(); ++k) {
        out[k] += std::real(coherence[j] * std::polar(1.0, w * times[k]));
      }
    }
    return out;
  }
};

}  // namespace

std::vector<double> alignment_expectation_trace(const QuantumState& state, const MolecularSpecies& species,
                                                std::span<const double> times_s) {
  TraceTerms terms(state.j_max());
  terms.add(state, 1.0 / (state.norm() * state.norm()));
  return terms.evaluate(species, times_s);
}

std::vector<double> thermal_alignment_trace(const MolecularSpecies& species, const ThermalSpec& thermal,
                                            const std::optional<KickPulse>& pulse,
                                            std::span<const double> times_s, const ThermalOptions& options) {
  const auto levels = boltzmann_levels(species, thermal, options.boltzmann_cutoff);
  const double p = pulse ? pulse->strength(species) : 0.0;
  const KickAxis axis = pulse ? pulse->polarization : KickAxis::z_parallel;

  std::vector<InitialLevel> half;
  int j_max = 0;
  for (const auto& l : levels) {
    if (l.m < 0) continue;
    half.push_back({l.j, l.m, l.m > 0 ? 2.0 * l.weight : l.weight});
    j_max = std::max(j_max, kick_basis_j_max(l.j, p));
  }

  std::vector<TraceTerms> per_level(half.size(), TraceTerms(j_max));
  parallel_for(half.size(), options.threads, [&](std::size_t i) {
    const auto& l = half[i];
    auto s = QuantumState::basis_state(l.j, l.m, kick_basis_j_max(l.j, p));
    if (p != 0.0) s = kick_propagate(s, p, axis, options.kick);
    per_level[i].add(s, l.weight);
  });

  TraceTerms terms(j_max);
  for (const auto& t : per_level) {
    terms.diagonal += t.diagonal;
    for (std::size_t j = 0; j < t.coherence.size(); ++j) terms.coherence[j] += t.coherence[j];
  }
  return terms.evaluate(species, times_s);
}

}  // namespace prealign::quantum
