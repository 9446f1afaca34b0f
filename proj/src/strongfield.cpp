#include "prealign/strongfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "prealign/constants.hpp"
#include "prealign/errors.hpp"
#include "prealign/parallel.hpp"
#include "prealign/quadrature.hpp"

namespace prealign::strongfield {

using std::numbers::pi;

FieldCoefficients FieldCoefficients::from_state(const MolecularSpecies& species, double h, double p_phi,
                                                double e_field) {
  const double inertia = moment_of_inertia(species);
  const double e2 = e_field * e_field;
  FieldCoefficients f;
  f.alpha_sf = species.anisotropy_si() * e2 / (2.0 * inertia);
  f.beta_sf = 2.0 / inertia * (h + 0.25 * e2 * species.alpha_perp_si());
  f.p_phi_over_i = p_phi / inertia;
  return f;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::rotating: return "rotating";
    case Regime::pendular: return "pendular";
    case Regime::separatrix: return "separatrix";
  }
  return "unknown";
}

double g_polynomial(double u, const FieldCoefficients& f) {
  return 4.0 * u * ((1.0 - u) * f.beta_sf - f.c() + (1.0 - u) * f.alpha_sf * u);
}

namespace {

/// g(u) / 4u.
double reduced_q(double u, const FieldCoefficients& f) { return (1.0 - u) * (f.beta_sf + f.alpha_sf * u) - f.c(); }

double polish(double u, const FieldCoefficients& f) {
  const double slope = -2.0 * f.alpha_sf * u + (f.alpha_sf - f.beta_sf);
  if (slope == 0.0) return u;
  const double step = reduced_q(u, f) / slope;
  return std::abs(step) < 1e-6 * std::max(std::abs(u), 1e-300) + 1e-300 ? u - step : u;
}

std::string describe(const FieldCoefficients& f) {
  std::ostringstream s;
  s << "alpha=" << f.alpha_sf << " beta=" << f.beta_sf << " (P_phi/I)^2=" << f.c();
  return s.str();
}

}  // namespace

RootTriple find_roots(const FieldCoefficients& f) {
  const double a = f.alpha_sf;
  const double b = f.beta_sf;
  const double c = f.c();
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw InadmissibleState("non-finite field coefficients: " + describe(f));
  }
  const double q0 = b - c;
  const double tol = 1e-12 * std::max({std::abs(a), std::abs(b), c});
  RootTriple r;

  if (a == 0.0) {
    if (b <= 0.0 || q0 < -tol) throw InadmissibleState("no oscillation interval: " + describe(f));
    r.u3 = q0 <= tol ? 0.0 : q0 / b;
    return r;
  }

  const double d = (a + b) * (a + b) - 4.0 * a * c;
  if (d < 0.0) throw InadmissibleState("complex roots of g: " + describe(f));
  const double sd = std::sqrt(d);
  // Roots in v = 1 - u; the small one in its cancellation-free form.
  const double denom = (a + b) + sd;
  const double v_small = c == 0.0 ? 0.0 : (denom > 0.0 ? 2.0 * c / denom : std::numeric_limits<double>::infinity());
  double u3 = 1.0 - v_small;

  if (std::abs(q0) <= tol) {
    // The zero root is double. Either the orbit shrinks to the equator or
    // this is the separatrix between the two regimes.
    if (u3 <= std::sqrt(tol / std::max(std::abs(a), 1e-300)) || a - b <= 0.0) {
      r.u3 = std::max(u3, 0.0);
      if (r.u3 <= 1e-12) r.u3 = 0.0;
      return r;
    }
    r.u3 = std::min(polish(u3, f), 1.0);
    r.regime = Regime::separatrix;
    return r;
  }

  if (q0 > 0.0) {
    if (!(u3 > 0.0)) throw InadmissibleState("rotating orbit without turning point: " + describe(f));
    r.u3 = std::min(polish(u3, f), 1.0);
    if (a > 0.0) r.u1 = 1.0 - denom / (2.0 * a);
    r.u1 = std::min(r.u1, 0.0);
    return r;
  }

  if (a < 0.0 || !(u3 > 0.0)) throw InadmissibleState("no oscillation interval: " + describe(f));
  const double u2 = (c - b) / (a * u3);
  if (!(u2 > 0.0) || !(u2 < u3)) throw InadmissibleState("pendular roots out of order: " + describe(f));
  r.u3 = std::min(polish(u3, f), 1.0);
  r.u2 = polish(u2, f);
  if (r.u2 <= 1e-12) {
    r.u2 = 0.0;
    r.regime = Regime::separatrix;
    return r;
  }
  r.u2 = std::min(r.u2, r.u3);
  r.regime = Regime::pendular;
  return r;
}

namespace {

struct OrbitSums {
  double action = 0.0;   // integral of sqrt(g)/(u(1-u)) du, i.e. 4 I_theta / I
  double period = 0.0;   // integral of du / sqrt(g)
  double weighted = 0.0; // integral of u du / sqrt(g)
};

/// Integrates the three orbit integrands after the substitution
/// u = lo + (hi - lo) sin^2 psi. Near the separatrix or near u = 1 the
/// integrands develop a narrow peak at one end of [0, pi/2]; the interval is
/// then split geometrically toward that end before Gauss-Legendre is applied.
OrbitSums orbit_sums(const FieldCoefficients& f, const RootTriple& r, bool need_period) {
  const double a = f.alpha_sf;
  const double lo = r.lo();
  const double hi = r.hi();
  const double w = hi - lo;
  OrbitSums sums;
  if (!(w > 0.0)) {
    if (r.regime == Regime::pendular) {
      // Pinched well: the orbit sits at the bottom u = u3.
      sums.period = 0.5 * pi / std::sqrt(a * hi);
      sums.weighted = hi * sums.period;
    } else {
      const double s0 = 0.5 * (f.beta_sf - a + std::sqrt((a + f.beta_sf) * (a + f.beta_sf) - 4.0 * a * f.c()));
      sums.period = 0.5 * pi / std::sqrt(s0);
    }
    return sums;
  }

  const bool pendular = r.regime == Regime::pendular;
  // Rotating: g = 4u (u3 - u)(s0 + a u) with s0 = -a u1 written without u1.
  const double s0 = pendular ? 0.0
                             : (r.regime == Regime::separatrix
                                    ? 0.0
                                    : 0.5 * (f.beta_sf - a + std::sqrt((a + f.beta_sf) * (a + f.beta_sf) - 4.0 * a * f.c())));

  auto integrand = [&](double psi) {
    const double sn = std::sin(psi);
    const double cs = std::cos(psi);
    const double s2 = sn * sn;
    const double c2 = cs * cs;
    const double u = lo + w * s2;
    const double one_minus_u = (1.0 - hi) + w * c2;
    std::array<double, 3> out{};
    if (pendular) {
      const double root_u = std::sqrt(u);
      const double root_a = std::sqrt(a);
      out[0] = one_minus_u > 0.0 ? 4.0 * root_a * w * w * c2 * s2 / (one_minus_u * root_u) : 4.0 * root_a * w * s2 / root_u;
      out[1] = 1.0 / (root_a * root_u);
      out[2] = u * out[1];
    } else {
      const double h = s0 + a * u;
      const double root_h = std::sqrt(std::max(h, 0.0));
      out[0] = one_minus_u > 0.0 ? 4.0 * w * c2 * root_h / one_minus_u : 4.0 * root_h;
      out[1] = root_h > 0.0 ? 1.0 / root_h : 0.0;
      out[2] = u * out[1];
    }
    return out;
  };

  // Peak widths in psi at the two ends of the interval.
  double d0 = 1.0;
  if (pendular) {
    d0 = std::sqrt(lo / w);
  } else if (a > 0.0 && r.regime == Regime::rotating) {
    d0 = std::sqrt(s0 / (a * hi));
  }
  const double d1 = std::sqrt(std::max(1.0 - hi, 0.0) / w);

  std::vector<double> breaks{0.0};
  constexpr double quarter = 0.25 * pi;
  constexpr double floor_width = 1e-12;
  if (d0 < 0.5) {
    for (double x = std::max(d0, floor_width); x < quarter; x *= 2.0) breaks.push_back(x);
  }
  if (d0 < 0.5 || d1 < 0.5) breaks.push_back(quarter);
  if (d1 < 0.5) {
    std::vector<double> top;
    for (double x = std::max(d1, floor_width); x < quarter; x *= 2.0) top.push_back(0.5 * pi - x);
    breaks.insert(breaks.end(), top.rbegin(), top.rend());
  }
  breaks.push_back(0.5 * pi);

  constexpr double rel_tol = 1e-10;
  constexpr std::size_t max_order = 4096;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double left = breaks[k];
    const double right = breaks[k + 1];
    const double half = 0.5 * (right - left);
    const double mid = 0.5 * (right + left);
    auto apply = [&](std::size_t order) {
      const auto& rule = gauss_legendre_rule(order);
      std::array<double, 3> acc{};
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const auto v = integrand(mid + half * rule.nodes[i]);
        for (int j = 0; j < 3; ++j) acc[j] += rule.weights[i] * v[j];
      }
      for (double& x : acc) x *= half;
      return acc;
    };
    std::size_t order = 64;
    auto previous = apply(order);
    for (;;) {
      order *= 2;
      const auto current = apply(order);
      bool converged = true;
      const int components = need_period ? 3 : 1;
      for (int j = 0; j < components; ++j) {
        if (std::abs(current[j] - previous[j]) > rel_tol * std::abs(current[j]) + 1e-300) converged = false;
      }
      previous = current;
      if (converged) break;
      if (order >= max_order || !std::isfinite(current[0])) {
        std::ostringstream msg;
        msg << "orbit quadrature did not converge on psi in [" << left << ", " << right << "] ("
            << to_string(r.regime) << ", u in [" << lo << ", " << hi << "], " << describe(f) << ")";
        throw NumericalFailure(msg.str());
      }
    }
    sums.action += previous[0];
    sums.period += previous[1];
    sums.weighted += previous[2];
  }
  return sums;
}

}  // namespace

double adiabatic_invariant(const FieldCoefficients& coeffs, const RootTriple& roots, double inertia) {
  return 0.25 * inertia * orbit_sums(coeffs, roots, false).action;
}

double average_alignment_strong(const FieldCoefficients& coeffs, const RootTriple& roots) {
  if (roots.regime == Regime::separatrix) return roots.lo();
  const auto s = orbit_sums(coeffs, roots, true);
  return std::clamp(s.weighted / s.period, roots.lo(), roots.hi());
}

double half_period_integral(const FieldCoefficients& coeffs, const RootTriple& roots) {
  if (roots.regime == Regime::separatrix) return std::numeric_limits<double>::infinity();
  return orbit_sums(coeffs, roots, true).period;
}

AdiabaticRecord AdiabaticRecord::from_rotor(const MolecularSpecies& species,
                                            const classical::ClassicalRotorState& state, double temperature_k) {
  const double inertia = moment_of_inertia(species);
  const double momentum = std::sqrt(constants::boltzmann * temperature_k * inertia);
  const double w = state.omega();
  if (!(w > 0.0)) throw DegenerateRotor("rotor at rest has no adiabatic orbit");
  AdiabaticRecord rec;
  rec.p_phi = state.p_phi * momentum;
  rec.h0 = 0.5 * w * w * momentum * momentum / inertia;
  rec.h = rec.h0;
  const auto coeffs = FieldCoefficients::from_state(species, rec.h0, rec.p_phi, 0.0);
  const auto roots = find_roots(coeffs);
  rec.regime = roots.regime;
  rec.i_theta0 = adiabatic_invariant(coeffs, roots, inertia);
  if (!(rec.i_theta0 > 0.0)) throw DegenerateRotor("equatorial rotor has zero action");
  return rec;
}

namespace {

struct Evaluation {
  bool admissible = false;
  double action = 0.0;
  double slope = 0.0;
  FieldState state;
};

Evaluation evaluate(const MolecularSpecies& species, double inertia, double h, double p_phi, double e_field) {
  Evaluation ev;
  ev.state.h = h;
  ev.state.coeffs = FieldCoefficients::from_state(species, h, p_phi, e_field);
  try {
    ev.state.roots = find_roots(ev.state.coeffs);
  } catch (const InadmissibleState&) {
    return ev;
  }
  ev.admissible = true;
  if (ev.state.roots.regime == Regime::separatrix) {
    ev.action = adiabatic_invariant(ev.state.coeffs, ev.state.roots, inertia);
    ev.slope = std::numeric_limits<double>::infinity();
    ev.state.mean_u = ev.state.roots.lo();
    return ev;
  }
  const auto s = orbit_sums(ev.state.coeffs, ev.state.roots, true);
  ev.action = 0.25 * inertia * s.action;
  ev.slope = s.period;
  ev.state.mean_u = std::clamp(s.weighted / s.period, ev.state.roots.lo(), ev.state.roots.hi());
  return ev;
}

}  // namespace

FieldState solve_energy(AdiabaticRecord& record, double e_field, const MolecularSpecies& species,
                        const SolveOptions& options) {
  const double inertia = moment_of_inertia(species);
  if (e_field == 0.0) {
    auto ev = evaluate(species, inertia, record.h0, record.p_phi, 0.0);
    if (!ev.admissible) throw NumericalFailure("field-free rotor has no orbit");
    record.h = record.h0;
    record.regime = ev.state.roots.regime;
    return ev.state;
  }

  const double e2 = e_field * e_field;
  const double depth = 0.25 * e2 * (std::max(species.anisotropy_si(), 0.0) + species.alpha_perp_si());
  const double scale = std::abs(record.h0) + 0.25 * e2 * (std::abs(species.anisotropy_si()) + species.alpha_perp_si());
  const double tol = options.rel_tol * scale;
  const double target = record.i_theta0;

  // Safeguarded Newton on F(H) = I(H) - I0, which increases with H. The
  // upper end of the bracket is only established when a Newton step fails,
  // so a good starting point costs a single orbit evaluation or two.
  double lo = -depth;
  double hi = std::numeric_limits<double>::quiet_NaN();
  auto establish_upper = [&] {
    double h_up = std::max(record.h0, lo);
    for (int k = 0;; ++k) {
      if (k > 60) throw NumericalFailure("cannot bracket the energy: action stays below the target");
      const auto ev = evaluate(species, inertia, h_up, record.p_phi, e_field);
      if (ev.admissible && ev.action >= target) break;
      lo = h_up;
      h_up += scale * std::ldexp(1.0, k);
    }
    hi = h_up;
  };

  double h = record.h > lo ? record.h : record.h0;
  for (int it = 0; it < options.max_iterations; ++it) {
    auto ev = evaluate(species, inertia, h, record.p_phi, e_field);
    const double f = (ev.admissible ? ev.action : 0.0) - target;
    if (f < 0.0) {
      lo = std::max(lo, h);
    } else {
      hi = std::isnan(hi) ? h : std::min(hi, h);
    }
    double step = std::numeric_limits<double>::infinity();
    if (ev.admissible && ev.slope > 0.0 && std::isfinite(ev.slope)) step = -f / ev.slope;
    const bool collapsed = !std::isnan(hi) && hi - lo <= tol;
    if (ev.admissible && (std::abs(step) <= tol || f == 0.0 || collapsed)) {
      record.h = h;
      record.regime = ev.state.roots.regime;
      return ev.state;
    }
    double next = h + step;
    const bool inside = next > lo && (std::isnan(hi) || next < hi);
    if (!std::isfinite(next) || !inside) {
      if (std::isnan(hi)) establish_upper();
      next = 0.5 * (lo + hi);
    }
    // A collapsed bracket around an inadmissible point: the admissible end
    // is the answer.
    if (collapsed) next = hi;
    h = next;
  }
  std::ostringstream msg;
  msg << "energy solve did not converge: H in [" << lo << ", " << hi << "], I0=" << target << ", E=" << e_field;
  throw NumericalFailure(msg.str());
}

StrongAlignmentDistribution peak_alignment_distribution(const classical::EnsembleSpec& spec,
                                                        const MolecularSpecies& species, double peak_intensity_w_cm2,
                                                        const std::optional<KickPulse>& pulse) {
  if (spec.n_samples < 1) throw DomainError("ensemble needs at least one sample");
  const double temperature = spec.thermal.resolve(species).temperature_k;
  const double e_field = field_amplitude_from_intensity(peak_intensity_w_cm2);
  const double p_s = classical::reduced_kick_strength(species, spec.thermal, pulse);
  const KickAxis axis = pulse ? pulse->polarization : KickAxis::z_parallel;

  enum class Outcome : unsigned char { ok, rejected, failed };
  std::vector<double> mean_u(spec.n_samples, 0.0);
  std::vector<Outcome> outcome(spec.n_samples, Outcome::ok);
  std::vector<Regime> regime(spec.n_samples, Regime::rotating);
  parallel_for(spec.n_samples, spec.threads, [&](std::size_t i) {
    const auto s = classical::apply_kick(classical::sample_thermal_one(spec.rng, i), p_s, axis);
    try {
      auto rec = AdiabaticRecord::from_rotor(species, s, temperature);
      const auto st = solve_energy(rec, e_field, species);
      mean_u[i] = st.mean_u;
      regime[i] = st.roots.regime;
    } catch (const DegenerateRotor&) {
      outcome[i] = Outcome::rejected;
    } catch (const NumericalFailure&) {
      outcome[i] = Outcome::failed;
    } catch (const InadmissibleState&) {
      outcome[i] = Outcome::failed;
    }
  });

  StrongAlignmentDistribution out;
  out.samples.reserve(spec.n_samples);
  for (std::size_t i = 0; i < spec.n_samples; ++i) {
    switch (outcome[i]) {
      case Outcome::rejected: ++out.rejected; break;
      case Outcome::failed: ++out.failed; break;
      case Outcome::ok:
        out.samples.push_back(mean_u[i]);
        if (regime[i] == Regime::pendular) ++out.pendular;
        if (regime[i] == Regime::separatrix) ++out.separatrix;
        break;
    }
  }
  return out;
}

}  // namespace prealign::strongfield
