#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oracles.hpp"
#include "prealign/classical.hpp"
#include "prealign/errors.hpp"

using namespace prealign;
using namespace prealign::classical;
using doctest::Approx;
namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;

oracle::State4 as_array(const ClassicalRotorState& s) { return {s.theta, s.phi, s.p_theta, s.p_phi}; }

// Free-rotor ODE from the given state for a time t (either sign).
oracle::State4 free_flight(oracle::State4 x, double t) {
  if (t == 0.0) return x;
  oracle::SphericalRotor free{};
  auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<oracle::State4>());
  odeint::integrate_adaptive(stepper, free, x, 0.0, t, t / 100.0);
  return x;
}

// Finite Gaussian pulse of unit area and FWHM `fwhm` centred on t = 0,
// integrated through from a free state prepared so that the unkicked rotor
// would be at `start` at t = 0; the result is propagated freely back to t = 0.
oracle::State4 finite_pulse_kick(const ClassicalRotorState& start, double p_s, bool x_axis, double fwhm) {
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  const double edge = 8.0 * sigma;
  auto x = free_flight(as_array(start), -edge);
  oracle::SphericalRotor kicked{[=](double t) {
                                  return p_s * std::exp(-0.5 * t * t / (sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
                                },
                                x_axis};
  auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<oracle::State4>());
  odeint::integrate_adaptive(stepper, kicked, x, -edge, edge, sigma / 20.0);
  return free_flight(x, -edge);
}

struct FreeAverage {
  double mean_cos2 = 0.0;
  double energy_drift = 0.0;
};

// Trapezoid time average of cos^2 theta over whole rotor periods.
FreeAverage free_average_by_ode(const ClassicalRotorState& s, int periods) {
  const double period = 2.0 * kPi / s.omega();
  const int per_period = 256;
  const double dt = period / per_period;
  oracle::State4 x = as_array(s);
  const double e0 = oracle::spherical_energy(x);
  double acc = 0.0;
  double drift = 0.0;
  auto stepper = odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<oracle::State4>());
  std::size_t k = 0;
  const std::size_t last = static_cast<std::size_t>(periods) * per_period;
  odeint::integrate_n_steps(stepper, oracle::SphericalRotor{}, x, 0.0, dt, last, [&](const oracle::State4& y, double) {
    const double c = std::cos(y[0]);
    acc += (k == 0 || k == last ? 0.5 : 1.0) * c * c;
    drift = std::max(drift, std::abs(oracle::spherical_energy(y) - e0) / e0);
    ++k;
  });
  return {acc / static_cast<double>(last), drift};
}

}  // namespace

TEST_CASE("thermal sampling moments") {
  EnsembleSpec spec;
  spec.n_samples = 1'000'000;
  spec.rng = RngSpec{11};
  auto states = sample_thermal(spec);
  double c2 = 0.0, pt2 = 0.0, pp2 = 0.0;
  for (const auto& s : states) {
    const double c = std::cos(s.theta);
    const double st = std::sin(s.theta);
    c2 += c * c;
    pt2 += s.p_theta * s.p_theta;
    pp2 += s.p_phi * s.p_phi / (st * st);
  }
  const double n = static_cast<double>(states.size());
  CHECK(std::abs(c2 / n - 1.0 / 3.0) < 0.002);
  CHECK(std::abs(pt2 / n - 1.0) < 0.005);
  CHECK(std::abs(pp2 / n - 1.0) < 0.005);
}

TEST_CASE("thermal sampling is reproducible per index") {
  RngSpec rng{5};
  EnsembleSpec small;
  small.n_samples = 1000;
  small.rng = rng;
  small.threads = 1;
  EnsembleSpec big = small;
  big.n_samples = 5000;
  big.threads = 4;
  auto a = sample_thermal(small);
  auto b = sample_thermal(big);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].theta == b[i].theta);
    REQUIRE(a[i].p_phi == b[i].p_phi);
  }
  auto one = sample_thermal_one(rng, 17);
  CHECK(one.p_theta == sample_thermal_one(rng, 17).p_theta);
  CHECK(one.p_theta != sample_thermal_one(rng, 18).p_theta);
}

TEST_CASE("state validation") {
  ClassicalRotorState s;
  CHECK_NOTHROW(s.validate());
  s.theta = 0.0;
  s.p_phi = 1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s.theta = 1.0;
  s.p_theta = std::nan("");
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("kick map basics") {
  ClassicalRotorState s{1.1, 0.4, 0.7, -0.9};
  for (auto axis : {KickAxis::z_parallel, KickAxis::x_perpendicular}) {
    auto same = apply_kick(s, 0.0, axis);
    CHECK(same.p_theta == s.p_theta);
    CHECK(same.p_phi == s.p_phi);
  }
  ClassicalRotorState equator{kPi / 2, 0.3, 0.25, 0.5};
  CHECK(apply_kick(equator, 3.0, KickAxis::z_parallel).p_theta == Approx(0.25).epsilon(1e-15));
  CHECK(apply_kick(s, 3.0, KickAxis::z_parallel).p_phi == s.p_phi);
  auto kicked = apply_kick(s, 3.0, KickAxis::z_parallel);
  CHECK(kicked.theta == s.theta);
  CHECK(kicked.phi == s.phi);
}

TEST_CASE("kick maps match a short finite pulse") {
  const ClassicalRotorState s{1.1, 0.4, 0.7, -0.9};
  const double period = 2.0 * kPi / s.omega();
  for (bool x : {false, true}) {
    const auto axis = x ? KickAxis::x_perpendicular : KickAxis::z_parallel;
    const auto impulsive = apply_kick(s, 3.0, axis);
    // The finite-width error is linear in the width; extrapolate the pair
    // (w, w/2) to zero width.
    const auto wide = finite_pulse_kick(s, 3.0, x, 1e-3 * period);
    const auto narrow = finite_pulse_kick(s, 3.0, x, 0.5e-3 * period);
    CHECK(std::abs(2.0 * narrow[2] - wide[2] - impulsive.p_theta) < 1e-3);
    CHECK(std::abs(2.0 * narrow[3] - wide[3] - impulsive.p_phi) < 1e-3);
  }
}

TEST_CASE("time-averaged alignment special cases") {
  CHECK(time_averaged_alignment({kPi / 2, 0.0, 0.0, 1.0}) == Approx(0.0).epsilon(1e-15));
  for (double theta : {0.2, 1.0, 2.5}) {
    CHECK(time_averaged_alignment({theta, 1.0, 0.8, 0.0}) == Approx(0.5).epsilon(1e-14));
  }
  CHECK_THROWS_AS(time_averaged_alignment({1.0, 0.0, 0.0, 0.0}), DegenerateRotor);
}

TEST_CASE("time-averaged alignment against free-rotor ODE over 200 periods") {
  const ClassicalRotorState states[] = {{1.1, 0.4, 0.7, -0.9}, {0.3, 2.0, -1.5, 0.2}, {2.0, -1.0, 0.1, 2.2}};
  for (const auto& s : states) {
    auto ref = free_average_by_ode(s, 200);
    CHECK(std::abs(time_averaged_alignment(s) - ref.mean_cos2) < 1e-4);
    CHECK(ref.energy_drift < 1e-8);
  }
}

TEST_CASE("closed-form trace against free-rotor ODE") {
  const ClassicalRotorState s{1.1, 0.4, 0.7, -0.9};
  for (double t : {0.3, 2.0, 17.5}) {
    auto x = free_flight(as_array(s), t);
    CHECK(cos_theta_at(s, t) == Approx(std::cos(x[0])).epsilon(1e-9));
  }
  CHECK(cos_theta_at(s, 0.0) == Approx(std::cos(s.theta)).epsilon(1e-14));
}

TEST_CASE("alignment factor bounds over an ensemble") {
  EnsembleSpec spec;
  spec.n_samples = 20000;
  auto cs2 = carbon_disulfide();
  for (auto pulse : {std::optional<KickPulse>{}, std::optional{KickPulse::with_strength(25.0)},
                     std::optional{KickPulse::with_strength(25.0, KickAxis::x_perpendicular)}}) {
    auto dist = ensemble_alignment_distribution(spec, cs2, pulse);
    for (double a : dist.samples) {
      REQUIRE(a >= 0.0);
      REQUIRE(a <= 0.5);
    }
    CHECK(dist.histogram().total() == Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("rainbow reference laws") {
  // a = sin^2(psi) / 2 removes the inverse-square-root endpoint behaviour.
  // Doubles cannot resolve 1 - 2a within ~1e-16 of the edge, so the last
  // delta at each end is added from the analytic primitive instead.
  auto integrate = [](const std::function<double(double)>& f, double a_lo, double a_hi) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double psi) {
          const double s = std::sin(psi), c = std::cos(psi);
          return f(0.5 * s * s) * s * c;
        },
        std::asin(std::sqrt(2.0 * a_lo)), std::asin(std::sqrt(2.0 * a_hi)), 15, 1e-14);
  };
  const double delta = 1e-6;
  const double tail_thermal = (1.0 - std::sqrt(1.0 - 2.0 * delta)) + std::sqrt(2.0 * delta);
  const double tail_perp =
      2.0 / kPi * std::asin(std::sqrt(2.0 * delta)) + 1.0 - 2.0 / kPi * std::asin(std::sqrt(1.0 - 2.0 * delta));
  for (auto v : {RainbowVariant::thermal, RainbowVariant::perpendicular}) {
    auto pdf = [v](double a) { return rainbow_reference_pdf(a, v); };
    const double tails = v == RainbowVariant::thermal ? tail_thermal : tail_perp;
    const double norm = integrate(pdf, delta, 0.5 - delta) + tails;
    CHECK(norm == Approx(1.0).epsilon(1e-10));
    const double m1 = integrate([&](double a) { return a * pdf(a); }, 0.0, 0.5);
    const double m2 = integrate([&](double a) { return a * a * pdf(a); }, 0.0, 0.5);
    auto [mean, sd] = rainbow_reference_moments(v);
    CHECK(mean == Approx(m1).epsilon(1e-7));
    CHECK(sd == Approx(std::sqrt(m2 - m1 * m1)).epsilon(1e-6));
    for (double a : {0.05, 0.2, 0.37, 0.49}) {
      CHECK(rainbow_reference_cdf(a, v) == Approx(integrate(pdf, 0.0, a)).epsilon(1e-9));
    }
    CHECK(rainbow_reference_pdf(-0.1, v) == 0.0);
    CHECK(rainbow_reference_pdf(0.6, v) == 0.0);
    CHECK(rainbow_reference_cdf(0.0, v) == 0.0);
    CHECK(rainbow_reference_cdf(0.5, v) == Approx(1.0));
  }
  CHECK(rainbow_reference_pdf(0.0, RainbowVariant::thermal) == 1.0);
  CHECK(rainbow_reference_pdf(1e-12, RainbowVariant::perpendicular) > 1e5);
  CHECK(rainbow_reference_pdf(0.5 - 1e-12, RainbowVariant::perpendicular) > 1e5);
  CHECK(rainbow_reference_pdf(0.5 - 1e-12, RainbowVariant::thermal) > 1e5);
}

TEST_CASE("parallel-kick asymptotic formulas") {
  auto [m0, s0] = parallel_kick_asymptotics(1e12, 1.0);
  CHECK(m0 == Approx(0.5).epsilon(1e-9));
  CHECK(s0 < 1e-5);

  auto [m, s] = parallel_kick_asymptotics(25.0, 5.0);
  CHECK(m == Approx(0.5 - std::sqrt(kPi) / 8.0 * 0.2).epsilon(1e-14));
  CHECK(m == Approx(0.455689).epsilon(1e-6));
  CHECK(s == Approx(std::sqrt(std::sqrt(kPi) / 32.0 * 0.2)).epsilon(1e-14));
  CHECK(s == Approx(0.105251).epsilon(1e-5));
  CHECK_THROWS_AS(parallel_kick_asymptotics(0.0, 5.0), DomainError);
  CHECK_THROWS_AS(parallel_kick_asymptotics(25.0, -1.0), DomainError);
}

TEST_CASE("reduced kick used by the ensemble") {
  auto cs2 = carbon_disulfide();
  CHECK(reduced_kick_strength(cs2, ThermalSpec::from_j_thermal(5.0), KickPulse::with_strength(25.0)) ==
        Approx(std::sqrt(2.0) * 5.0).epsilon(1e-12));
  CHECK(reduced_kick_strength(cs2, ThermalSpec::from_j_thermal(5.0), std::nullopt) == 0.0);
}

TEST_CASE("asymptotics against Monte Carlo") {
  auto cs2 = carbon_disulfide();
  EnsembleSpec spec;
  spec.n_samples = 400'000;
  spec.thermal = ThermalSpec::from_j_thermal(5.0);

  auto mc = ensemble_alignment_distribution(spec, cs2, KickPulse::with_strength(25.0)).summary();
  auto [m, s] = parallel_kick_asymptotics(25.0, 5.0);
  CHECK(std::abs(mc.mean - m) / m < 0.10);
  CHECK(std::abs(mc.stddev - s) / s < 0.10);

  // At P / J_T = 50 both moments are within 2% and the spread is still
  // shrinking toward zero.
  spec.n_samples = 1'000'000;
  auto far = ensemble_alignment_distribution(spec, cs2, KickPulse::with_strength(250.0)).summary();
  auto [mf, sf] = parallel_kick_asymptotics(250.0, 5.0);
  CHECK(std::abs(far.mean - mf) / mf < 0.02);
  CHECK(std::abs(far.stddev - sf) / sf < 0.02);
  CHECK(far.stddev < mc.stddev);
  CHECK(std::abs(far.stddev - sf) / sf < std::abs(mc.stddev - s) / s);
}

TEST_CASE("thermal distribution follows the unimodal law") {
  EnsembleSpec spec;
  spec.n_samples = 200'000;
  spec.thermal = ThermalSpec::from_j_thermal(15.0);
  auto dist = ensemble_alignment_distribution(spec, carbon_disulfide(), std::nullopt);
  CHECK(dist.rejected == 0);
  const double ks = ks_distance(dist.samples, [](double a) { return rainbow_reference_cdf(a, RainbowVariant::thermal); });
  CHECK(ks < 0.01);
}

TEST_CASE("perpendicular kick follows the bimodal law") {
  EnsembleSpec spec;
  spec.n_samples = 100'000;
  spec.thermal = ThermalSpec::from_j_thermal(0.5);
  auto dist = ensemble_alignment_distribution(spec, carbon_disulfide(),
                                              KickPulse::with_strength(25.0, KickAxis::x_perpendicular));
  const double ks =
      ks_distance(dist.samples, [](double a) { return rainbow_reference_cdf(a, RainbowVariant::perpendicular); });
  CHECK(ks < 0.05);
}

TEST_CASE("parallel kick gives a narrow peak near one half") {
  EnsembleSpec spec;
  spec.n_samples = 100'000;
  spec.thermal = ThermalSpec::from_j_thermal(5.0);
  auto s = ensemble_alignment_distribution(spec, carbon_disulfide(), KickPulse::with_strength(25.0)).summary();
  CHECK(s.median > 0.45);
  CHECK(s.stddev < 0.5 * rainbow_reference_moments(RainbowVariant::thermal).second + 0.05);
}

TEST_CASE("ensemble alignment traces") {
  EnsembleSpec spec;
  spec.n_samples = 1'000'000;
  auto states = sample_thermal(spec);
  std::vector<double> t0{0.0};
  CHECK(std::abs(classical_alignment_trace(states, t0)[0] - 1.0 / 3.0) < 0.002);

  // Long after preparation the ensemble has dephased to the mean of A.
  states.resize(100'000);
  for (auto& s : states) s = apply_kick(s, 4.0, KickAxis::z_parallel);
  double mean_a = 0.0;
  for (const auto& s : states) mean_a += time_averaged_alignment(s);
  mean_a /= static_cast<double>(states.size());
  std::vector<double> late;
  for (int k = 0; k < 400; ++k) late.push_back(200.0 + 2.5 * k);
  auto trace = classical_alignment_trace(states, late);
  double late_mean = 0.0;
  for (double v : trace) late_mean += v;
  late_mean /= static_cast<double>(trace.size());
  CHECK(std::abs(late_mean - mean_a) < 1e-3);

  // Trace values are bounded and the trace is thread-count independent.
  auto one = classical_alignment_trace(states, late, 1);
  auto many = classical_alignment_trace(states, late, 4);
  CHECK(one == many);
}
