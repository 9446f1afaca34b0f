#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "prealign/errors.hpp"
#include "prealign/parallel.hpp"
#include "prealign/rng.hpp"
#include "prealign/species.hpp"
#include "prealign/stats.hpp"
#include "prealign/units.hpp"

using namespace prealign;
using doctest::Approx;

namespace {

// Reference constants typed in separately from the library's table.
constexpr double kHbar = 1.054571817e-34;
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kLight = 2.99792458e8;
constexpr double kEps0 = 8.8541878128e-12;
constexpr double kPi = 3.141592653589793;

double pulse_kick_by_quadrature(const MolecularSpecies& s, double intensity_w_cm2, double fwhm) {
  const double e0_sq = 2.0 * intensity_w_cm2 * 1e4 / (kEps0 * kLight);
  const double d_alpha = 4.0 * kPi * kEps0 * (s.alpha_parallel_a3 - s.alpha_perp_a3) * 1e-30;
  auto envelope = [&](double t) { return e0_sq * std::exp(-4.0 * std::log(2.0) * t * t / (fwhm * fwhm)); };
  const double fluence = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(envelope, -8 * fwhm, 8 * fwhm);
  return d_alpha * fluence / (4.0 * kHbar);
}

}  // namespace

TEST_CASE("species record validation") {
  auto cs2 = carbon_disulfide();
  CHECK_NOTHROW(cs2.validate());
  CHECK(cs2.j_parity == JParity::even_only);
  CHECK(cs2.anisotropy_a3() > 0.0);
  CHECK(cs2.mean_polarizability_a3() == Approx((15.14 + 2 * 5.54) / 3.0));

  for (double bad : {0.0, -1.0, std::nan("")}) {
    auto s = cs2;
    s.b_cm1 = bad;
    CHECK_THROWS_AS(s.validate(), InvalidSpecies);
    CHECK_THROWS_AS(moment_of_inertia(s), InvalidSpecies);
  }
  auto s = cs2;
  s.alpha_perp_a3 = -2.0;
  CHECK_THROWS_AS(s.validate(), InvalidSpecies);
  s = cs2;
  s.mass_amu = 0.0;
  CHECK_THROWS_AS(s.validate(), InvalidSpecies);
}

TEST_CASE("moment of inertia from the rotational constant") {
  auto cs2 = carbon_disulfide();
  const double i = moment_of_inertia(cs2);
  CHECK(i == Approx(kHbar / (4 * kPi * 10.9 * kLight)).epsilon(1e-9));
  auto doubled = cs2;
  doubled.b_cm1 *= 2.0;
  CHECK(moment_of_inertia(doubled) == Approx(i / 2.0).epsilon(1e-15));
}

TEST_CASE("thermal angular momentum anchors") {
  auto cs2 = carbon_disulfide();
  CHECK(j_thermal_from_temperature(cs2, 3.9) == Approx(5.0).epsilon(0.01));
  CHECK(std::abs(j_thermal_from_temperature(cs2, 35.0) - 15.0) < 0.1);

  for (double t : {0.1, 3.9, 35.0, 300.0}) {
    const double jt = j_thermal_from_temperature(cs2, t);
    CHECK(temperature_from_j_thermal(cs2, jt) == Approx(t).epsilon(1e-12));
  }
  auto r = ThermalSpec::from_j_thermal(5.0).resolve(cs2);
  CHECK(r.j_thermal == 5.0);
  CHECK(j_thermal_from_temperature(cs2, r.temperature_k) == Approx(5.0).epsilon(1e-12));

  CHECK_THROWS_AS(ThermalSpec{}.resolve(cs2), DomainError);
  CHECK_THROWS_AS((ThermalSpec{3.0, 5.0}.resolve(cs2)), DomainError);
  CHECK_THROWS_AS(ThermalSpec::from_temperature(-1.0).resolve(cs2), DomainError);
  CHECK_THROWS_AS(ThermalSpec::from_j_thermal(0.0).resolve(cs2), DomainError);
}

TEST_CASE("kick strength from pulse parameters") {
  auto cs2 = carbon_disulfide();
  CHECK(kick_strength_from_pulse(cs2, 2.3e12, 0.5e-12) == Approx(25.0).epsilon(0.10));
  CHECK(kick_strength_from_pulse(cs2, 4.6e11, 0.5e-12) == Approx(5.0).epsilon(0.10));
  CHECK(kick_strength_from_pulse(cs2, 0.0, 0.5e-12) == 0.0);

  for (double intensity : {1e10, 4.6e11, 2.3e12}) {
    CHECK(kick_strength_from_pulse(cs2, intensity, 0.5e-12) ==
          Approx(pulse_kick_by_quadrature(cs2, intensity, 0.5e-12)).epsilon(1e-9));
  }
  const double p = kick_strength_from_pulse(cs2, 2.3e12, 0.5e-12);
  CHECK(pulse_intensity_for_kick(cs2, p, 0.5e-12) == Approx(2.3e12).epsilon(1e-10));

  CHECK(KickPulse::with_strength(7.0).strength(cs2) == 7.0);
  CHECK(KickPulse::from_pulse(2.3e12, 0.5e-12).strength(cs2) == Approx(p).epsilon(1e-15));
  CHECK_THROWS_AS(KickPulse::with_strength(-1.0).strength(cs2), DomainError);
  CHECK_THROWS_AS(KickPulse{}.strength(cs2), DomainError);
}

TEST_CASE("reduced kick equals sqrt(2) P / J_T") {
  auto cs2 = carbon_disulfide();
  const double i = moment_of_inertia(cs2);
  for (double t : {3.9, 35.0, 120.0}) {
    const double jt = j_thermal_from_temperature(cs2, t);
    const double direct = 25.0 * kHbar / std::sqrt(kBoltzmann * t * i);
    CHECK(reduced_kick(cs2, t, 25.0) == Approx(direct).epsilon(1e-9));
    CHECK(reduced_kick(cs2, t, 25.0) == Approx(std::sqrt(2.0) * 25.0 / jt).epsilon(1e-10));
  }
}

TEST_CASE("field amplitude and well depth") {
  const double e0 = field_amplitude_from_intensity(3e9);
  CHECK(e0 == Approx(std::sqrt(2 * 3e13 / (kEps0 * kLight))).epsilon(1e-12));
  CHECK(intensity_from_field_amplitude(e0) == Approx(3e9).epsilon(1e-12));
  CHECK_THROWS_AS(field_amplitude_from_intensity(-1.0), DomainError);

  const double depth_mev = alignment_well_depth(carbon_disulfide(), 3e9) / 1.602176634e-22;
  CHECK(depth_mev == Approx(0.04).epsilon(0.15));
}

TEST_CASE("species registry parsing") {
  std::istringstream in(
      "# name,alpha_par_A3,alpha_perp_A3,B_cm1,mass_amu,j_parity\n"
      "CS2,15.14,5.54,0.109,76.14,even_only\n"
      "\n"
      "OCS,8.0,4.0,0.2029,60.07,all\n");
  auto reg = SpeciesRegistry::from_stream(in);
  REQUIRE(reg.records().size() == 2);
  CHECK(reg.at("OCS").j_parity == JParity::all);
  CHECK(reg.find("CS2")->b_cm1 == 0.109);
  CHECK_FALSE(reg.find("N2").has_value());
  CHECK_THROWS_AS(reg.at("N2"), InvalidSpecies);

  std::ostringstream out;
  reg.write(out);
  std::istringstream again(out.str());
  auto reread = SpeciesRegistry::from_stream(again);
  REQUIRE(reread.records().size() == 2);
  CHECK(reread.at("OCS").mass_amu == 60.07);

  std::istringstream bad_b("X,1,1,-0.1,10,all\n");
  CHECK_THROWS_AS(SpeciesRegistry::from_stream(bad_b), InvalidSpecies);
  std::istringstream bad_field("X,1,1,abc,10,all\n");
  CHECK_THROWS_AS(SpeciesRegistry::from_stream(bad_field), InvalidSpecies);
  std::istringstream bad_parity("X,1,1,0.1,10,sometimes\n");
  CHECK_THROWS_AS(SpeciesRegistry::from_stream(bad_parity), InvalidSpecies);

  auto shipped = SpeciesRegistry::builtin();
  CHECK(shipped.at("CS2").alpha_parallel_a3 == carbon_disulfide().alpha_parallel_a3);
}

TEST_CASE("rng substreams") {
  RngSpec spec{1};
  auto a = rng_substream(spec, 0);
  auto b = rng_substream(spec, 0);
  for (int k = 0; k < 100; ++k) CHECK(a() == b());

  auto c = rng_substream(spec, 0);
  auto d = rng_substream(spec, 1);
  CHECK(c() != d());
  CHECK(rng_substream(RngSpec{2}, 0)() != rng_substream(RngSpec{1}, 0)());

  // Draws do not depend on which thread consumes which stream.
  std::vector<std::uint64_t> serial(64), threaded(64);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    auto s = rng_substream(spec, i);
    s();
    serial[i] = s();
  }
  parallel_for(threaded.size(), 4, [&](std::size_t i) {
    auto s = rng_substream(spec, threaded.size() - 1 - i);
    s();
    threaded[threaded.size() - 1 - i] = s();
  });
  CHECK(serial == threaded);

  auto u = rng_substream(spec, 3);
  double acc = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    acc += x;
  }
  CHECK(acc / 100000 == Approx(0.5).epsilon(0.01));
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::set<int>(hits.begin(), hits.end()) == std::set<int>{1});
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 7) throw DomainError("boom");
                  }),
                  DomainError);
}

TEST_CASE("histograms and distances") {
  std::vector<double> xs{0.05, 0.15, 0.15, 1.0, 2.0};
  auto h = Histogram::of_samples(xs, 0.0, 1.0, 10);
  CHECK(h.mass[0] == Approx(0.2));
  CHECK(h.mass[1] == Approx(0.4));
  CHECK(h.mass[9] == Approx(0.2));
  CHECK(h.bin_of(2.0) == h.bins());
  CHECK(h.density(1) == Approx(4.0));

  auto uniform = Histogram::of_cdf([](double x) { return x; }, 0.0, 1.0, 4);
  CHECK(uniform.total() == Approx(1.0).epsilon(1e-14));
  for (double m : uniform.mass) CHECK(m == Approx(0.25));
  CHECK(total_variation(uniform, uniform) == 0.0);

  Histogram left(0.0, 1.0, 2), right(0.0, 1.0, 2);
  left.mass = {1.0, 0.0};
  right.mass = {0.0, 1.0};
  CHECK(total_variation(left, right) == Approx(1.0));

  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
  CHECK(ks_distance(grid, [](double x) { return x; }) == Approx(0.0005).epsilon(1e-6));

  std::vector<double> ys;
  for (double g : grid) ys.push_back(3.0 - 2.0 * g);
  CHECK(pearson_correlation(grid, ys) == Approx(-1.0).epsilon(1e-12));
  CHECK(mean(grid) == Approx(0.5));
  CHECK(stddev(grid) == Approx(std::sqrt((1.0 - 1e-6) / 12.0)).epsilon(1e-9));

  auto s = summarize(grid);
  CHECK(s.count == 1000);
  CHECK(s.min == grid.front());
  CHECK(s.max == grid.back());
  CHECK(s.median == Approx(0.5).epsilon(1e-3));
}
