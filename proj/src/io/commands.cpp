#include "prealign/io/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include "prealign/classical.hpp"
#include "prealign/deflection.hpp"
#include "prealign/errors.hpp"
#include "prealign/quantum.hpp"
#include "prealign/strongfield.hpp"

#ifndef PREALIGN_VERSION
#define PREALIGN_VERSION "0.0.0"
#endif

namespace prealign::io {

namespace {

classical::EnsembleSpec ensemble_of(const ScenarioConfig& cfg, std::size_t default_samples) {
  classical::EnsembleSpec spec;
  spec.n_samples = cfg.samples.value_or(default_samples);
  spec.thermal = cfg.thermal;
  spec.rng.seed = cfg.seed;
  spec.threads = cfg.threads;
  return spec;
}

std::string axis_name(KickAxis axis) { return axis == KickAxis::z_parallel ? "z" : "x"; }

nlohmann::json thermal_json(const MolecularSpecies& species, const ThermalSpec& thermal) {
  const auto r = thermal.resolve(species);
  return {{"temperature_k", r.temperature_k}, {"j_thermal", r.j_thermal}};
}

/// Histogram over the sample range, widened when every sample is equal.
Histogram range_histogram(const std::vector<double>& xs, std::size_t bins) {
  if (xs.empty()) return Histogram(0.0, 1.0, bins);
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  double a = *lo, b = *hi;
  if (a == b) {
    const double pad = std::max(std::abs(a) * 1e-6, 1e-12);
    a -= pad;
    b += pad;
  }
  return Histogram::of_samples(xs, a, b, bins);
}

}  // namespace

std::string version() { return PREALIGN_VERSION; }

RunReport cmd_quantum_dist(const ScenarioConfig& cfg) {
  const auto species = resolve_species(cfg);
  quantum::ThermalOptions options;
  options.threads = cfg.threads;
  const auto dist = quantum::thermal_distribution(species, cfg.thermal, cfg.kick, options);

  RunReport report;
  CsvTable lines({"A_numerator", "A_denominator", "A", "weight"});
  for (const auto& l : dist.lines) {
    lines.add_row({std::to_string(l.a.num), std::to_string(l.a.den), format_double(l.a.value()),
                   format_double(l.weight)});
  }
  report.outputs.add("quantum_lines.csv", lines.str());
  report.outputs.add("quantum_hist.csv", histogram_csv(quantum::coarse_grain(dist, cfg.bins), "A"));

  auto& s = report.summary;
  s["species"] = species.name;
  s["thermal"] = thermal_json(species, cfg.thermal);
  s["lines"] = dist.lines.size();
  s["mean"] = dist.mean();
  s["std"] = dist.stddev();
  if (cfg.kick) {
    const double p = cfg.kick->strength(species);
    s["kick"] = {{"strength", p}, {"axis", axis_name(cfg.kick->polarization)}};
    if (cfg.kick->polarization == KickAxis::z_parallel && p > 0.0) {
      const auto [m, sd] = classical::parallel_kick_asymptotics(p, cfg.thermal.resolve(species).j_thermal);
      s["asymptotic"] = {{"mean", m},
                         {"std", sd},
                         {"mean_rel_error", std::abs(dist.mean() - m) / m},
                         {"std_rel_error", std::abs(dist.stddev() - sd) / sd}};
    }
  }
  report.outputs.add_json("quantum_summary.json", s);
  return report;
}

RunReport cmd_classical_dist(const ScenarioConfig& cfg) {
  const auto species = resolve_species(cfg);
  const auto spec = ensemble_of(cfg, 1'000'000);
  const auto dist = classical::ensemble_alignment_distribution(spec, species, cfg.kick);

  std::function<double(double)> overlay;
  std::string overlay_name;
  if (!cfg.kick) {
    overlay = [](double a) { return classical::rainbow_reference_pdf(a, classical::RainbowVariant::thermal); };
    overlay_name = "unimodal_rainbow_density";
  } else if (cfg.kick->polarization == KickAxis::x_perpendicular) {
    overlay = [](double a) { return classical::rainbow_reference_pdf(a, classical::RainbowVariant::perpendicular); };
    overlay_name = "bimodal_rainbow_density";
  }

  RunReport report;
  report.outputs.add("classical_hist.csv", histogram_csv(dist.histogram(cfg.bins), "A", overlay, overlay_name));
  if (cfg.dump_samples) {
    CsvTable samples({"row", "A"});
    for (std::size_t i = 0; i < dist.samples.size(); ++i) {
      samples.add_row(std::vector<double>{static_cast<double>(i), dist.samples[i]});
    }
    report.outputs.add("classical_samples.csv", samples.str());
  }

  auto& s = report.summary;
  s["species"] = species.name;
  s["thermal"] = thermal_json(species, cfg.thermal);
  s["samples"] = spec.n_samples;
  s["seed"] = spec.rng.seed;
  s["alignment"] = summary_json(dist.summary());
  s["ks_unimodal_rainbow"] = ks_distance(dist.samples, [](double a) {
    return classical::rainbow_reference_cdf(a, classical::RainbowVariant::thermal);
  });
  s["ks_bimodal_rainbow"] = ks_distance(dist.samples, [](double a) {
    return classical::rainbow_reference_cdf(a, classical::RainbowVariant::perpendicular);
  });
  if (cfg.kick) {
    const double p = cfg.kick->strength(species);
    s["kick"] = {{"strength", p},
                 {"axis", axis_name(cfg.kick->polarization)},
                 {"reduced_strength", classical::reduced_kick_strength(species, cfg.thermal, cfg.kick)}};
    if (cfg.kick->polarization == KickAxis::z_parallel && p > 0.0) {
      const auto [m, sd] = classical::parallel_kick_asymptotics(p, cfg.thermal.resolve(species).j_thermal);
      s["asymptotic"] = {{"mean", m}, {"std", sd}};
    }
  }
  report.failures["rejected_degenerate"] = dist.rejected;
  s["rejected_degenerate"] = dist.rejected;
  report.outputs.add_json("classical_summary.json", s);
  return report;
}

RunReport cmd_strong_deflect(const ScenarioConfig& cfg) {
  const auto species = resolve_species(cfg);
  const bool strong = cfg.mode == deflection::Mode::strong;
  const auto spec = ensemble_of(cfg, strong ? 1'000 : 100'000);
  const auto result = deflection::deflection_distribution(spec, cfg.kick, species, cfg.beam, cfg.geometry, cfg.mode);

  RunReport report;
  std::vector<std::string> header{"row", "A", "v_z[m/s]", "gamma[rad]"};
  if (strong) header.insert(header.begin() + 2, "u_peak");
  CsvTable samples(header);
  for (std::size_t i = 0; i < result.v_z.size(); ++i) {
    std::vector<double> row{static_cast<double>(i), result.alignment[i], result.v_z[i], result.gamma[i]};
    if (strong) row.insert(row.begin() + 2, result.peak_mean_u[i]);
    samples.add_row(row);
  }
  report.outputs.add("deflect_samples.csv", samples.str());
  report.outputs.add("deflect_vz_hist.csv", histogram_csv(range_histogram(result.v_z, cfg.bins), "v_z[m/s]"));
  report.outputs.add("deflect_gamma_hist.csv", histogram_csv(range_histogram(result.gamma, cfg.bins), "gamma[rad]"));
  if (strong) {
    report.outputs.add("deflect_peak_u_hist.csv",
                       histogram_csv(Histogram::of_samples(result.peak_mean_u, 0.0, 1.0, cfg.bins), "u_peak"));
  }

  auto& s = report.summary;
  s["species"] = species.name;
  s["mode"] = deflection::to_string(cfg.mode);
  s["thermal"] = thermal_json(species, cfg.thermal);
  s["samples"] = spec.n_samples;
  s["gamma0"] = deflection::gamma0(species, cfg.beam, cfg.geometry);
  s["v_z"] = summary_json(result.v_z_summary());
  s["gamma"] = summary_json(result.gamma_summary());
  double max_gamma = 0.0;
  for (double g : result.gamma) max_gamma = std::max(max_gamma, std::abs(g));
  s["max_abs_gamma"] = max_gamma;
  s["perturbative"] = max_gamma < 0.1;
  const bool varied = result.v_z.size() > 1 && result.v_z_summary().stddev > 0.0 && summarize(result.alignment).stddev > 0.0;
  if (varied) s["correlation_vz_A"] = pearson_correlation(result.v_z, result.alignment);
  if (strong && !result.peak_mean_u.empty()) s["u_peak"] = summary_json(summarize(result.peak_mean_u));
  if (cfg.kick) {
    s["kick"] = {{"strength", cfg.kick->strength(species)}, {"axis", axis_name(cfg.kick->polarization)}};
    // The same ensemble without prealignment, for the narrowing ratio.
    const auto unaligned =
        deflection::deflection_distribution(spec, std::nullopt, species, cfg.beam, cfg.geometry, cfg.mode);
    const double sd_unaligned = unaligned.v_z_summary().stddev;
    const double sd_kicked = result.v_z_summary().stddev;
    s["unaligned_v_z_std"] = sd_unaligned;
    s["narrowing_ratio"] = sd_kicked > 0.0 ? sd_unaligned / sd_kicked : 0.0;
    report.failures["unaligned_failed"] = unaligned.failed;
  }
  report.failures["rejected_degenerate"] = result.rejected;
  report.failures["failed"] = result.failed;
  report.failures["separatrix_crossed"] = result.separatrix_crossed;
  report.failures["pendular_at_peak"] = result.pendular_at_peak;
  s["flags"] = report.failures;
  report.outputs.add_json("deflect_summary.json", s);
  return report;
}

RunReport cmd_asymptotics(const ScenarioConfig& cfg) {
  const auto species = resolve_species(cfg);
  const std::vector<double> kicks = cfg.kick_list.empty() ? std::vector<double>{10.0, 25.0, 50.0, 250.0} : cfg.kick_list;
  const std::vector<double> jts = cfg.j_thermal_list.empty() ? std::vector<double>{5.0} : cfg.j_thermal_list;

  RunReport report;
  CsvTable table({"P", "J_T", "P_over_J_T", "mean_analytic", "std_analytic", "mean_mc", "std_mc", "mean_rel_error",
                  "std_rel_error"});
  std::size_t rejected = 0;
  nlohmann::json rows = nlohmann::json::array();
  for (double jt : jts) {
    for (double p : kicks) {
      auto spec = ensemble_of(cfg, 1'000'000);
      spec.thermal = ThermalSpec::from_j_thermal(jt);
      const auto dist =
          classical::ensemble_alignment_distribution(spec, species, KickPulse::with_strength(p, KickAxis::z_parallel));
      rejected += dist.rejected;
      const auto [m, sd] = classical::parallel_kick_asymptotics(p, jt);
      const auto mc = dist.summary();
      const double em = std::abs(mc.mean - m) / m;
      const double es = std::abs(mc.stddev - sd) / sd;
      table.add_row({p, jt, p / jt, m, sd, mc.mean, mc.stddev, em, es});
      rows.push_back({{"P", p}, {"J_T", jt}, {"mean_rel_error", em}, {"std_rel_error", es}});
    }
  }
  report.outputs.add("asymptotics.csv", table.str());
  report.summary["rows"] = rows;
  report.summary["samples_per_row"] = cfg.samples.value_or(1'000'000);
  report.failures["rejected_degenerate"] = rejected;
  report.outputs.add_json("asymptotics_summary.json", report.summary);
  return report;
}

RunReport run_and_write(const std::string& command, const ScenarioConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  if (command == "quantum-dist") {
    report = cmd_quantum_dist(cfg);
  } else if (command == "classical-dist") {
    report = cmd_classical_dist(cfg);
  } else if (command == "strong-deflect") {
    report = cmd_strong_deflect(cfg);
  } else if (command == "asymptotics") {
    report = cmd_asymptotics(cfg);
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  nlohmann::json manifest{{"command", command},
                          {"version", version()},
                          {"seed", cfg.seed},
                          {"config", cfg.echo()},
                          {"started_utc", stamp},
                          {"wall_clock_s", elapsed},
                          {"failures", report.failures}};
  report.outputs.commit(cfg.out_dir, command, manifest);
  return report;
}

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidSpecies*>(&e) ||
      dynamic_cast<const DomainError*>(&e)) {
    return 2;
  }
  return 3;
}

}  // namespace prealign::io
