#pragma once

#include <string>

#include "json.hpp"

#include "prealign/io/config.hpp"
#include "prealign/io/output.hpp"

namespace prealign::io {

/// Files and per-sample failure counts produced by one command. Nothing is
/// written until the caller commits the output set.
struct RunReport {
  OutputSet outputs;
  nlohmann::json summary;
  nlohmann::json failures = nlohmann::json::object();
};

RunReport cmd_quantum_dist(const ScenarioConfig& config);
RunReport cmd_classical_dist(const ScenarioConfig& config);
RunReport cmd_strong_deflect(const ScenarioConfig& config);
RunReport cmd_asymptotics(const ScenarioConfig& config);

/// Validates the config, runs the named command and writes its outputs and
/// manifest into config.out_dir. Errors propagate to the caller.
RunReport run_and_write(const std::string& command, const ScenarioConfig& config);

/// Exit status for an exception escaping run_and_write: 2 for configuration
/// problems, 3 for numerical failures.
int exit_status_for(const std::exception& e);

std::string version();

}  // namespace prealign::io
