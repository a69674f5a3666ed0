#pragma once

// Experiment execution and CSV emission.
//
// Every output starts with a provenance block:
//
//   # nevai-cli 0.3.0
//   # experiment: nevai
//   # config_hash: fnv1a64:<16 hex digits of the hash of the "#|" body>
//   # seed: 1
//   #| <effective config, one TOML line each>
//
// followed by a header row and the data rows.

#include <exception>
#include <string>
#include <string_view>

#include "nevai_cli/config.hpp"

namespace nevai::cli {

inline constexpr std::string_view kToolName = "nevai-cli";
std::string_view tool_version();

/// Full CSV artifact (provenance block included). Deterministic for a fixed
/// config; the thread count only changes the wall time.
std::string run(const ExperimentConfig& cfg);

/// Column names for an experiment (sweep columns depend on the diagnostic).
std::string csv_header(const ExperimentConfig& cfg);

/// Process exit status for an error escaping run(): 2 config, 3 numeric
/// domain or conditioning, 4 convergence, 1 anything else.
int exit_status(const std::exception& err);

/// Recovers the effective config from the "#|" lines of an artifact.
ExperimentConfig config_from_artifact(std::string_view csv);

}  // namespace nevai::cli
