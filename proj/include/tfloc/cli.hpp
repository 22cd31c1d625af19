#pragma once

// Experiment runner behind the `tfloc` executable.

#include <iosfwd>
#include <string>
#include <vector>

#include "tfloc/weights.hpp"

#include <json.hpp>

namespace tfloc::cli {

enum ExitCode { kPass = 0, kInvariantFailure = 1, kConfigError = 2 };

/// Parses a weight from "family:params" or a JSON object {family, params, dimension[, factors, exponent]}.
RadialWeight weight_from_json(const nlohmann::json& j);
nlohmann::ordered_json weight_to_json(const RadialWeight& w);

/// Runs one subcommand; args excludes the program name. Reports go to the configured output directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tfloc::cli
