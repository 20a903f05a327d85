#pragma once

// Self-contained sweep definitions that regenerate the published figures,
// plus the JSON sidecar written next to every output file.

#include <string>
#include <vector>

#include <json.hpp>

#include "ringsim/sweep.hpp"

namespace ringsim {

struct Recipe {
  std::string name;
  std::string figure;
  std::string description;
  std::vector<std::string> expected_features;
  std::vector<RunConfig> runs;  // concatenated in order into one table
};

const std::vector<std::string>& recipe_names();
/// Throws InvalidArgument for an unknown name.
Recipe make_recipe(const std::string& name);

struct RunOutput {
  Table table;
  nlohmann::json sidecar;
};

RunOutput run_recipe(const std::string& name, const SweepOptions& options = {});

/// Sidecar contents shared by all commands: command, version, config and its
/// hash, wall time and row count.
nlohmann::json make_sidecar(const std::string& command, const RunConfig& config,
                            double wall_seconds, int rows);

}  // namespace ringsim
