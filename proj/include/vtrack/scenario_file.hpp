#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "vtrack/sim.hpp"
#include "vtrack/sweep.hpp"

namespace vtrack {

inline constexpr std::string_view kScenarioSchema = "vtrack-scenario/1";
inline constexpr std::string_view kGridSchema = "vtrack-grid/1";

// YAML scenario documents. Unknown keys are rejected, missing required keys
// are reported with their path, and parse errors carry line and column.
// All throw ScenarioError.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// Emits every field with 17 significant digits so parse_scenario reproduces
// the same Scenario.
std::string write_scenario(const Scenario& scenario);

// A path that exists is loaded; otherwise `name_or_path` is looked up among the
// bundled scenario names.
Scenario resolve_scenario(const std::string& name_or_path);

ParameterGrid parse_grid(std::string_view text);
ParameterGrid load_grid(const std::filesystem::path& path);

}  // namespace vtrack
