#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cbm/scenarios.hpp"

namespace cbm {

inline constexpr int kScenarioSchemaVersion = 1;

/// Declarative scenario description as stored in scenario JSON files:
///
///   {"schema_version": 1, "type": "two_cells" | "division_in_spheroid" |
///    "linear_growth", "n_per_dim": 6, "r0": 0.3, "dt_div": 1.0,
///    "n_divisions": 10, "seed": 7, "T": 6.0, "direction": [1, 0, 0],
///    "force": {"mu": 5.7, "s": 1.0, "rA": 1.5}}
///
/// Fields not used by a type are ignored; "direction" is optional.
struct ScenarioSpec {
  std::string type = "two_cells";
  int n_per_dim = 6;
  double r0 = 0.3;
  double dt_div = 1.0;
  int n_divisions = 10;
  std::uint64_t seed = 7;
  double T = 6.0;
  std::optional<std::vector<double>> direction;
  double mu = 5.7;
  double s = 1.0;
  double r_a = 1.5;
};

/// Throws std::invalid_argument with a field-specific message on bad input.
ScenarioSpec scenario_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& spec);
ScenarioSpec load_scenario_spec(const std::filesystem::path& path);

Scenario build_scenario(const ScenarioSpec& spec);

}  // namespace cbm
