#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "csc/solver.hpp"

namespace csc {

/// Checked-in expectations for regression runs; every field is optional.
struct ScenarioExpectation {
  std::optional<int> valid_count;
  std::optional<int> valid_regular;
  std::optional<int> valid_switched;
  std::optional<std::vector<int>> valid_types;       // exact set of type ids with a valid solution
  std::vector<int> invalid_types;                    // each must have a filtered (invalid) root
  std::vector<int> absent_types;                     // no root at all
};

struct Scenario {
  std::string name;
  ProblemInstance instance;
  SolverOptions options;
  std::optional<ScenarioExpectation> expect;
  std::vector<std::string> warnings;  // e.g. directions renormalized on load
};

/// Parses the scenario object:
///   {"name": ..., "start": {"position": [x,y,z], "direction": [x,y,z]},
///    "goal": {...}, "radius": r, "options": {...}, "expect": {...}}
/// Directions are normalized; a warning is recorded when the input norm is
/// off by more than 1e-6. Throws CscError(invalid_input) on malformed data.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& s);
nlohmann::json to_json(const SolverOptions& o);
void apply_options(const nlohmann::json& j, SolverOptions& o);

/// Every *.json scenario in a directory, sorted by file name.
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir);

}  // namespace csc
