#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "solitonjet/profile.hpp"
#include "solitonjet/residuals.hpp"

namespace solitonjet {

/// A verification recipe. Top-level keys: name, family, seed, modes, grid,
/// tolerance, chain, equations, checks. See scenarios/README.md for the format.
struct Scenario {
  std::string name;
  std::string description;
  Family family = Family::Akns;
  double a0 = 0.0;
  std::vector<Mode> modes;
  GridSpec grid;
  double tolerance = 1e-8;
  std::vector<nlohmann::json> chain;
  std::vector<nlohmann::json> equations;
  std::vector<nlohmann::json> checks;
};

/// Parses and validates structure: known keys and ops, unique stage names,
/// references only to earlier stages. Throws Error(Scenario).
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(std::string_view text);
/// Throws Error(InvalidArgument) when the file cannot be read.
Scenario load_scenario_file(const std::filesystem::path& path);

/// Builds the chain and evaluates every entry. Construction errors keep their
/// kind and name the failing stage.
ResidualReport run_suite(const Scenario& scenario, const ScanOptions& options = {});

struct BuiltinScenario {
  std::string name;
  std::string json;
  bool in_all = true;
};

const std::vector<BuiltinScenario>& builtin_scenarios();
/// Throws Error(InvalidArgument) for an unknown name.
Scenario builtin_scenario(std::string_view name);

nlohmann::json report_to_json(const ResidualReport& report);
/// One line per entry: PASS/FAIL, label, residual, tolerance.
std::string report_to_text(const ResidualReport& report);

}  // namespace solitonjet
