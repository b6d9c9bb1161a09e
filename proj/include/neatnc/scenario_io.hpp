#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "neatnc/environment.hpp"

namespace neatnc {

/// Parses the JSON scenario schema described in docs/formats.md and
/// validates the result. Throws ContractError on schema or geometry errors.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);

}  // namespace neatnc
