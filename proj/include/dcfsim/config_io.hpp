#pragma once

#include <filesystem>
#include <string>

#include "dcfsim/scenario.hpp"

namespace dcfsim {

/// Applies a JSON scenario document on top of `base`. Keys mirror
/// ScenarioConfig field names; `mac`, `radio`, `tcp` and `field` are nested
/// sections. Times are in seconds. Unknown keys are rejected.
ScenarioConfig parse_scenario(const std::string& json_text, ScenarioConfig base = {});
ScenarioConfig load_scenario(const std::filesystem::path& path, ScenarioConfig base = {});

/// The full effective configuration as a JSON document (round-trips through
/// parse_scenario).
std::string dump_scenario(const ScenarioConfig& cfg);

}  // namespace dcfsim
