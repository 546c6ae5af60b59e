#pragma once

#include "ccfm/core/platoon.hpp"

#include <filesystem>
#include <string>

namespace ccfm::core {

/// Parses the platoon JSON document:
///   {"N": 4, "vehicles": [{"alpha":..,"tau":..,"b":..}, ...], "m": 2, "l": 1,
///    "leader": {"v_eq": 10, "ramp": 10}, "kappa": 1}
/// "kappa" defaults to 1. A missing or null "ramp" means an already-settled leader.
/// Throws InvalidConfig on malformed or invalid documents.
PlatoonConfig parse_config(const std::string& json_text);
PlatoonConfig load_config(const std::filesystem::path& path);

std::string to_json(const PlatoonConfig& config);

} // namespace ccfm::core
