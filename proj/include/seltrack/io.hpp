#pragma once

#include <string>

#include "seltrack/energy.hpp"
#include "seltrack/sim.hpp"

namespace seltrack {

// JSON file formats. Angles cross the file boundary in degrees; the library
// keeps radians internally. All loaders throw ParseError on malformed or
// invalid content.

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

std::string profile_to_json(const EnergyModelParams& params);
EnergyModelParams profile_from_json(const std::string& text);
EnergyModelParams load_profile(const std::string& path);

/// Resolves "namuru" to the built-in profile, anything else as a file path.
EnergyModelParams resolve_profile(const std::string& name_or_path);

std::string policy_to_json(const TrackingPolicy& policy);
TrackingPolicy policy_from_json(const std::string& text);
TrackingPolicy load_policy(const std::string& path);

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace seltrack
