#pragma once

#include <string>

#include "lfcbf/scenario/scenario.hpp"

namespace lfcbf::scenario {

/// Loads a scenario document (JSON). Unknown keys are rejected so typos
/// fail loudly. Parse problems carry the file path; cross-field
/// validation happens in compile().
Scenario load_scenario(const std::string& path);

/// Parses scenario JSON from a string (tests and tooling).
Scenario parse_scenario_json(const std::string& text,
                             const std::string& origin = "<string>");

}  // namespace lfcbf::scenario
