#pragma once

#include "spoofgrid/growth_grid.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace spoofgrid {

/// Scenario files are JSON objects keyed by the Scenario field names
/// (`move_cost`, `discount`, `terminal_mode`, ...). Fields may be omitted, in
/// which case the value from `base` is kept. Unknown keys and wrongly typed
/// values raise ParseError; the merged result is validated.
Scenario parse_scenario(std::string_view json_text, const Scenario& base = {});
Scenario load_scenario(const std::filesystem::path& path, const Scenario& base = {});

/// Full serialisation, every field present. parse_scenario(to_json(s)) == s.
std::string scenario_to_json(const Scenario& scenario);

}  // namespace spoofgrid
