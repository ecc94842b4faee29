#pragma once

#include <map>
#include <string>
#include <vector>

#include "qbgk/config.hpp"

namespace qbgk {

// Preset names accepted by preset_config().
const std::vector<std::string>& scenario_names();
SimulationConfig preset_config(const std::string& scenario);

// Key-value documents: one `key = value` per line, `#` starts a comment, lists are
// comma-separated. A `scenario` key selects the preset the remaining keys override, wherever it
// appears. Unknown keys and malformed values raise ConfigError with the line number.
SimulationConfig parse_config_text(const std::string& text, const std::string& source = "<text>");
SimulationConfig parse_config(const std::string& path);
std::string serialize_config(const SimulationConfig& cfg);

// Applies one `key=value` assignment (no preset switch for `scenario`).
void apply_override(SimulationConfig& cfg, const std::string& assignment);
std::vector<std::string> config_keys();
std::map<std::string, std::string> config_entries(const SimulationConfig& cfg);

}  // namespace qbgk
