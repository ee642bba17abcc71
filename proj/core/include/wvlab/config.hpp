#pragma once

// Flat key = value config files mirroring the ScenarioConfig field names.
// Unknown keys are a hard error: a typo in a scientific config must not
// silently fall back to a default.

#include <string>

#include "wvlab/scenario.hpp"

namespace wvlab {

/// Parses config text. Lines are `key = value`; blank lines and `#` comments
/// are ignored. Throws ConfigError naming the offending field.
ScenarioConfig parse_config_text(const std::string& text);

/// Reads and parses a config file.
ScenarioConfig load_config(const std::string& path);

} // namespace wvlab
