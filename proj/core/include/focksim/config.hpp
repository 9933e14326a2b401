#pragma once

#include <string>

#include "focksim/scenarios.hpp"

namespace focksim {

/// Parse a flat "key = value" document ("#" starts a comment). Absent keys
/// keep their defaults; unknown keys, malformed lines and out-of-range values
/// raise ConfigError with a line/field diagnostic. Complex values are written
/// "(re,im)"; a bare real is accepted. Phases are a comma-separated list.
ExperimentConfig parse_config(const std::string& text);

/// Emit the full key set at 17 significant digits; parse_config on the output
/// reproduces the config exactly.
std::string serialize_config(const ExperimentConfig& config);

} // namespace focksim
