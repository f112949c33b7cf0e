#pragma once

// JSON scenario files. The schema is documented in docs/config.md; every
// field is optional and falls back to the default-constructed value, so a
// file only needs the parts that differ from the defaults.

#include <filesystem>
#include <string>

#include "admm_ilqr/scenario.hpp"

namespace admm_ilqr {

/// Serialized form; doubles are written with round-trip precision.
std::string to_json_text(const ScenarioConfig& config);

/// Throws ConfigError on malformed JSON, wrong field types, unknown keys or
/// a config that fails validation.
ScenarioConfig from_json_text(const std::string& text);

/// Throws ConfigError if the file cannot be read or parsed.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Throws IoError if the file cannot be written.
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

}  // namespace admm_ilqr
