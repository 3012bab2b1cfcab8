#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "glidesnn/scenario.hpp"

namespace glidesnn {

/// Parses a YAML scenario. Missing keys keep their defaults; unknown keys,
/// wrong types and conflicting `<gain>` / `<gain>_db` pairs throw ConfigError.
[[nodiscard]] ScenarioConfig parse_config(std::string_view yaml_text);

/// Reads and parses a config file. Unreadable files throw IoError.
[[nodiscard]] ScenarioConfig load_config(const std::filesystem::path& path);

/// Serializes every field (linear gains, round-trippable doubles) so that
/// parse_config(dump_config(c)) reproduces c.
[[nodiscard]] std::string dump_config(const ScenarioConfig& cfg);

}  // namespace glidesnn
