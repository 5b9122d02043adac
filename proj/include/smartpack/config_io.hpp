#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "smartpack/engine.hpp"

namespace smartpack {

/// JSON documents for parameters and scenarios. Readers overlay the
/// document on a base and reject unknown keys with a ConfigError carrying
/// the field path; schema in docs/config.md.
nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& doc, const ModelParams& base);

nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig scenario_from_json(const nlohmann::json& doc, const ModelParams& base);

/// Parameter base for scenarios: the file named by $SMARTPACK_PARAMS when
/// set, builtin_params() otherwise.
ModelParams resolve_base_params();

ScenarioConfig load_scenario(const std::filesystem::path& path, const ModelParams& base);
ModelParams load_params(const std::filesystem::path& path);

/// FNV-1a 64-bit digest of the canonical serialized config, as 16 hex digits.
std::string config_digest(const ScenarioConfig& config);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace smartpack
