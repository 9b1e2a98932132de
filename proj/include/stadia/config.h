#ifndef STADIA_CONFIG_H_
#define STADIA_CONFIG_H_

// Shared helpers for the YAML config grammar used by manifests, generator
// params, scenarios and comparison targets. See README.md for the grammar of
// each file kind.

#include <filesystem>
#include <optional>
#include <string>

#include <yaml-cpp/yaml.h>

#include "stadia/types.h"

namespace stadia::config {

YAML::Node LoadFile(const std::filesystem::path& path);
YAML::Node LoadString(const std::string& text);

// Required scalar lookups; ConfigError names the missing/invalid key.
double RequireDouble(const YAML::Node& node, const std::string& key);
int RequireInt(const YAML::Node& node, const std::string& key);
std::string RequireString(const YAML::Node& node, const std::string& key);

double GetDouble(const YAML::Node& node, const std::string& key,
                 double fallback);
int GetInt(const YAML::Node& node, const std::string& key, int fallback);
std::string GetString(const YAML::Node& node, const std::string& key,
                      const std::string& fallback);
bool GetBool(const YAML::Node& node, const std::string& key, bool fallback);

}  // namespace stadia::config

#endif  // STADIA_CONFIG_H_
