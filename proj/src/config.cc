#include "stadia/config.h"

namespace stadia::config {
namespace {

template <typename T>
T As(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError("invalid value for '" + key + "': " + e.what());
  }
}

YAML::Node Child(const YAML::Node& node, const std::string& key) {
  if (!node.IsMap()) throw ConfigError("expected a mapping around '" + key + "'");
  return node[key];
}

}  // namespace

YAML::Node LoadFile(const std::filesystem::path& path) {
  try {
    return YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open config file " + path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

YAML::Node LoadString(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.what());
  }
}

double RequireDouble(const YAML::Node& node, const std::string& key) {
  const YAML::Node child = Child(node, key);
  if (!child) throw ConfigError("missing key '" + key + "'");
  return As<double>(child, key);
}

int RequireInt(const YAML::Node& node, const std::string& key) {
  const YAML::Node child = Child(node, key);
  if (!child) throw ConfigError("missing key '" + key + "'");
  return As<int>(child, key);
}

std::string RequireString(const YAML::Node& node, const std::string& key) {
  const YAML::Node child = Child(node, key);
  if (!child) throw ConfigError("missing key '" + key + "'");
  return As<std::string>(child, key);
}

double GetDouble(const YAML::Node& node, const std::string& key,
                 double fallback) {
  const YAML::Node child = Child(node, key);
  return child ? As<double>(child, key) : fallback;
}

int GetInt(const YAML::Node& node, const std::string& key, int fallback) {
  const YAML::Node child = Child(node, key);
  return child ? As<int>(child, key) : fallback;
}

std::string GetString(const YAML::Node& node, const std::string& key,
                      const std::string& fallback) {
  const YAML::Node child = Child(node, key);
  return child ? As<std::string>(child, key) : fallback;
}

bool GetBool(const YAML::Node& node, const std::string& key, bool fallback) {
  const YAML::Node child = Child(node, key);
  return child ? As<bool>(child, key) : fallback;
}

}  // namespace stadia::config
