#include "stadia/presets.h"

#include <algorithm>
#include <cstdlib>

#include "stadia/config.h"

namespace stadia {
namespace {

PoissonStream ParsePoisson(const YAML::Node& node, const PoissonStream& fallback,
                           const std::string& what) {
  PoissonStream s = fallback;
  if (!node) return s;
  s.enabled = config::GetBool(node, "enabled", true);
  s.mean_ipt_ms = config::GetDouble(node, "mean_ipt_ms", s.mean_ipt_ms);
  if (node["size"]) s.size_dist = ParseDistribution(node["size"], what + ".size");
  return s;
}

void EmitDistribution(YAML::Emitter& out, const DiscreteDistribution& d) {
  out << YAML::Flow << YAML::BeginMap;
  for (const auto& e : d.entries()) out << YAML::Key << e.value << YAML::Value << e.probability;
  out << YAML::EndMap;
}

void EmitPoisson(YAML::Emitter& out, const char* key, const PoissonStream& s) {
  out << YAML::Key << key << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << s.enabled;
  out << YAML::Key << "mean_ipt_ms" << YAML::Value << s.mean_ipt_ms;
  out << YAML::Key << "size" << YAML::Value;
  EmitDistribution(out, s.size_dist);
}

}  // namespace

DiscreteDistribution ParseDistribution(const YAML::Node& node,
                                       const std::string& what) {
  if (!node || !node.IsMap() || node.size() == 0)
    throw ConfigError(what + ": expected a non-empty map of value: weight");
  std::vector<std::pair<int, double>> weights;
  for (const auto& kv : node) {
    try {
      weights.emplace_back(kv.first.as<int>(), kv.second.as<double>());
    } catch (const YAML::Exception&) {
      throw ConfigError(what + ": entries must be integer: number");
    }
  }
  try {
    return DiscreteDistribution::FromWeights(std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

GeneratorParams ParseGeneratorParams(const YAML::Node& node) {
  if (!node.IsMap()) throw ConfigError("generator params: expected a map");
  GeneratorParams p;
  p.name = config::GetString(node, "name", "");
  if (node["game"]) p.game = ParseGame(config::RequireString(node, "game"));
  if (node["codec"]) p.codec = ParseCodec(config::RequireString(node, "codec"));
  if (node["resolution"])
    p.resolution = ParseResolution(config::RequireString(node, "resolution"));
  p.seed = static_cast<uint64_t>(config::GetInt(node, "seed", 1));

  const YAML::Node video = node["video"];
  if (!video) throw ConfigError("generator params: missing 'video' section");
  p.frame_rate = config::GetDouble(video, "frame_rate", 60.0);
  p.group_spacing_ms = config::GetDouble(video, "group_spacing_ms", 2.0);
  p.intra_group_spacing_ms = config::GetDouble(video, "intra_group_spacing_ms", 0.1);
  p.group_count_dist = ParseDistribution(video["groups_per_frame"], "video.groups_per_frame");
  p.group_size_dist = ParseDistribution(video["packets_per_group"], "video.packets_per_group");
  p.video_size_dist = ParseDistribution(video["packet_size"], "video.packet_size");

  if (const YAML::Node a = node["audio"]) {
    p.audio.enabled = config::GetBool(a, "enabled", true);
    p.audio.period_ms = config::GetDouble(a, "period_ms", p.audio.period_ms);
    p.audio.size = config::GetInt(a, "size", p.audio.size);
  }
  if (const YAML::Node s = node["stun"]) {
    p.stun.enabled = config::GetBool(s, "enabled", true);
    p.stun.period_ms = config::GetDouble(s, "period_ms", p.stun.period_ms);
    p.stun.jitter = config::GetDouble(s, "jitter", p.stun.jitter);
    p.stun.downlink_size = config::GetInt(s, "downlink_size", p.stun.downlink_size);
    p.stun.uplink_size = config::GetInt(s, "uplink_size", p.stun.uplink_size);
  }
  p.dtls_downlink = ParsePoisson(node["dtls_downlink"], p.dtls_downlink, "dtls_downlink");
  p.dtls_uplink = ParsePoisson(node["dtls_uplink"], p.dtls_uplink, "dtls_uplink");
  p.rtcp_uplink = ParsePoisson(node["rtcp_uplink"], p.rtcp_uplink, "rtcp_uplink");
  if (node["rtcp_uplink"])
    p.rtcp_delay_ms = config::GetDouble(node["rtcp_uplink"], "delay_ms", p.rtcp_delay_ms);

  try {
    p.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("generator params '" + p.name + "': " + e.what());
  }
  return p;
}

GeneratorParams LoadGeneratorParams(const std::filesystem::path& path) {
  return ParseGeneratorParams(config::LoadFile(path));
}

std::string GeneratorParamsToYaml(const GeneratorParams& p) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << p.name;
  out << YAML::Key << "game" << YAML::Value << ToString(p.game);
  out << YAML::Key << "codec" << YAML::Value << ToString(p.codec);
  out << YAML::Key << "resolution" << YAML::Value << ToString(p.resolution);
  out << YAML::Key << "seed" << YAML::Value << p.seed;

  out << YAML::Key << "video" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "frame_rate" << YAML::Value << p.frame_rate;
  out << YAML::Key << "group_spacing_ms" << YAML::Value << p.group_spacing_ms;
  out << YAML::Key << "intra_group_spacing_ms" << YAML::Value << p.intra_group_spacing_ms;
  out << YAML::Key << "groups_per_frame" << YAML::Value;
  EmitDistribution(out, p.group_count_dist);
  out << YAML::Key << "packets_per_group" << YAML::Value;
  EmitDistribution(out, p.group_size_dist);
  out << YAML::Key << "packet_size" << YAML::Value;
  EmitDistribution(out, p.video_size_dist);
  out << YAML::EndMap;

  out << YAML::Key << "audio" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << p.audio.enabled;
  out << YAML::Key << "period_ms" << YAML::Value << p.audio.period_ms;
  out << YAML::Key << "size" << YAML::Value << p.audio.size;
  out << YAML::EndMap;

  out << YAML::Key << "stun" << YAML::Value << YAML::Flow << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << p.stun.enabled;
  out << YAML::Key << "period_ms" << YAML::Value << p.stun.period_ms;
  out << YAML::Key << "jitter" << YAML::Value << p.stun.jitter;
  out << YAML::Key << "downlink_size" << YAML::Value << p.stun.downlink_size;
  out << YAML::Key << "uplink_size" << YAML::Value << p.stun.uplink_size;
  out << YAML::EndMap;

  EmitPoisson(out, "dtls_downlink", p.dtls_downlink);
  out << YAML::EndMap;
  EmitPoisson(out, "dtls_uplink", p.dtls_uplink);
  out << YAML::EndMap;
  EmitPoisson(out, "rtcp_uplink", p.rtcp_uplink);
  out << YAML::Key << "delay_ms" << YAML::Value << p.rtcp_delay_ms;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

PresetLibrary PresetLibrary::Load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw ConfigError("preset directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".yaml") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  PresetLibrary lib;
  for (const auto& f : files) {
    GeneratorParams p = LoadGeneratorParams(f);
    if (p.name.empty()) p.name = f.stem().string();
    if (lib.FindByName(p.name))
      throw ConfigError("duplicate preset name '" + p.name + "'");
    lib.presets_.push_back(std::move(p));
  }
  return lib;
}

const GeneratorParams* PresetLibrary::FindByName(const std::string& name) const {
  for (const auto& p : presets_)
    if (p.name == name) return &p;
  return nullptr;
}

const GeneratorParams* PresetLibrary::Find(Game game, Resolution resolution,
                                           Codec codec) const {
  for (const auto& p : presets_)
    if (p.game == game && p.resolution == resolution && p.codec == codec)
      return &p;
  return nullptr;
}

GeneratorParams PresetLibrary::Resolve(Game game, Resolution resolution,
                                       Codec codec, double fallback_mbps) const {
  if (const GeneratorParams* p = Find(game, resolution, codec)) return *p;
  const GeneratorParams* base = Find(game, Resolution::k1080p, codec);
  if (!base) base = Find(game, Resolution::k1080p, Codec::kVp9);
  if (!base)
    throw ConfigError("no preset for " + ToString(game) + " to derive " +
                      ToString(resolution) + " from");
  GeneratorParams p = ScaleToRate(*base, fallback_mbps);
  p.resolution = resolution;
  p.codec = codec;
  p.name = base->name + "_scaled_" + ToString(resolution);
  return p;
}

std::filesystem::path DefaultPresetDir() {
  if (const char* env = std::getenv("STADIA_PRESET_DIR")) return env;
  return std::filesystem::path(STADIA_DATA_DIR) / "presets";
}

}  // namespace stadia
