#ifndef STADIA_PRESETS_H_
#define STADIA_PRESETS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "stadia/generator.h"

namespace stadia {

// Generator params file grammar (YAML):
//
//   name: tr_1080p_vp9
//   game: TR            codec: VP9          resolution: 1080p
//   seed: 1
//   video:
//     frame_rate: 60
//     group_spacing_ms: 2.0
//     intra_group_spacing_ms: 0.1
//     groups_per_frame: {6: 0.9, 5: 0.1}
//     packets_per_group: {7: 0.25, 8: 0.5, 9: 0.25}
//     packet_size: {1194: 0.86, 73: 0.03}
//   audio: {enabled: true, period_ms: 20, size: 360}
//   stun: {period_ms: 265, jitter: 0.1, downlink_size: 81, uplink_size: 79}
//   dtls_downlink: {mean_ipt_ms: 7.44, size: {118: 1}}
//   dtls_uplink: {mean_ipt_ms: 7.10, size: {123: 1}}
//   rtcp_uplink: {mean_ipt_ms: 1.44, size: {66: 1}, delay_ms: 0.2}
//
// Distribution maps are value: weight and are normalized on load.
GeneratorParams ParseGeneratorParams(const YAML::Node& node);
GeneratorParams LoadGeneratorParams(const std::filesystem::path& path);
std::string GeneratorParamsToYaml(const GeneratorParams& params);

DiscreteDistribution ParseDistribution(const YAML::Node& node,
                                       const std::string& what);

// Preset params files in a directory, looked up by metadata or name.
class PresetLibrary {
 public:
  static PresetLibrary Load(const std::filesystem::path& dir);

  const std::vector<GeneratorParams>& presets() const { return presets_; }
  const GeneratorParams* FindByName(const std::string& name) const;
  const GeneratorParams* Find(Game game, Resolution resolution,
                              Codec codec) const;

  // Params for a game at a resolution: the exact preset when shipped,
  // otherwise the same codec's 1080p preset rescaled to `fallback_mbps`.
  GeneratorParams Resolve(Game game, Resolution resolution, Codec codec,
                          double fallback_mbps) const;

 private:
  std::vector<GeneratorParams> presets_;
};

// Directory the build was configured with, for tests and tools.
std::filesystem::path DefaultPresetDir();

}  // namespace stadia

#endif  // STADIA_PRESETS_H_
