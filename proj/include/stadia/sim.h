#ifndef STADIA_SIM_H_
#define STADIA_SIM_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stadia/adaptation.h"
#include "stadia/congestion_control.h"
#include "stadia/generator.h"
#include "stadia/link_emulator.h"
#include "stadia/presets.h"

namespace stadia {

struct JitterBufferConfig {
  // Arrival gaps at least this long are burst gaps (between groups and
  // frames); shorter gaps are back-to-back packets inside a group.
  double burst_gap_ms = 1.0;
  double alpha = 0.05;
  double gap_multiplier = 3.0;
  double min_ms = 20.0;
  double max_ms = 120.0;
};

struct Scenario {
  std::string name;
  Game game = Game::kTombRaider;
  Codec codec = Codec::kVp9;
  Resolution max_resolution = Resolution::k1080p;
  LinkConfig downlink;
  LinkConfig uplink;
  double duration_s = 60.0;
  uint64_t seed = 1;
  // Capacity the startup policy sees; defaults to the downlink rate at t=0.
  std::optional<double> measured_capacity_bps;
  double report_interval_s = 1.0;
  int feedback_size = 66;
  GccConfig gcc;
  AdaptationConfig adaptation;
  JitterBufferConfig jitter_buffer;
  std::filesystem::path preset_dir;  // empty: DefaultPresetDir()

  // Throws ConfigError.
  void Validate() const;
};

// Scenario file grammar (YAML):
//
//   name: drop_30
//   game: TR
//   codec: VP9
//   max_resolution: 1080p
//   duration_s: 500
//   seed: 7
//   downlink:
//     schedule: [[0, 100e6], [120, 30e6]]   # (time s, rate bit/s)
//     one_way_delay_ms: 5
//     queue_cap_bytes: 65536
//     burst_bytes: 10240
//   uplink: {rate_bps: 100e6, one_way_delay_ms: 5}
//   measured_capacity_bps: 100e6           # optional
//   report_interval_s: 1.0                 # optional
//   gcc: {...}  adaptation: {...}  jitter_buffer: {...}   # optional overrides
//
// Relative preset_dir entries resolve against the scenario file.
Scenario LoadScenario(const std::filesystem::path& path);
Scenario ParseScenario(const std::string& yaml_text,
                       const std::filesystem::path& base_dir = {});
LinkConfig ParseLinkConfig(const YAML::Node& node);

struct SecondRecord {
  int second = 0;
  int resolution_height = 0;       // Y4
  int frames_decoded = 0;          // Y5
  std::optional<double> rtt_s;     // Y6
  int packets_lost = 0;            // Y7
  double jitter_buffer_s = 0.0;    // Y8
  double delivered_mbps = 0.0;
  double target_bps = 0.0;
  double encoder_bps = 0.0;
  Phase phase = Phase::kStarting;
};

struct StreamCounters {
  long long generated = 0;
  long long delivered = 0;
  long long dropped = 0;
  long long in_flight = 0;
};

struct SimReport {
  std::string scenario;
  uint64_t seed = 0;
  bool refused = false;
  std::vector<SecondRecord> records;
  std::vector<ConfigChange> changes;
  std::map<std::string, StreamCounters> counters;  // keyed by stream name
  std::vector<ControllerTracePoint> controller_trace;
};

SimReport RunScenario(const Scenario& scenario);

// Runs with an explicit preset library (tests and tools reuse one load).
SimReport RunScenario(const Scenario& scenario, const PresetLibrary& presets);

}  // namespace stadia

#endif  // STADIA_SIM_H_
