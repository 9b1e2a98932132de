#ifndef STADIA_GENERATOR_H_
#define STADIA_GENERATOR_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stadia/distribution.h"
#include "stadia/trace.h"
#include "stadia/types.h"

namespace stadia {

enum class StreamKind { kVideo, kAudio, kStun, kDtls, kRtcp };
std::string ToString(StreamKind kind);

struct AudioParams {
  bool enabled = true;
  double period_ms = 20.0;
  int size = 360;
};

struct StunParams {
  bool enabled = true;
  double period_ms = 265.0;
  double jitter = 0.1;  // each period is drawn uniformly within +-jitter
  int downlink_size = 81;
  int uplink_size = 79;
};

// Memoryless packet stream: exponential inter-packet times.
struct PoissonStream {
  bool enabled = true;
  double mean_ipt_ms = 10.0;
  DiscreteDistribution size_dist = DiscreteDistribution::PointMass(120);
};

struct GeneratorParams {
  std::string name;
  Game game = Game::kTombRaider;
  Codec codec = Codec::kVp9;
  Resolution resolution = Resolution::k1080p;

  double frame_rate = 60.0;
  DiscreteDistribution group_count_dist = DiscreteDistribution::PointMass(1);
  DiscreteDistribution group_size_dist = DiscreteDistribution::PointMass(1);
  DiscreteDistribution video_size_dist = DiscreteDistribution::PointMass(1194);
  double group_spacing_ms = 2.0;
  double intra_group_spacing_ms = 0.1;

  AudioParams audio;
  StunParams stun;
  PoissonStream dtls_downlink;
  PoissonStream dtls_uplink;
  // Feedback is emitted right after each video group; mean_ipt_ms sets how
  // many packets that is on average.
  PoissonStream rtcp_uplink{true, 2.0, DiscreteDistribution::PointMass(66)};
  double rtcp_delay_ms = 0.2;

  uint64_t seed = 1;

  // Throws std::invalid_argument naming the first violated invariant.
  void Validate() const;

  double FramePeriodSeconds() const { return 1.0 / frame_rate; }
  double ExpectedVideoLoadBps() const;
  double ExpectedAudioLoadBps() const;
  // Audio + STUN + DTLS in the downlink.
  double ExpectedSidecarDownlinkBps() const;
  double RtcpPacketsPerGroup() const;
};

struct ScheduledPacket {
  double t = 0.0;  // seconds from session start
  int size = 0;
  StreamKind stream = StreamKind::kVideo;
  Direction direction = Direction::kDownlink;
  int64_t frame_id = -1;  // video only
  bool group_end = false;  // last packet of its group
  bool frame_end = false;  // last packet of its frame
};

// Video packets of one frame: G groups at group_spacing, each with K packets
// at intra_group_spacing.
std::vector<ScheduledPacket> GenerateFrame(const GeneratorParams& params,
                                           Rng& rng, double frame_start,
                                           int64_t frame_id = 0);

struct Session {
  GeneratorParams params;
  double duration_s = 0.0;
  std::vector<ScheduledPacket> packets;  // time ordered, stable
};

// All streams in both directions. Frames start at k / frame_rate for every
// k with k / frame_rate < duration. Deterministic in params.seed.
Session GenerateSession(const GeneratorParams& params, double duration_s);

// Packets of the selected streams and direction as a dataset trace. Protocol
// metadata is derived from the stream set.
Trace SessionTrace(const Session& session, Direction direction,
                   const std::vector<StreamKind>& streams,
                   Micros epoch_base_us = 0);

// Downlink RTP (video and audio), the stream the analyzer tables describe.
Trace GenerateSessionTrace(const GeneratorParams& params, double duration_s);

struct ScaleOptions {
  // Share of a rate reduction taken by packet sizes, as an exponent: sizes
  // scale by f^size_elasticity and packets per group by the rest.
  double size_elasticity = 0.14;
};

class ScaleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Rescales the video model so its expected load equals target_mbps. Rate
// increases add packets only; decreases also shrink sizes. Sidecar streams
// are untouched. Throws ScaleError if the target does not exceed the sidecar
// floor.
GeneratorParams ScaleToRate(const GeneratorParams& params, double target_mbps,
                            const ScaleOptions& options = {});

}  // namespace stadia

#endif  // STADIA_GENERATOR_H_
