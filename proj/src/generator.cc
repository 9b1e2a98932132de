#include "stadia/generator.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace stadia {
namespace {

void CheckSizes(const DiscreteDistribution& d, const std::string& what) {
  if (d.empty()) throw std::invalid_argument(what + " distribution is empty");
  if (d.Min() < kMinPayloadBytes || d.Max() > kMaxPayloadBytes)
    throw std::invalid_argument(what + " sizes outside [1, 65507]");
}

// Factor x with d.Scaled(x, min_value).Mean() == mean. The scaled mean is
// continuous and non-decreasing in x.
DiscreteDistribution ScaleToMean(const DiscreteDistribution& d, double mean,
                                 int min_value) {
  if (std::abs(d.Mean() - mean) <= 1e-12 * mean) return d;
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * mean / std::max(1.0, d.Mean()));
  while (d.Scaled(hi, min_value).Mean() < mean) hi *= 2.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    if (d.Scaled(mid, min_value).Mean() < mean)
      lo = mid;
    else
      hi = mid;
  }
  return d.Scaled(hi, min_value);
}

double PoissonLoadBps(const PoissonStream& s) {
  if (!s.enabled) return 0.0;
  return s.size_dist.Mean() * 8.0 / (s.mean_ipt_ms / 1000.0);
}

Protocol ProtocolOf(StreamKind kind) {
  switch (kind) {
    case StreamKind::kVideo:
    case StreamKind::kAudio: return Protocol::kRtp;
    case StreamKind::kStun: return Protocol::kStun;
    case StreamKind::kDtls: return Protocol::kDtls;
    case StreamKind::kRtcp: return Protocol::kRtcp;
  }
  return Protocol::kMixed;
}

}  // namespace

std::string ToString(StreamKind kind) {
  switch (kind) {
    case StreamKind::kVideo: return "video";
    case StreamKind::kAudio: return "audio";
    case StreamKind::kStun: return "stun";
    case StreamKind::kDtls: return "dtls";
    case StreamKind::kRtcp: return "rtcp";
  }
  return "unknown";
}

void GeneratorParams::Validate() const {
  if (!(frame_rate > 0.0)) throw std::invalid_argument("frame_rate must be > 0");
  if (group_count_dist.empty() || group_size_dist.empty())
    throw std::invalid_argument("group distributions must be non-empty");
  if (group_count_dist.Min() < 0)
    throw std::invalid_argument("groups per frame must be >= 0");
  if (group_size_dist.Min() < 1)
    throw std::invalid_argument("packets per group must be >= 1");
  CheckSizes(video_size_dist, "video size");
  if (!(group_spacing_ms > 0.0) || !(intra_group_spacing_ms >= 0.0))
    throw std::invalid_argument("group spacings must be positive");
  const double period_ms = 1000.0 / frame_rate;
  if (group_spacing_ms * std::max(0, group_count_dist.Max() - 1) >= period_ms)
    throw std::invalid_argument("groups do not fit inside one frame period");
  if (audio.enabled) {
    if (!(audio.period_ms > 0.0)) throw std::invalid_argument("audio period must be > 0");
    if (audio.size < kMinPayloadBytes || audio.size > kMaxPayloadBytes)
      throw std::invalid_argument("audio size outside [1, 65507]");
  }
  if (stun.enabled) {
    if (!(stun.period_ms > 0.0)) throw std::invalid_argument("stun period must be > 0");
    if (stun.jitter < 0.0 || stun.jitter >= 1.0)
      throw std::invalid_argument("stun jitter must be in [0, 1)");
    for (int s : {stun.downlink_size, stun.uplink_size})
      if (s < kMinPayloadBytes || s > kMaxPayloadBytes)
        throw std::invalid_argument("stun size outside [1, 65507]");
  }
  for (const PoissonStream* s : {&dtls_downlink, &dtls_uplink, &rtcp_uplink}) {
    if (!s->enabled) continue;
    if (!(s->mean_ipt_ms > 0.0))
      throw std::invalid_argument("stream mean_ipt_ms must be > 0");
    CheckSizes(s->size_dist, "sidecar size");
  }
  if (rtcp_delay_ms < 0.0) throw std::invalid_argument("rtcp_delay_ms must be >= 0");
}

double GeneratorParams::ExpectedVideoLoadBps() const {
  return frame_rate * group_count_dist.Mean() * group_size_dist.Mean() *
         video_size_dist.Mean() * 8.0;
}

double GeneratorParams::ExpectedAudioLoadBps() const {
  return audio.enabled ? audio.size * 8.0 / (audio.period_ms / 1000.0) : 0.0;
}

double GeneratorParams::ExpectedSidecarDownlinkBps() const {
  double bps = ExpectedAudioLoadBps() + PoissonLoadBps(dtls_downlink);
  if (stun.enabled) bps += stun.downlink_size * 8.0 / (stun.period_ms / 1000.0);
  return bps;
}

double GeneratorParams::RtcpPacketsPerGroup() const {
  if (!rtcp_uplink.enabled) return 0.0;
  const double groups_per_s = frame_rate * group_count_dist.Mean();
  if (groups_per_s <= 0.0) return 0.0;
  return (1000.0 / rtcp_uplink.mean_ipt_ms) / groups_per_s;
}

std::vector<ScheduledPacket> GenerateFrame(const GeneratorParams& params,
                                           Rng& rng, double frame_start,
                                           int64_t frame_id) {
  std::vector<ScheduledPacket> out;
  const int groups = params.group_count_dist.Sample(rng);
  for (int g = 0; g < groups; ++g) {
    const double group_start = frame_start + g * params.group_spacing_ms / 1000.0;
    const int k = params.group_size_dist.Sample(rng);
    for (int i = 0; i < k; ++i) {
      ScheduledPacket p;
      p.t = group_start + i * params.intra_group_spacing_ms / 1000.0;
      p.size = params.video_size_dist.Sample(rng);
      p.frame_id = frame_id;
      p.group_end = i + 1 == k;
      out.push_back(p);
    }
  }
  if (!out.empty()) out.back().frame_end = true;
  return out;
}

Session GenerateSession(const GeneratorParams& params, double duration_s) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
  params.Validate();
  Rng rng(params.seed);
  Session session;
  session.params = params;
  session.duration_s = duration_s;
  auto& pkts = session.packets;

  const double rtcp_per_group = params.RtcpPacketsPerGroup();
  const int rtcp_base = static_cast<int>(std::floor(rtcp_per_group));
  const double rtcp_extra = rtcp_per_group - rtcp_base;
  for (int64_t k = 0;; ++k) {
    const double start = static_cast<double>(k) / params.frame_rate;
    if (start >= duration_s - 1e-12) break;
    std::vector<ScheduledPacket> frame = GenerateFrame(params, rng, start, k);
    for (size_t i = 0; i < frame.size(); ++i) {
      pkts.push_back(frame[i]);
      if (!frame[i].group_end || !params.rtcp_uplink.enabled) continue;
      const int n = rtcp_base + (rng.Bernoulli(rtcp_extra) ? 1 : 0);
      for (int j = 0; j < n; ++j) {
        ScheduledPacket fb;
        fb.t = frame[i].t + (params.rtcp_delay_ms +
                             j * params.intra_group_spacing_ms) / 1000.0;
        fb.size = params.rtcp_uplink.size_dist.Sample(rng);
        fb.stream = StreamKind::kRtcp;
        fb.direction = Direction::kUplink;
        pkts.push_back(fb);
      }
    }
  }

  if (params.audio.enabled) {
    for (int64_t k = 0;; ++k) {
      const double t = k * params.audio.period_ms / 1000.0;
      if (t >= duration_s) break;
      pkts.push_back({t, params.audio.size, StreamKind::kAudio,
                      Direction::kDownlink, -1, false, false});
    }
  }
  if (params.stun.enabled) {
    // Request (uplink) and response (downlink) are logged together.
    double t = 0.0;
    while (true) {
      t += params.stun.period_ms / 1000.0 *
           rng.Uniform(1.0 - params.stun.jitter, 1.0 + params.stun.jitter);
      if (t >= duration_s) break;
      pkts.push_back({t, params.stun.uplink_size, StreamKind::kStun,
                      Direction::kUplink, -1, false, false});
      pkts.push_back({t, params.stun.downlink_size, StreamKind::kStun,
                      Direction::kDownlink, -1, false, false});
    }
  }
  for (auto [stream, dir] : {std::pair{&params.dtls_downlink, Direction::kDownlink},
                             std::pair{&params.dtls_uplink, Direction::kUplink}}) {
    if (!stream->enabled) continue;
    double t = 0.0;
    while (true) {
      t += rng.Exponential(stream->mean_ipt_ms / 1000.0);
      if (t >= duration_s) break;
      pkts.push_back({t, stream->size_dist.Sample(rng), StreamKind::kDtls, dir,
                      -1, false, false});
    }
  }
  std::stable_sort(pkts.begin(), pkts.end(),
                   [](const ScheduledPacket& a, const ScheduledPacket& b) {
                     return a.t < b.t;
                   });
  return session;
}

Trace SessionTrace(const Session& session, Direction direction,
                   const std::vector<StreamKind>& streams,
                   Micros epoch_base_us) {
  Trace trace;
  trace.meta.game = session.params.game;
  trace.meta.codec = session.params.codec;
  trace.meta.resolution = session.params.resolution;
  trace.meta.direction = direction;
  std::set<Protocol> protocols;
  for (StreamKind s : streams) protocols.insert(ProtocolOf(s));
  trace.meta.protocol =
      protocols.size() == 1 ? *protocols.begin() : Protocol::kMixed;

  const std::set<StreamKind> wanted(streams.begin(), streams.end());
  Micros prev = 0;
  for (const ScheduledPacket& p : session.packets) {
    if (p.direction != direction || !wanted.count(p.stream)) continue;
    PacketRecord r;
    r.t_epoch_us = epoch_base_us + SecondsToMicros(p.t);
    r.delta_us = trace.records.empty() ? 0 : r.t_epoch_us - prev;
    r.payload_len = p.size;
    prev = r.t_epoch_us;
    trace.records.push_back(r);
  }
  return trace;
}

Trace GenerateSessionTrace(const GeneratorParams& params, double duration_s) {
  return SessionTrace(GenerateSession(params, duration_s), Direction::kDownlink,
                      {StreamKind::kVideo, StreamKind::kAudio});
}

GeneratorParams ScaleToRate(const GeneratorParams& params, double target_mbps,
                            const ScaleOptions& options) {
  const double floor_mbps = params.ExpectedSidecarDownlinkBps() / 1e6;
  if (!(target_mbps > floor_mbps))
    throw ScaleError("target " + std::to_string(target_mbps) +
                     " Mbit/s does not exceed the sidecar floor of " +
                     std::to_string(floor_mbps) + " Mbit/s");
  const double current = params.ExpectedVideoLoadBps();
  if (current <= 0.0) throw ScaleError("params carry no video load to scale");
  const double target = target_mbps * 1e6;
  const double f = target / current;
  GeneratorParams out = params;
  if (std::abs(f - 1.0) < 1e-9) return out;

  const double per_packet = params.frame_rate * params.group_count_dist.Mean() * 8.0;
  const double size_factor = f < 1.0 ? std::pow(f, options.size_elasticity) : 1.0;
  out.video_size_dist = ScaleToMean(
      params.video_size_dist, params.video_size_dist.Mean() * size_factor, 1);
  double k_mean = target / (per_packet * out.video_size_dist.Mean());
  if (k_mean < 1.0) {
    out.group_size_dist = DiscreteDistribution::PointMass(1);
    const double size_mean = target / per_packet;
    if (size_mean < 1.0) throw ScaleError("target below one byte per group");
    out.video_size_dist = ScaleToMean(params.video_size_dist, size_mean, 1);
  } else {
    out.group_size_dist = ScaleToMean(params.group_size_dist, k_mean, 1);
  }
  if (out.video_size_dist.Max() > kMaxPayloadBytes)
    throw ScaleError("scaled sizes exceed the UDP payload limit");
  return out;
}

}  // namespace stadia
