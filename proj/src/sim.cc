#include "stadia/sim.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>

#include "stadia/config.h"

namespace stadia {

// ---------------------------------------------------------------------------
// Scenario parsing.

namespace {

CapacitySchedule ParseSchedule(const YAML::Node& node) {
  if (node["rate_bps"])
    return CapacitySchedule::Constant(config::RequireDouble(node, "rate_bps"));
  const YAML::Node sched = node["schedule"];
  if (!sched || !sched.IsSequence() || sched.size() == 0)
    throw ConfigError("link needs 'rate_bps' or a non-empty 'schedule'");
  std::vector<CapacityPoint> points;
  for (const auto& item : sched) {
    if (!item.IsSequence() || item.size() != 2)
      throw ConfigError("schedule entries are [time_s, rate_bps] pairs");
    try {
      points.push_back({item[0].as<double>(), item[1].as<double>()});
    } catch (const YAML::Exception&) {
      throw ConfigError("schedule entries must be numeric");
    }
  }
  try {
    return CapacitySchedule(std::move(points));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("capacity schedule: ") + e.what());
  }
}

void ParseGcc(const YAML::Node& n, GccConfig& g) {
  if (!n) return;
  g.gradient_alpha = config::GetDouble(n, "gradient_alpha", g.gradient_alpha);
  g.overuse_threshold_ms = config::GetDouble(n, "overuse_threshold_ms", g.overuse_threshold_ms);
  g.ar_increase = config::GetDouble(n, "ar_increase", g.ar_increase);
  g.ar_increase_period_s = config::GetDouble(n, "ar_increase_period_s", g.ar_increase_period_s);
  g.ar_receive_cap = config::GetDouble(n, "ar_receive_cap", g.ar_receive_cap);
  g.ar_decrease = config::GetDouble(n, "ar_decrease", g.ar_decrease);
  g.receive_window_s = config::GetDouble(n, "receive_window_s", g.receive_window_s);
  g.loss_low = config::GetDouble(n, "loss_low", g.loss_low);
  g.loss_high = config::GetDouble(n, "loss_high", g.loss_high);
  g.as_increase = config::GetDouble(n, "as_increase", g.as_increase);
  g.as_decrease_gain = config::GetDouble(n, "as_decrease_gain", g.as_decrease_gain);
  g.as_min_bps = config::GetDouble(n, "as_min_bps", g.as_min_bps);
  g.as_max_bps = config::GetDouble(n, "as_max_bps", g.as_max_bps);
  g.notify_interval_s = config::GetDouble(n, "notify_interval_s", g.notify_interval_s);
  g.notify_change = config::GetDouble(n, "notify_change", g.notify_change);
}

void ParseAdaptation(const YAML::Node& n, AdaptationConfig& a) {
  if (!n) return;
  a.headroom = config::GetDouble(n, "headroom", a.headroom);
  a.refuse_at_or_below_bps = config::GetDouble(n, "refuse_at_or_below_bps", a.refuse_at_or_below_bps);
  a.max_capacity_720p_bps = config::GetDouble(n, "max_capacity_720p_bps", a.max_capacity_720p_bps);
  a.max_capacity_1080p_bps = config::GetDouble(n, "max_capacity_1080p_bps", a.max_capacity_1080p_bps);
  a.loss_trigger = config::GetDouble(n, "loss_trigger", a.loss_trigger);
  a.loss_trigger_reports = config::GetInt(n, "loss_trigger_reports", a.loss_trigger_reports);
  a.hold_s = config::GetDouble(n, "hold_s", a.hold_s);
  a.probe_window_s = config::GetDouble(n, "probe_window_s", a.probe_window_s);
  a.max_hold_s = config::GetDouble(n, "max_hold_s", a.max_hold_s);
  a.steady_after_s = config::GetDouble(n, "steady_after_s", a.steady_after_s);
  a.upswitch_sustain_s = config::GetDouble(n, "upswitch_sustain_s", a.upswitch_sustain_s);
}

void ParseJitterBuffer(const YAML::Node& n, JitterBufferConfig& j) {
  if (!n) return;
  j.burst_gap_ms = config::GetDouble(n, "burst_gap_ms", j.burst_gap_ms);
  j.alpha = config::GetDouble(n, "alpha", j.alpha);
  j.gap_multiplier = config::GetDouble(n, "gap_multiplier", j.gap_multiplier);
  j.min_ms = config::GetDouble(n, "min_ms", j.min_ms);
  j.max_ms = config::GetDouble(n, "max_ms", j.max_ms);
}

}  // namespace

LinkConfig ParseLinkConfig(const YAML::Node& node) {
  if (!node || !node.IsMap()) throw ConfigError("link: expected a map");
  LinkConfig link;
  link.schedule = ParseSchedule(node);
  link.one_way_delay_s = config::GetDouble(node, "one_way_delay_ms", 5.0) / 1000.0;
  link.queue_cap_bytes = config::GetInt(node, "queue_cap_bytes", link.queue_cap_bytes);
  link.burst_bytes = config::GetInt(node, "burst_bytes", link.burst_bytes);
  if (link.one_way_delay_s < 0 || link.queue_cap_bytes < 0 || link.burst_bytes < 0)
    throw ConfigError("link parameters must be non-negative");
  return link;
}

void Scenario::Validate() const {
  if (!(duration_s > 0.0)) throw ConfigError("scenario duration must be > 0");
  if (!(report_interval_s > 0.0)) throw ConfigError("report_interval_s must be > 0");
  if (max_resolution == Resolution::kNotAvailable)
    throw ConfigError("max_resolution must be 720p, 1080p or 4K");
  if (codec == Codec::kNotAvailable) throw ConfigError("codec must be VP9 or H264");
  if (measured_capacity_bps && !(*measured_capacity_bps > 0.0))
    throw ConfigError("measured_capacity_bps must be > 0");
}

Scenario ParseScenario(const std::string& yaml_text,
                       const std::filesystem::path& base_dir) {
  const YAML::Node n = config::LoadString(yaml_text);
  if (!n.IsMap()) throw ConfigError("scenario: expected a map");
  Scenario s;
  s.name = config::GetString(n, "name", "scenario");
  s.game = ParseGame(config::RequireString(n, "game"));
  s.codec = ParseCodec(config::GetString(n, "codec", "VP9"));
  s.max_resolution = ParseResolution(config::GetString(n, "max_resolution", "1080p"));
  s.duration_s = config::RequireDouble(n, "duration_s");
  s.seed = static_cast<uint64_t>(config::GetInt(n, "seed", 1));
  if (!n["downlink"]) throw ConfigError("scenario: missing 'downlink'");
  s.downlink = ParseLinkConfig(n["downlink"]);
  if (n["uplink"])
    s.uplink = ParseLinkConfig(n["uplink"]);
  if (n["measured_capacity_bps"])
    s.measured_capacity_bps = config::RequireDouble(n, "measured_capacity_bps");
  s.report_interval_s = config::GetDouble(n, "report_interval_s", s.report_interval_s);
  s.feedback_size = config::GetInt(n, "feedback_size", s.feedback_size);
  ParseGcc(n["gcc"], s.gcc);
  ParseAdaptation(n["adaptation"], s.adaptation);
  ParseJitterBuffer(n["jitter_buffer"], s.jitter_buffer);
  if (n["preset_dir"]) {
    std::filesystem::path dir = config::RequireString(n, "preset_dir");
    s.preset_dir = dir.is_absolute() ? dir : base_dir / dir;
  }
  s.Validate();
  return s;
}

Scenario LoadScenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario s = ParseScenario(buf.str(), path.parent_path());
  if (s.name == "scenario") s.name = path.stem().string();
  return s;
}

// ---------------------------------------------------------------------------
// Simulation.

namespace {

enum class EventType {
  kFrameTick,
  kAudioTick,
  kDtlsDownTick,
  kDtlsUpTick,
  kStunTick,
  kReportTick,
  kSecondTick,
  kDownlinkSend,
  kDownlinkArrive,
  kUplinkArrive,
};

enum class Payload { kVideo, kAudio, kDtls, kStun, kFeedback };

struct Packet {
  Payload kind = Payload::kVideo;
  int size = 0;
  double sent = 0.0;  // entered the link
  // Video.
  int64_t frame_id = -1;
  int frame_packets = 0;
  double frame_start = 0.0;
  bool frame_end = false;
  int64_t seq = 0;
  // STUN: when the request left the client.
  double probe_origin = 0.0;
  // Feedback.
  double ar_bps = 0.0;
  double loss = 0.0;
  bool has_loss = false;
};

struct Event {
  double t;
  uint64_t order;
  EventType type;
  Packet packet;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.t != b.t) return a.t > b.t;
    return a.order > b.order;
  }
};

struct FrameProgress {
  int64_t id = -1;
  int expected = 0;
  int received = 0;
  double frame_start = 0.0;
  double first_send = 0.0, last_send = 0.0;
  double first_arrival = 0.0, last_arrival = 0.0;
};

struct SecondAccum {
  int frames_decoded = 0;
  int packets_lost = 0;
  double delivered_bytes = 0.0;
  double rtt_sum = 0.0;
  int rtt_count = 0;
  double jb_sum = 0.0;
  int jb_count = 0;
  int resolution_height = 0;
  double target_bps = 0.0;
  double encoder_bps = 0.0;
  Phase phase = Phase::kStarting;
};

constexpr double kDrainSeconds = 1.0;

class Simulator {
 public:
  Simulator(const Scenario& sc, const PresetLibrary& presets)
      : sc_(sc),
        presets_(presets),
        down_(sc.downlink),
        up_(sc.uplink),
        video_rng_(sc.seed),
        side_rng_(sc.seed ^ 0x9E3779B97F4A7C15ull),
        loss_ctl_(sc.gcc),
        window_(sc.gcc.receive_window_s) {}

  SimReport Run();

 private:
  void Push(double t, EventType type, Packet p = {}) {
    queue_.push({t, next_order_++, type, std::move(p)});
  }
  int SecondOf(double t) const { return static_cast<int>(std::floor(t)); }
  SecondAccum* Acc(double t) {
    const int s = SecondOf(t);
    if (s < 0 || s >= static_cast<int>(acc_.size())) return nullptr;
    return &acc_[static_cast<size_t>(s)];
  }
  StreamCounters& Counter(const std::string& name) { return report_.counters[name]; }
  const GeneratorParams& CurrentParams();
  void ApplyStep(const AdaptationStep& step);

  void SendDownlink(double t, Packet p, const std::string& stream);
  void SendUplink(double t, Packet p, const std::string& stream);
  void OnDownlinkArrive(double t, const Packet& p);
  void OnUplinkArrive(double t, const Packet& p);
  void FinalizeFrame(double now);
  void SendFeedback(double t, bool with_loss);

  const Scenario& sc_;
  const PresetLibrary& presets_;
  TokenBucketLink down_;
  TokenBucketLink up_;
  Rng video_rng_;
  Rng side_rng_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  uint64_t next_order_ = 0;
  SimReport report_;
  std::vector<SecondAccum> acc_;
  GeneratorParams base_params_;  // sidecar streams

  // Sender.
  AdaptationState adapt_;
  LossBasedController loss_ctl_;
  double sender_ar_ = 0.0;
  double target_ = 0.0;
  std::map<Resolution, GeneratorParams> base_by_res_;
  GeneratorParams scaled_;
  Resolution scaled_res_ = Resolution::kNotAvailable;
  double scaled_bps_ = -1.0;
  int64_t next_seq_ = 0;

  // Receiver.
  std::optional<DelayBasedEstimator> delay_;
  ReceiveRateWindow window_;
  FrameProgress frame_;
  double min_transit_ = 1e300;
  double last_video_arrival_ = -1.0;
  double gap_ewma_ms_ = -1.0;
  double jb_ms_ = 0.0;
  int64_t highest_seq_ = -1;
  int64_t reported_seq_ = -1;
  long long received_since_report_ = 0;
  double last_notify_t_ = 0.0;
  double last_notified_ar_ = 0.0;
};

const GeneratorParams& Simulator::CurrentParams() {
  const Resolution res = adapt_.current.resolution;
  const double bps = adapt_.current.bitrate_bps;
  if (res == scaled_res_ && std::abs(bps - scaled_bps_) <= 1e-3 * scaled_bps_)
    return scaled_;
  auto it = base_by_res_.find(res);
  if (it == base_by_res_.end()) {
    // Without a shipped preset the 1080p content is rescaled by band width.
    double fallback_mbps = sc_.adaptation.Band(res).max_bps / 1e6;
    if (const GeneratorParams* hd =
            presets_.Find(sc_.game, Resolution::k1080p, sc_.codec))
      fallback_mbps = hd->ExpectedVideoLoadBps() / 1e6 *
                      sc_.adaptation.Band(res).max_bps /
                      sc_.adaptation.Band(Resolution::k1080p).max_bps;
    it = base_by_res_
             .emplace(res, presets_.Resolve(sc_.game, res, sc_.codec, fallback_mbps))
             .first;
  }
  // The preset gives the packet structure; the encoder bitrate sets the load.
  scaled_ = ScaleToRate(it->second, bps / 1e6);
  scaled_res_ = res;
  scaled_bps_ = bps;
  return scaled_;
}

void Simulator::ApplyStep(const AdaptationStep& step) {
  adapt_ = step.state;
  for (const ConfigChange& c : step.changes) report_.changes.push_back(c);
}

void Simulator::SendDownlink(double t, Packet p, const std::string& stream) {
  StreamCounters& c = Counter(stream);
  ++c.generated;
  p.sent = t;
  const AdmitOutcome out = down_.Admit(t, p.size);
  if (out.dropped) {
    ++c.dropped;
    if (p.kind == Payload::kVideo)
      if (SecondAccum* a = Acc(t)) ++a->packets_lost;
    return;
  }
  Push(out.deliver, EventType::kDownlinkArrive, std::move(p));
}

void Simulator::SendUplink(double t, Packet p, const std::string& stream) {
  StreamCounters& c = Counter(stream);
  ++c.generated;
  p.sent = t;
  const AdmitOutcome out = up_.Admit(t, p.size);
  if (out.dropped) {
    ++c.dropped;
    return;
  }
  Push(out.deliver, EventType::kUplinkArrive, std::move(p));
}

void Simulator::SendFeedback(double t, bool with_loss) {
  Packet fb;
  fb.kind = Payload::kFeedback;
  fb.size = sc_.feedback_size;
  fb.ar_bps = delay_->ar_bps();
  fb.has_loss = with_loss;
  if (with_loss) {
    const long long expected = highest_seq_ - reported_seq_;
    const long long lost = std::max(0LL, expected - received_since_report_);
    fb.loss = expected > 0 ? static_cast<double>(lost) / expected : 0.0;
    fb.loss = std::clamp(fb.loss, 0.0, 1.0);
    reported_seq_ = highest_seq_;
    received_since_report_ = 0;
  }
  last_notify_t_ = t;
  last_notified_ar_ = fb.ar_bps;
  SendUplink(t, std::move(fb), "feedback");
}

void Simulator::FinalizeFrame(double now) {
  if (frame_.id < 0 || frame_.received == 0) return;
  const FrameProgress f = frame_;
  frame_ = FrameProgress{};
  if (f.received >= 2) {
    FrameSample sample{f.last_send - f.first_send, f.last_arrival - f.first_arrival};
    const double ar = delay_->Update(sample, window_.RateBps(now), now);
    if (ShouldNotify(last_notified_ar_, ar, now - last_notify_t_, sc_.gcc))
      SendFeedback(now, false);
  }
  const double deadline = f.frame_start + min_transit_ + jb_ms_ / 1000.0;
  if (SecondAccum* a = Acc(f.frame_start)) {
    if (f.received == f.expected && f.last_arrival <= deadline) ++a->frames_decoded;
    a->jb_sum += jb_ms_ / 1000.0;
    ++a->jb_count;
  }
}

void Simulator::OnDownlinkArrive(double t, const Packet& p) {
  switch (p.kind) {
    case Payload::kVideo: ++Counter("video").delivered; break;
    case Payload::kAudio: ++Counter("audio").delivered; break;
    case Payload::kDtls: ++Counter("dtls_downlink").delivered; break;
    case Payload::kStun: ++Counter("stun_response").delivered; break;
    case Payload::kFeedback: break;
  }
  if (SecondAccum* a = Acc(t)) a->delivered_bytes += p.size;

  if (p.kind == Payload::kStun) {
    if (SecondAccum* a = Acc(t)) {
      a->rtt_sum += t - p.probe_origin;
      ++a->rtt_count;
    }
    return;
  }
  if (p.kind != Payload::kVideo) return;

  window_.Add(t, p.size);
  min_transit_ = std::min(min_transit_, t - p.sent);
  highest_seq_ = std::max(highest_seq_, p.seq);
  ++received_since_report_;

  const JitterBufferConfig& jb = sc_.jitter_buffer;
  if (last_video_arrival_ >= 0.0) {
    const double gap_ms = (t - last_video_arrival_) * 1000.0;
    if (gap_ms >= jb.burst_gap_ms)
      gap_ewma_ms_ = gap_ewma_ms_ < 0.0
                         ? gap_ms
                         : (1.0 - jb.alpha) * gap_ewma_ms_ + jb.alpha * gap_ms;
  }
  last_video_arrival_ = t;
  const double frame_ms = 1000.0 / CurrentParams().frame_rate;
  jb_ms_ = std::clamp(frame_ms + jb.gap_multiplier * std::max(0.0, gap_ewma_ms_),
                      jb.min_ms, jb.max_ms);

  if (p.frame_id != frame_.id) {
    FinalizeFrame(t);
    frame_.id = p.frame_id;
    frame_.expected = p.frame_packets;
    frame_.frame_start = p.frame_start;
    frame_.first_send = p.sent;
    frame_.first_arrival = t;
  }
  ++frame_.received;
  frame_.last_send = p.sent;
  frame_.last_arrival = t;
  if (p.frame_end) FinalizeFrame(t);
}

void Simulator::OnUplinkArrive(double t, const Packet& p) {
  switch (p.kind) {
    case Payload::kStun: {
      ++Counter("stun_request").delivered;
      Packet resp = p;
      resp.size = base_params_.stun.downlink_size;
      SendDownlink(t, std::move(resp), "stun_response");
      return;
    }
    case Payload::kDtls: ++Counter("dtls_uplink").delivered; return;
    case Payload::kFeedback: break;
    default: return;
  }
  ++Counter("feedback").delivered;
  sender_ar_ = p.ar_bps;
  if (p.has_loss) loss_ctl_.Update(p.loss);
  target_ = TargetRate(sender_ar_, loss_ctl_.as_bps());
  if (p.has_loss) ApplyStep(OnReport(adapt_, p.loss, target_, t, sc_.adaptation));
  report_.controller_trace.push_back({t, sender_ar_, loss_ctl_.as_bps(), target_});
}

SimReport Simulator::Run() {
  sc_.Validate();
  report_.scenario = sc_.name;
  report_.seed = sc_.seed;
  const double capacity = sc_.measured_capacity_bps.value_or(
      sc_.downlink.schedule.RateAt(sc_.downlink.schedule.points().front().t));
  const std::optional<EncoderConfig> initial =
      InitialConfig(capacity, sc_.max_resolution, sc_.codec, sc_.adaptation);
  if (!initial) {
    report_.refused = true;
    return report_;
  }
  adapt_ = StartSession(*initial, sc_.max_resolution, 0.0, sc_.adaptation);
  base_params_ = CurrentParams();
  delay_.emplace(sc_.gcc, initial->bitrate_bps);
  sender_ar_ = initial->bitrate_bps;
  target_ = TargetRate(sender_ar_, loss_ctl_.as_bps());
  last_notified_ar_ = initial->bitrate_bps;

  const double duration = sc_.duration_s;
  acc_.assign(static_cast<size_t>(std::ceil(duration - 1e-9)), SecondAccum{});

  Push(0.0, EventType::kFrameTick);
  if (base_params_.audio.enabled) Push(0.0, EventType::kAudioTick);
  if (base_params_.dtls_downlink.enabled)
    Push(side_rng_.Exponential(base_params_.dtls_downlink.mean_ipt_ms / 1000.0),
         EventType::kDtlsDownTick);
  if (base_params_.dtls_uplink.enabled)
    Push(side_rng_.Exponential(base_params_.dtls_uplink.mean_ipt_ms / 1000.0),
         EventType::kDtlsUpTick);
  if (base_params_.stun.enabled) Push(0.0, EventType::kStunTick);
  Push(sc_.report_interval_s, EventType::kReportTick);
  for (size_t s = 1; s <= acc_.size(); ++s)
    Push(std::min(static_cast<double>(s), duration), EventType::kSecondTick);

  int64_t frame_index = 0;
  int64_t audio_index = 0;
  const double stop = duration + kDrainSeconds;
  while (!queue_.empty() && queue_.top().t <= stop) {
    Event ev = queue_.top();
    queue_.pop();
    const double t = ev.t;
    switch (ev.type) {
      case EventType::kFrameTick: {
        if (t >= duration) break;
        const GeneratorParams& params = CurrentParams();
        std::vector<ScheduledPacket> pkts =
            GenerateFrame(params, video_rng_, t, frame_index);
        for (const ScheduledPacket& sp : pkts) {
          Packet p;
          p.kind = Payload::kVideo;
          p.size = sp.size;
          p.frame_id = frame_index;
          p.frame_packets = static_cast<int>(pkts.size());
          p.frame_start = t;
          p.frame_end = sp.frame_end;
          p.seq = next_seq_++;
          Push(sp.t, EventType::kDownlinkSend, std::move(p));
        }
        ++frame_index;
        Push(static_cast<double>(frame_index) / params.frame_rate,
             EventType::kFrameTick);
        break;
      }
      case EventType::kAudioTick: {
        if (t >= duration) break;
        Packet p;
        p.kind = Payload::kAudio;
        p.size = base_params_.audio.size;
        SendDownlink(t, std::move(p), "audio");
        ++audio_index;
        Push(audio_index * base_params_.audio.period_ms / 1000.0,
             EventType::kAudioTick);
        break;
      }
      case EventType::kDtlsDownTick: {
        if (t >= duration) break;
        Packet p;
        p.kind = Payload::kDtls;
        p.size = base_params_.dtls_downlink.size_dist.Sample(side_rng_);
        SendDownlink(t, std::move(p), "dtls_downlink");
        Push(t + side_rng_.Exponential(base_params_.dtls_downlink.mean_ipt_ms / 1000.0),
             EventType::kDtlsDownTick);
        break;
      }
      case EventType::kDtlsUpTick: {
        if (t >= duration) break;
        Packet p;
        p.kind = Payload::kDtls;
        p.size = base_params_.dtls_uplink.size_dist.Sample(side_rng_);
        SendUplink(t, std::move(p), "dtls_uplink");
        Push(t + side_rng_.Exponential(base_params_.dtls_uplink.mean_ipt_ms / 1000.0),
             EventType::kDtlsUpTick);
        break;
      }
      case EventType::kStunTick: {
        if (t >= duration) break;
        const StunParams& st = base_params_.stun;
        if (t > 0.0) {
          Packet p;
          p.kind = Payload::kStun;
          p.size = st.uplink_size;
          p.probe_origin = t;
          SendUplink(t, std::move(p), "stun_request");
        }
        Push(t + st.period_ms / 1000.0 *
                     side_rng_.Uniform(1.0 - st.jitter, 1.0 + st.jitter),
             EventType::kStunTick);
        break;
      }
      case EventType::kReportTick:
        if (t > duration) break;
        SendFeedback(t, true);
        Push(t + sc_.report_interval_s, EventType::kReportTick);
        break;
      case EventType::kSecondTick: {
        SecondAccum& a = acc_[static_cast<size_t>(std::ceil(t - 1e-9)) - 1];
        a.resolution_height = FrameHeight(adapt_.current.resolution);
        a.target_bps = target_;
        a.encoder_bps = adapt_.current.bitrate_bps;
        a.phase = adapt_.phase;
        break;
      }
      case EventType::kDownlinkSend: {
        const std::string stream =
            ev.packet.kind == Payload::kVideo ? "video" : "stun_response";
        SendDownlink(t, std::move(ev.packet), stream);
        break;
      }
      case EventType::kDownlinkArrive:
        OnDownlinkArrive(t, ev.packet);
        break;
      case EventType::kUplinkArrive:
        OnUplinkArrive(t, ev.packet);
        break;
    }
  }
  FinalizeFrame(stop);

  while (!queue_.empty()) {
    const Event& ev = queue_.top();
    if (ev.type == EventType::kDownlinkArrive || ev.type == EventType::kUplinkArrive) {
      std::string name;
      switch (ev.packet.kind) {
        case Payload::kVideo: name = "video"; break;
        case Payload::kAudio: name = "audio"; break;
        case Payload::kDtls:
          name = ev.type == EventType::kDownlinkArrive ? "dtls_downlink" : "dtls_uplink";
          break;
        case Payload::kStun:
          name = ev.type == EventType::kDownlinkArrive ? "stun_response" : "stun_request";
          break;
        case Payload::kFeedback: name = "feedback"; break;
      }
      ++Counter(name).in_flight;
    }
    queue_.pop();
  }

  for (size_t s = 0; s < acc_.size(); ++s) {
    const SecondAccum& a = acc_[s];
    SecondRecord r;
    r.second = static_cast<int>(s);
    r.resolution_height = a.resolution_height;
    r.frames_decoded = a.frames_decoded;
    if (a.rtt_count > 0) r.rtt_s = a.rtt_sum / a.rtt_count;
    r.packets_lost = a.packets_lost;
    r.jitter_buffer_s = a.jb_count > 0 ? a.jb_sum / a.jb_count : jb_ms_ / 1000.0;
    const double len = std::min(1.0, duration - static_cast<double>(s));
    r.delivered_mbps = a.delivered_bytes * 8.0 / len / 1e6;
    r.target_bps = a.target_bps;
    r.encoder_bps = a.encoder_bps;
    r.phase = a.phase;
    report_.records.push_back(r);
  }
  return report_;
}

}  // namespace

SimReport RunScenario(const Scenario& scenario, const PresetLibrary& presets) {
  Simulator sim(scenario, presets);
  return sim.Run();
}

SimReport RunScenario(const Scenario& scenario) {
  const PresetLibrary presets = PresetLibrary::Load(
      scenario.preset_dir.empty() ? DefaultPresetDir() : scenario.preset_dir);
  return RunScenario(scenario, presets);
}

}  // namespace stadia
