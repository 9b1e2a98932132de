#include "stadia/adaptation.h"

#include <algorithm>
#include <cstdio>

namespace stadia {
namespace {

Resolution StepDown(Resolution r) {
  switch (r) {
    case Resolution::k4K: return Resolution::k1080p;
    default: return Resolution::k720p;
  }
}

int Rank(Resolution r) {
  switch (r) {
    case Resolution::k720p: return 0;
    case Resolution::k1080p: return 1;
    case Resolution::k4K: return 2;
    case Resolution::kNotAvailable: break;
  }
  return -1;
}

double Track(const AdaptationConfig& c, Resolution r, double target_bps) {
  const BitrateBand& band = c.Band(r);
  return std::clamp(c.headroom * target_bps, band.min_bps, band.max_bps);
}

void SetConfig(AdaptationStep& step, double t, Resolution r, double bitrate,
               const std::string& reason) {
  AdaptationState& s = step.state;
  const EncoderConfig before = s.current;
  s.current.resolution = r;
  s.current.bitrate_bps = bitrate;
  if (before.resolution != r) {
    ++s.resolution_change_count;
    step.changes.push_back({t, before, s.current, reason});
  }
}

void EnterTransient(AdaptationStep& step, double t, const AdaptationConfig& c) {
  AdaptationState& s = step.state;
  s.phase = Phase::kTransient;
  s.phase_start_s = t;
  s.hold_s = c.hold_s;
  s.probing = false;
  s.lossy_reports = 0;
  s.upswitch_since_s = -1.0;
  SetConfig(step, t, Resolution::k720p, c.band_720p.min_bps, "loss");
}

}  // namespace

const BitrateBand& AdaptationConfig::Band(Resolution r) const {
  switch (r) {
    case Resolution::k720p: return band_720p;
    case Resolution::k4K: return band_4k;
    default: return band_1080p;
  }
}

double AdaptationConfig::EntryCapacity(Resolution r) const {
  switch (r) {
    case Resolution::k1080p: return max_capacity_720p_bps;
    case Resolution::k4K: return max_capacity_1080p_bps;
    default: return 0.0;
  }
}

std::string ToString(Phase phase) {
  switch (phase) {
    case Phase::kStarting: return "starting";
    case Phase::kSteady: return "steady";
    case Phase::kTransient: return "transient";
  }
  return "unknown";
}

Resolution StepUp(Resolution r) {
  switch (r) {
    case Resolution::k720p: return Resolution::k1080p;
    default: return Resolution::k4K;
  }
}

std::optional<EncoderConfig> InitialConfig(double capacity_bps,
                                           Resolution max_resolution,
                                           Codec codec,
                                           const AdaptationConfig& c) {
  if (capacity_bps <= c.refuse_at_or_below_bps) return std::nullopt;
  Resolution r = Resolution::k4K;
  if (capacity_bps <= c.max_capacity_720p_bps)
    r = Resolution::k720p;
  else if (capacity_bps <= c.max_capacity_1080p_bps)
    r = Resolution::k1080p;
  if (Rank(r) > Rank(max_resolution)) r = max_resolution;
  EncoderConfig cfg;
  cfg.resolution = r;
  cfg.codec = codec;
  cfg.bitrate_bps = Track(c, r, capacity_bps);
  return cfg;
}

AdaptationState StartSession(const EncoderConfig& initial,
                             Resolution max_resolution, double t,
                             const AdaptationConfig& c) {
  AdaptationState s;
  s.current = initial;
  s.max_resolution = max_resolution;
  s.phase_start_s = t;
  s.loss_free_since_s = t;
  s.hold_s = c.hold_s;
  return s;
}

AdaptationStep OnCapacityIncrease(const AdaptationState& state,
                                  double target_bps, double t,
                                  const AdaptationConfig& c) {
  AdaptationStep step{state, {}};
  AdaptationState& s = step.state;
  const Resolution cur = s.current.resolution;
  if (Rank(cur) < Rank(s.max_resolution)) {
    const Resolution next = StepUp(cur);
    if (target_bps >= c.EntryCapacity(next)) {
      if (s.upswitch_since_s < 0.0) s.upswitch_since_s = t;
      if (t - s.upswitch_since_s >= c.upswitch_sustain_s) {
        s.upswitch_since_s = -1.0;
        SetConfig(step, t, next, Track(c, next, target_bps), "capacity");
        return step;
      }
    } else {
      s.upswitch_since_s = -1.0;
    }
  }
  SetConfig(step, t, cur, Track(c, cur, target_bps), "track");
  return step;
}

AdaptationStep OnReport(const AdaptationState& state, double loss_fraction,
                        double target_bps, double t,
                        const AdaptationConfig& c) {
  AdaptationStep step{state, {}};
  AdaptationState& s = step.state;
  const bool lossy = loss_fraction > c.loss_trigger;
  if (lossy) {
    ++s.lossy_reports;
    s.loss_free_since_s = t;
  } else {
    s.lossy_reports = 0;
  }
  const Resolution cur = s.current.resolution;

  switch (s.phase) {
    case Phase::kStarting:
    case Phase::kSteady:
      if (s.lossy_reports >= c.loss_trigger_reports) {
        EnterTransient(step, t, c);
        return step;
      }
      // A single lossy report holds the config until the loss is confirmed.
      if (lossy) return step;
      if (s.phase == Phase::kStarting) {
        s.phase = Phase::kSteady;
        s.phase_start_s = t;
        SetConfig(step, t, cur, Track(c, cur, target_bps), "track");
        return step;
      }
      return OnCapacityIncrease(s, target_bps, t, c);

    case Phase::kTransient:
      if (s.probing) {
        if (lossy) {
          s.probing = false;
          s.hold_s = std::min(2.0 * s.hold_s, c.max_hold_s);
          const Resolution back = StepDown(cur);
          SetConfig(step, t, back, Track(c, back, target_bps), "probe_failed");
        } else if (t - s.probe_start_s >= c.probe_window_s) {
          s.probing = false;
          SetConfig(step, t, cur, Track(c, cur, target_bps), "track");
        }
        return step;
      }
      if (t - s.loss_free_since_s >= c.steady_after_s) {
        s.phase = Phase::kSteady;
        s.phase_start_s = t;
        s.hold_s = c.hold_s;
        SetConfig(step, t, cur, Track(c, cur, target_bps), "track");
        return step;
      }
      if (t - s.loss_free_since_s >= s.hold_s &&
          Rank(cur) < Rank(s.max_resolution)) {
        const Resolution next = StepUp(cur);
        const BitrateBand& band = c.Band(next);
        // The probe must carry at least what startup would require for the
        // next resolution, so a link that could not start there fails it.
        const double entry = c.EntryCapacity(next);
        const double rate = std::clamp(
            std::max(entry, std::min(c.headroom * target_bps, band.max_bps)),
            band.min_bps, band.max_bps);
        s.probing = true;
        s.probe_start_s = t;
        SetConfig(step, t, next, rate, "probe");
        return step;
      }
      SetConfig(step, t, cur, Track(c, cur, target_bps), "track");
      return step;
  }
  return step;
}

void WriteChangeLogCsv(std::ostream& out, const std::vector<ConfigChange>& log) {
  out << "t_s,from_resolution,from_bitrate_bps,to_resolution,to_bitrate_bps,reason\n";
  char buf[160];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof(buf), "%.3f,%s,%.0f,%s,%.0f,%s\n", e.t,
                  ToString(e.from.resolution).c_str(), e.from.bitrate_bps,
                  ToString(e.to.resolution).c_str(), e.to.bitrate_bps,
                  e.reason.c_str());
    out << buf;
  }
}

}  // namespace stadia
