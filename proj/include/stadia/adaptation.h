#ifndef STADIA_ADAPTATION_H_
#define STADIA_ADAPTATION_H_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stadia/types.h"

namespace stadia {

struct BitrateBand {
  double min_bps;
  double max_bps;
};

struct AdaptationConfig {
  BitrateBand band_720p{4e6, 14e6};
  BitrateBand band_1080p{10e6, 30e6};
  BitrateBand band_4k{25e6, 45e6};
  double headroom = 0.85;
  // Startup policy on measured capacity.
  double refuse_at_or_below_bps = 10e6;
  double max_capacity_720p_bps = 17.5e6;
  double max_capacity_1080p_bps = 30e6;
  // Transient entry.
  double loss_trigger = 0.02;
  int loss_trigger_reports = 2;
  // Transient probing.
  double hold_s = 10.0;
  double probe_window_s = 15.0;
  double max_hold_s = 60.0;
  double steady_after_s = 60.0;
  // Steady upswitch: the target must stay at or above the capacity the
  // startup policy requires for the next resolution for this long.
  double upswitch_sustain_s = 5.0;

  const BitrateBand& Band(Resolution r) const;
  // Capacity above which startup would choose `r`; 0 for 720p.
  double EntryCapacity(Resolution r) const;
};

struct EncoderConfig {
  Resolution resolution = Resolution::k1080p;
  double bitrate_bps = 0.0;
  Codec codec = Codec::kVp9;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

enum class Phase { kStarting, kSteady, kTransient };
std::string ToString(Phase phase);

struct AdaptationState {
  Phase phase = Phase::kStarting;
  EncoderConfig current;
  Resolution max_resolution = Resolution::k1080p;
  int resolution_change_count = 0;
  double phase_start_s = 0.0;
  double loss_free_since_s = 0.0;
  int lossy_reports = 0;
  // Transient bookkeeping.
  double hold_s = 0.0;
  bool probing = false;
  double probe_start_s = 0.0;
  // Steady upswitch bookkeeping, negative when the target is below entry.
  double upswitch_since_s = -1.0;

  double time_in_phase(double now) const { return now - phase_start_s; }
};

struct ConfigChange {
  double t = 0.0;
  EncoderConfig from;
  EncoderConfig to;
  std::string reason;
};

struct AdaptationStep {
  AdaptationState state;
  std::vector<ConfigChange> changes;  // resolution changes only
};

// Startup decision. Returns nothing when the session is refused.
std::optional<EncoderConfig> InitialConfig(double measured_capacity_bps,
                                           Resolution max_resolution,
                                           Codec codec,
                                           const AdaptationConfig& config = {});

AdaptationState StartSession(const EncoderConfig& initial,
                             Resolution max_resolution, double t,
                             const AdaptationConfig& config = {});

// One loss/rate report; the encoder config only changes here. A lossy
// report short of the trigger count leaves the config as it is. In steady
// phase a clean report runs the capacity increase rule.
AdaptationStep OnReport(const AdaptationState& state, double loss_fraction,
                        double target_bps, double t,
                        const AdaptationConfig& config = {});

// Steady-phase reaction to a higher target: step up one resolution after
// the sustain period, otherwise track the target inside the band.
AdaptationStep OnCapacityIncrease(const AdaptationState& state,
                                  double target_bps, double t,
                                  const AdaptationConfig& config = {});

Resolution StepUp(Resolution r);

void WriteChangeLogCsv(std::ostream& out, const std::vector<ConfigChange>& log);

}  // namespace stadia

#endif  // STADIA_ADAPTATION_H_
