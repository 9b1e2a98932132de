#ifndef STADIA_FIT_H_
#define STADIA_FIT_H_

#include <stdexcept>

#include "stadia/generator.h"
#include "stadia/trace.h"

namespace stadia {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitOptions {
  double min_period_ms = 10.0;
  double max_period_ms = 40.0;
  // Gap that opens a new packet group inside a frame.
  double group_gap_ms = 1.0;
  // Minimum folded-phase concentration (0 = uniform, 1 = one phase bin) of
  // the whole trace at the detected period.
  double min_concentration = 0.1;
  int phase_bins = 64;
  // Audio is recognized by size and by a partner packet one period away.
  int audio_min_size = 300;
  int audio_max_size = 420;
  double audio_period_ms = 20.0;
  double audio_tolerance_ms = 0.5;
  // Frame rates within this distance of an integer are snapped to it.
  double frame_rate_snap = 0.05;
  // Sidecar streams (STUN, DTLS, RTCP) and metadata are copied from here;
  // a video trace carries no information about them.
  GeneratorParams base;
};

struct FitResult {
  GeneratorParams params;
  double period_ms = 0.0;  // before snapping
  double concentration = 0.0;
  size_t frames = 0;
  size_t groups = 0;
  size_t video_packets = 0;
  size_t audio_packets = 0;
};

// Fits the video model (and audio, when `audio_assumed`) from a downlink RTP
// trace. Throws FitError when the trace is shorter than 10 s or carries no
// periodic frame structure.
FitResult FitGeneratorParams(const Trace& video_trace, bool audio_assumed,
                             const FitOptions& options = {});

// Concentration of packet timestamps folded at `period_us`: one minus the
// normalized entropy of the phase histogram.
double PhaseConcentration(const std::vector<Micros>& times, double period_us,
                          int bins);

}  // namespace stadia

#endif  // STADIA_FIT_H_
