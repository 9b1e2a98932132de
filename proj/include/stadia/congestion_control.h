#ifndef STADIA_CONGESTION_CONTROL_H_
#define STADIA_CONGESTION_CONTROL_H_

#include <deque>
#include <ostream>
#include <string>
#include <vector>

namespace stadia {

enum class BandwidthUsage { kUnderuse, kNormal, kOveruse };
std::string ToString(BandwidthUsage usage);

struct GccConfig {
  // Delay-based (receiver) controller.
  double gradient_alpha = 0.1;
  double overuse_threshold_ms = 1.0;
  double ar_increase = 1.05;
  // The increase factor applies per this much elapsed time, so the growth
  // rate does not depend on the frame rate. Zero applies it per update.
  double ar_increase_period_s = 1.0;
  double ar_receive_cap = 1.5;
  double ar_decrease = 0.85;
  double receive_window_s = 0.5;
  double ar_min_bps = 100e3;
  // Loss-based (sender) controller.
  double loss_low = 0.02;
  double loss_high = 0.1;
  double as_increase = 1.05;
  double as_decrease_gain = 0.5;
  double as_min_bps = 1e6;
  double as_max_bps = 45e6;
  // Feedback notification rule.
  double notify_interval_s = 1.0;
  double notify_change = 0.03;
};

// One video frame as seen at the receiver: time from first to last packet at
// the sender and at the receiver.
struct FrameSample {
  double send_duration_s = 0.0;
  double receive_duration_s = 0.0;
};

// Bytes received over a trailing window.
class ReceiveRateWindow {
 public:
  explicit ReceiveRateWindow(double window_s) : window_s_(window_s) {}

  void Add(double t, int bytes);
  // Average rate over the window ending at `now`. Before a full window has
  // elapsed the rate is taken over the time since the first packet.
  double RateBps(double now);

 private:
  void Evict(double now);

  double window_s_;
  double first_t_ = -1.0;
  std::deque<std::pair<double, int>> packets_;
  long long bytes_ = 0;
};

class DelayBasedEstimator {
 public:
  DelayBasedEstimator(const GccConfig& config, double initial_ar_bps);

  // One filter step at time `now`; `receive_rate_bps` is the trailing-window
  // rate. Returns the new Ar.
  double Update(const FrameSample& sample, double receive_rate_bps, double now);

  double ar_bps() const { return ar_bps_; }
  BandwidthUsage usage() const { return usage_; }
  double smoothed_gradient_ms() const { return gradient_ms_; }

 private:
  double IncreaseFactor(double elapsed_s) const;

  GccConfig config_;
  double ar_bps_;
  double gradient_ms_ = 0.0;
  double last_update_s_ = -1.0;
  BandwidthUsage usage_ = BandwidthUsage::kNormal;
};

class LossBasedController {
 public:
  explicit LossBasedController(const GccConfig& config);
  LossBasedController(const GccConfig& config, double initial_as_bps);

  // Throws std::invalid_argument unless p is in [0, 1].
  double Update(double loss_fraction);
  double as_bps() const { return as_bps_; }

 private:
  GccConfig config_;
  double as_bps_;
};

// Loss-based rate update as a pure function of the current rate.
double UpdateLossRate(double as_bps, double loss_fraction,
                      const GccConfig& config = {});

double TargetRate(double ar_bps, double as_bps);

bool ShouldNotify(double prev_ar_bps, double new_ar_bps, double elapsed_s,
                  const GccConfig& config = {});

struct FeedbackMsg {
  double ar_bps = 0.0;
  double loss_fraction = 0.0;
  double timestamp_s = 0.0;
};

struct ControllerTracePoint {
  double t = 0.0;
  double ar_bps = 0.0;
  double as_bps = 0.0;
  double target_bps = 0.0;
};

void WriteControllerTraceCsv(std::ostream& out,
                             const std::vector<ControllerTracePoint>& points);

}  // namespace stadia

#endif  // STADIA_CONGESTION_CONTROL_H_
