#ifndef STADIA_LINK_EMULATOR_H_
#define STADIA_LINK_EMULATOR_H_

#include <deque>
#include <optional>
#include <ostream>
#include <vector>

namespace stadia {

struct CapacityPoint {
  double t = 0.0;  // seconds
  double rate_bps = 0.0;
};

// Piecewise-constant link rate.
class CapacitySchedule {
 public:
  CapacitySchedule() : CapacitySchedule({{0.0, 100e6}}) {}
  // Throws std::invalid_argument unless times strictly increase and rates
  // are positive.
  explicit CapacitySchedule(std::vector<CapacityPoint> points);
  static CapacitySchedule Constant(double rate_bps) {
    return CapacitySchedule({{0.0, rate_bps}});
  }

  const std::vector<CapacityPoint>& points() const { return points_; }
  // Throws std::out_of_range before the first point.
  double RateAt(double t) const;
  // Bits the link can carry over [t0, t1].
  double BitsBetween(double t0, double t1) const;
  // Earliest t >= t0 with BitsBetween(t0, t) == bits.
  double TimeToCarry(double t0, double bits) const;

 private:
  size_t IndexAt(double t) const;
  std::vector<CapacityPoint> points_;
};

struct LinkConfig {
  CapacitySchedule schedule;
  double one_way_delay_s = 0.005;
  int queue_cap_bytes = 64 * 1024;
  int burst_bytes = 10 * 1024;
};

struct AdmitOutcome {
  bool dropped = false;
  double depart = 0.0;   // leaves the bucket
  double deliver = 0.0;  // depart + one-way delay
};

struct LinkLogEntry {
  double arrival = 0.0;
  int size = 0;
  bool dropped = false;
  double depart = 0.0;
};

// Token bucket in front of a byte-capped FIFO. A packet that can leave on
// arrival never occupies the queue; one that has to wait is dropped when
// the bytes already waiting plus its own exceed the cap. A cap of zero
// makes the link a pure policer.
class TokenBucketLink {
 public:
  explicit TokenBucketLink(LinkConfig config);

  // Arrivals must be non-decreasing in time (std::invalid_argument).
  AdmitOutcome Admit(double t, int size);

  const LinkConfig& config() const { return config_; }
  // Bytes admitted and still waiting at time `now`.
  long long QueuedBytes(double now);
  // Bucket fill at `now`, assuming no further arrivals.
  double TokensAt(double now) const;

  long long delivered_packets() const { return delivered_packets_; }
  long long dropped_packets() const { return dropped_packets_; }
  long long delivered_bytes() const { return delivered_bytes_; }
  long long dropped_bytes() const { return dropped_bytes_; }

  void set_logging(bool on) { logging_ = on; }
  const std::vector<LinkLogEntry>& log() const { return log_; }

 private:
  double Refill(double tokens, double from, double to, double cap) const;

  LinkConfig config_;
  double last_arrival_ = 0.0;
  // Bucket state right after the latest scheduled departure.
  double state_t_ = 0.0;
  double state_tokens_ = 0.0;
  std::deque<std::pair<double, int>> waiting_;  // (depart, size)
  long long waiting_bytes_ = 0;
  long long delivered_packets_ = 0;
  long long dropped_packets_ = 0;
  long long delivered_bytes_ = 0;
  long long dropped_bytes_ = 0;
  bool logging_ = false;
  std::vector<LinkLogEntry> log_;
};

// Sends a probe up, and its response down as soon as the probe arrives.
// Returns the round-trip time, or nothing if either leg was dropped. Both
// admissions must respect each link's arrival ordering.
std::optional<double> RttProbe(TokenBucketLink& uplink, TokenBucketLink& downlink,
                               double t, int size = 81);

void WriteLinkLogCsv(std::ostream& out, const std::vector<LinkLogEntry>& log);

}  // namespace stadia

#endif  // STADIA_LINK_EMULATOR_H_
