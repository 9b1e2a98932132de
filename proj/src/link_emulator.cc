#include "stadia/link_emulator.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace stadia {

CapacitySchedule::CapacitySchedule(std::vector<CapacityPoint> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("empty capacity schedule");
  for (size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].rate_bps > 0.0))
      throw std::invalid_argument("capacity rates must be > 0");
    if (i > 0 && !(points_[i].t > points_[i - 1].t))
      throw std::invalid_argument("capacity schedule times must increase");
  }
}

size_t CapacitySchedule::IndexAt(double t) const {
  if (t < points_.front().t)
    throw std::out_of_range("time before the first capacity point");
  auto it = std::upper_bound(
      points_.begin(), points_.end(), t,
      [](double v, const CapacityPoint& p) { return v < p.t; });
  return static_cast<size_t>(it - points_.begin()) - 1;
}

double CapacitySchedule::RateAt(double t) const { return points_[IndexAt(t)].rate_bps; }

double CapacitySchedule::BitsBetween(double t0, double t1) const {
  if (t1 <= t0) return 0.0;
  double bits = 0.0;
  for (size_t i = IndexAt(t0); i < points_.size() && t0 < t1; ++i) {
    const double seg_end =
        i + 1 < points_.size() ? std::min(points_[i + 1].t, t1) : t1;
    bits += points_[i].rate_bps * (seg_end - t0);
    t0 = seg_end;
  }
  return bits;
}

double CapacitySchedule::TimeToCarry(double t0, double bits) const {
  if (bits <= 0.0) return t0;
  for (size_t i = IndexAt(t0);; ++i) {
    const double rate = points_[i].rate_bps;
    if (i + 1 == points_.size()) return t0 + bits / rate;
    const double seg_bits = rate * (points_[i + 1].t - t0);
    if (seg_bits >= bits) return t0 + bits / rate;
    bits -= seg_bits;
    t0 = points_[i + 1].t;
  }
}

TokenBucketLink::TokenBucketLink(LinkConfig config)
    : config_(std::move(config)) {
  if (config_.queue_cap_bytes < 0 || config_.burst_bytes < 0 ||
      config_.one_way_delay_s < 0.0)
    throw std::invalid_argument("link parameters must be non-negative");
  state_t_ = config_.schedule.points().front().t;
  last_arrival_ = state_t_;
  state_tokens_ = config_.burst_bytes;
}

double TokenBucketLink::Refill(double tokens, double from, double to,
                               double cap) const {
  if (tokens >= cap || to <= from) return std::min(tokens, std::max(cap, tokens));
  return std::min(cap, tokens + config_.schedule.BitsBetween(from, to) / 8.0);
}

double TokenBucketLink::TokensAt(double now) const {
  return Refill(state_tokens_, state_t_, std::max(now, state_t_),
                config_.burst_bytes);
}

long long TokenBucketLink::QueuedBytes(double now) {
  while (!waiting_.empty() && waiting_.front().first <= now) {
    waiting_bytes_ -= waiting_.front().second;
    waiting_.pop_front();
  }
  return waiting_bytes_;
}

AdmitOutcome TokenBucketLink::Admit(double t, int size) {
  if (t < last_arrival_)
    throw std::invalid_argument("link arrivals must be time ordered");
  last_arrival_ = t;
  const double cap = std::max<double>(config_.burst_bytes, size);
  const double start = std::max(t, state_t_);
  const double tokens = Refill(state_tokens_, state_t_, start, cap);

  AdmitOutcome out;
  double depart = start;
  double left = tokens - size;
  if (tokens < size) {
    depart = config_.schedule.TimeToCarry(start, (size - tokens) * 8.0);
    left = 0.0;
  }
  if (depart > t) {
    const long long queued = QueuedBytes(t);
    if (queued + size > config_.queue_cap_bytes) {
      out.dropped = true;
      ++dropped_packets_;
      dropped_bytes_ += size;
      if (logging_) log_.push_back({t, size, true, 0.0});
      return out;
    }
    waiting_.emplace_back(depart, size);
    waiting_bytes_ += size;
  }
  state_t_ = depart;
  state_tokens_ = left;
  out.depart = depart;
  out.deliver = depart + config_.one_way_delay_s;
  ++delivered_packets_;
  delivered_bytes_ += size;
  if (logging_) log_.push_back({t, size, false, depart});
  return out;
}

std::optional<double> RttProbe(TokenBucketLink& uplink, TokenBucketLink& downlink,
                               double t, int size) {
  const AdmitOutcome up = uplink.Admit(t, size);
  if (up.dropped) return std::nullopt;
  const AdmitOutcome down = downlink.Admit(up.deliver, size);
  if (down.dropped) return std::nullopt;
  return down.deliver - t;
}

void WriteLinkLogCsv(std::ostream& out, const std::vector<LinkLogEntry>& log) {
  out << "arrival_s,size,dropped,depart_s\n";
  char buf[96];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof(buf), "%.6f,%d,%d,%.6f\n", e.arrival, e.size,
                  e.dropped ? 1 : 0, e.depart);
    out << buf;
  }
}

}  // namespace stadia
