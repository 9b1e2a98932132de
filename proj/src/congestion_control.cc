#include "stadia/congestion_control.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace stadia {

std::string ToString(BandwidthUsage usage) {
  switch (usage) {
    case BandwidthUsage::kUnderuse: return "underuse";
    case BandwidthUsage::kNormal: return "normal";
    case BandwidthUsage::kOveruse: return "overuse";
  }
  return "unknown";
}

void ReceiveRateWindow::Add(double t, int bytes) {
  if (first_t_ < 0) first_t_ = t;
  packets_.emplace_back(t, bytes);
  bytes_ += bytes;
  Evict(t);
}

void ReceiveRateWindow::Evict(double now) {
  while (!packets_.empty() && packets_.front().first <= now - window_s_) {
    bytes_ -= packets_.front().second;
    packets_.pop_front();
  }
}

double ReceiveRateWindow::RateBps(double now) {
  Evict(now);
  if (first_t_ < 0) return 0.0;
  const double span = std::min(window_s_, now - first_t_);
  if (span <= 0.0) return 0.0;
  return static_cast<double>(bytes_) * 8.0 / span;
}

double DelayBasedEstimator::IncreaseFactor(double elapsed_s) const {
  if (config_.ar_increase_period_s <= 0.0) return config_.ar_increase;
  return std::pow(config_.ar_increase, elapsed_s / config_.ar_increase_period_s);
}

DelayBasedEstimator::DelayBasedEstimator(const GccConfig& config,
                                         double initial_ar_bps)
    : config_(config), ar_bps_(std::max(initial_ar_bps, config.ar_min_bps)) {}

double DelayBasedEstimator::Update(const FrameSample& sample,
                                   double receive_rate_bps, double now) {
  const double elapsed = last_update_s_ < 0.0 ? 0.0 : std::max(0.0, now - last_update_s_);
  last_update_s_ = now;
  const double gradient_ms =
      (sample.receive_duration_s - sample.send_duration_s) * 1000.0;
  gradient_ms_ = (1.0 - config_.gradient_alpha) * gradient_ms_ +
                 config_.gradient_alpha * gradient_ms;
  if (gradient_ms_ > config_.overuse_threshold_ms)
    usage_ = BandwidthUsage::kOveruse;
  else if (gradient_ms_ < -config_.overuse_threshold_ms)
    usage_ = BandwidthUsage::kUnderuse;
  else
    usage_ = BandwidthUsage::kNormal;

  if (usage_ == BandwidthUsage::kOveruse)
    ar_bps_ = config_.ar_decrease * receive_rate_bps;
  else
    ar_bps_ = std::min(IncreaseFactor(elapsed) * ar_bps_,
                       config_.ar_receive_cap * receive_rate_bps);
  ar_bps_ = std::max(ar_bps_, config_.ar_min_bps);
  return ar_bps_;
}

LossBasedController::LossBasedController(const GccConfig& config)
    : LossBasedController(config, config.as_max_bps) {}

LossBasedController::LossBasedController(const GccConfig& config,
                                         double initial_as_bps)
    : config_(config),
      as_bps_(std::clamp(initial_as_bps, config.as_min_bps, config.as_max_bps)) {}

double LossBasedController::Update(double loss_fraction) {
  as_bps_ = UpdateLossRate(as_bps_, loss_fraction, config_);
  return as_bps_;
}

double UpdateLossRate(double as_bps, double p, const GccConfig& config) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("loss fraction outside [0, 1]");
  double next = as_bps;
  if (p < config.loss_low)
    next = as_bps * config.as_increase;
  else if (p > config.loss_high)
    next = as_bps * (1.0 - config.as_decrease_gain * p);
  return std::clamp(next, config.as_min_bps, config.as_max_bps);
}

double TargetRate(double ar_bps, double as_bps) { return std::min(ar_bps, as_bps); }

bool ShouldNotify(double prev_ar_bps, double new_ar_bps, double elapsed_s,
                  const GccConfig& config) {
  if (elapsed_s >= config.notify_interval_s) return true;
  return std::abs(new_ar_bps - prev_ar_bps) / prev_ar_bps > config.notify_change;
}

void WriteControllerTraceCsv(std::ostream& out,
                             const std::vector<ControllerTracePoint>& points) {
  out << "t_s,ar_bps,as_bps,target_bps\n";
  char buf[128];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.0f,%.0f,%.0f\n", p.t, p.ar_bps,
                  p.as_bps, p.target_bps);
    out << buf;
  }
}

}  // namespace stadia
