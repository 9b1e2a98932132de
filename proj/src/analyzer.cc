#include "stadia/analyzer.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>

namespace stadia {

TrafficStats SummaryStats(const Trace& trace, size_t top_n) {
  const auto& recs = trace.records;
  if (recs.size() < 2)
    throw InsufficientDataError("summary stats need at least 2 records, got " +
                                std::to_string(recs.size()));
  TrafficStats s;
  s.packet_count = recs.size();
  s.min_pkt = recs.front().payload_len;
  s.max_pkt = recs.front().payload_len;

  double sum = 0.0;
  std::map<int, size_t> counts;
  for (const PacketRecord& r : recs) {
    sum += r.payload_len;
    s.min_pkt = std::min(s.min_pkt, r.payload_len);
    s.max_pkt = std::max(s.max_pkt, r.payload_len);
    ++counts[r.payload_len];
  }
  const double n = static_cast<double>(recs.size());
  s.mean_pkt_size = sum / n;
  double ss = 0.0;
  for (const PacketRecord& r : recs)
    ss += (r.payload_len - s.mean_pkt_size) * (r.payload_len - s.mean_pkt_size);
  s.stdev_pkt_size = std::sqrt(ss / (n - 1.0));

  Micros delta_sum = 0;
  double later_bytes = 0.0;
  for (size_t i = 1; i < recs.size(); ++i) {
    delta_sum += recs[i].delta_us;
    later_bytes += recs[i].payload_len;
  }
  s.mean_ipt_ms = static_cast<double>(delta_sum) / 1000.0 / (n - 1.0);
  s.duration_s = trace.span_seconds();
  if (s.duration_s <= 0.0)
    throw InsufficientDataError("trace spans zero time; load undefined");
  s.load_mbps = later_bytes * 8.0 / s.duration_s / 1e6;

  std::vector<std::pair<int, size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (size_t i = 0; i < ranked.size() && i < top_n; ++i)
    s.top_sizes.emplace_back(ranked[i].first,
                             static_cast<double>(ranked[i].second) / n);
  return s;
}

std::vector<double> PacketSizes(const Trace& trace) {
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const PacketRecord& r : trace.records) out.push_back(r.payload_len);
  return out;
}

std::vector<double> InterPacketTimesMs(const Trace& trace) {
  std::vector<double> out;
  if (trace.records.size() < 2) return out;
  out.reserve(trace.records.size() - 1);
  for (size_t i = 1; i < trace.records.size(); ++i)
    out.push_back(static_cast<double>(trace.records[i].delta_us) / 1000.0);
  return out;
}

LoadSeries LoadTimeseries(const Trace& trace, double window_s) {
  if (!(window_s > 0.0)) throw std::invalid_argument("window must be > 0");
  if (trace.records.empty())
    throw InsufficientDataError("load series of an empty trace");
  const Micros w = SecondsToMicros(window_s);
  if (w <= 0) throw std::invalid_argument("window below 1 us");
  const Micros t0 = trace.records.front().t_epoch_us;
  const Micros span = trace.records.back().t_epoch_us - t0;
  const size_t count =
      std::max<size_t>(1, static_cast<size_t>((span + w - 1) / w));

  std::vector<double> bits(count, 0.0);
  for (const PacketRecord& r : trace.records) {
    size_t idx = static_cast<size_t>((r.t_epoch_us - t0) / w);
    idx = std::min(idx, count - 1);
    bits[idx] += r.payload_len * 8.0;
  }

  LoadSeries series;
  series.window_s = window_s;
  for (size_t i = 0; i < count; ++i) {
    Micros len = w;
    if (i == count - 1 && span > 0) len = span - static_cast<Micros>(i) * w;
    series.starts_s.push_back(ToSeconds(static_cast<Micros>(i) * w));
    series.mbps.push_back(bits[i] / ToSeconds(len) / 1e6);
  }
  return series;
}

std::string ToString(GameState state) {
  switch (state) {
    case GameState::kMainMenu: return "main_menu";
    case GameState::kLoading: return "loading";
    case GameState::kIdle: return "idle";
    case GameState::kPlay: return "play";
    case GameState::kPause: return "pause";
  }
  return "unknown";
}

GameState ParseGameState(const std::string& text) {
  std::string t;
  for (char c : text) t.push_back(static_cast<char>(std::tolower(c)));
  for (GameState s : {GameState::kMainMenu, GameState::kLoading,
                      GameState::kIdle, GameState::kPlay, GameState::kPause})
    if (ToString(s) == t) return s;
  throw ConfigError("unknown game state '" + text + "'");
}

std::vector<StateSegment> SegmentStats(const LoadSeries& series,
                                       const StateSchedule& schedule,
                                       const SegmentOptions& options) {
  if (series.mbps.empty()) throw std::invalid_argument("empty load series");
  const double series_end = series.starts_s.back() + series.window_s;
  const double eps = 1e-9;
  std::vector<StateSegment> out;
  double prev_end = -1e300;
  for (const StateInterval& iv : schedule.intervals) {
    if (!(iv.start_s < iv.end_s))
      throw std::invalid_argument("state interval must have start < end");
    if (iv.start_s < prev_end - eps)
      throw std::invalid_argument("state intervals overlap");
    if (iv.start_s < series.starts_s.front() - eps || iv.end_s > series_end + eps)
      throw std::invalid_argument("state interval outside series span");
    if (iv.end_s - iv.start_s < 2.0 * options.trim_s)
      throw std::invalid_argument(ToString(iv.state) +
                                  " interval shorter than twice the trim");
    prev_end = iv.end_s;

    const double lo = iv.start_s + options.trim_s;
    const double hi = iv.end_s - options.trim_s;
    std::vector<double> vals;
    for (size_t i = 0; i < series.mbps.size(); ++i) {
      const double s = series.starts_s[i];
      if (s >= lo - eps && s + series.window_s <= hi + eps)
        vals.push_back(series.mbps[i]);
    }
    if (vals.empty())
      throw std::invalid_argument("no full window inside trimmed " +
                                  ToString(iv.state) + " interval");
    StateSegment seg;
    seg.interval = iv;
    seg.windows = vals.size();
    double sum = 0.0;
    for (double v : vals) sum += v;
    seg.mean_mbps = sum / static_cast<double>(vals.size());
    if (vals.size() > 1) {
      double ss = 0.0;
      for (double v : vals) ss += (v - seg.mean_mbps) * (v - seg.mean_mbps);
      seg.stdev_mbps = std::sqrt(ss / static_cast<double>(vals.size() - 1));
    }
    out.push_back(seg);
  }
  return out;
}

int CountDistinctRegimes(const std::vector<StateSegment>& segments) {
  const size_t n = segments.size();
  if (n == 0) return 0;
  if (n > 20) throw std::invalid_argument("too many segments for regime count");
  auto distinct = [&](size_t a, size_t b) {
    const double pooled = std::sqrt(
        0.5 * (segments[a].stdev_mbps * segments[a].stdev_mbps +
               segments[b].stdev_mbps * segments[b].stdev_mbps));
    return std::abs(segments[a].mean_mbps - segments[b].mean_mbps) >
           2.0 * pooled;
  };
  int best = 1;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (size <= best) continue;
    bool ok = true;
    for (size_t a = 0; a < n && ok; ++a) {
      if (!(mask & (1u << a))) continue;
      for (size_t b = a + 1; b < n && ok; ++b)
        if ((mask & (1u << b)) && !distinct(a, b)) ok = false;
    }
    if (ok) best = size;
  }
  return best;
}

}  // namespace stadia
