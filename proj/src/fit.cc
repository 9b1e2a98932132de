#include "stadia/fit.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace stadia {
namespace {

constexpr double kCoarseWindowUs = 500'000.0;
constexpr double kCoarseStepUs = 5.0;
constexpr int kCandidates = 5;

struct Packet {
  Micros t;
  int size;
};

// Marks packets that look like the audio stream: size in range and another
// such packet one audio period earlier or later.
std::vector<bool> AudioMask(const std::vector<PacketRecord>& recs,
                            const FitOptions& o) {
  std::vector<Micros> cand;
  for (const PacketRecord& r : recs)
    if (r.payload_len >= o.audio_min_size && r.payload_len <= o.audio_max_size)
      cand.push_back(r.t_epoch_us);
  const Micros period = SecondsToMicros(o.audio_period_ms / 1000.0);
  const Micros tol = SecondsToMicros(o.audio_tolerance_ms / 1000.0);
  auto has = [&](Micros lo, Micros hi) {
    auto it = std::lower_bound(cand.begin(), cand.end(), lo);
    return it != cand.end() && *it <= hi;
  };
  std::vector<bool> mask(recs.size(), false);
  for (size_t i = 0; i < recs.size(); ++i) {
    const PacketRecord& r = recs[i];
    if (r.payload_len < o.audio_min_size || r.payload_len > o.audio_max_size)
      continue;
    const Micros t = r.t_epoch_us;
    mask[i] = has(t + period - tol, t + period + tol) ||
              has(t - period - tol, t - period + tol);
  }
  return mask;
}

std::vector<double> FoldedHistogram(const std::vector<Micros>& times,
                                    double period_us, int bins) {
  std::vector<double> hist(static_cast<size_t>(bins), 0.0);
  if (times.empty()) return hist;
  const double t0 = static_cast<double>(times.front());
  for (Micros t : times) {
    const double x = static_cast<double>(t) - t0;
    const double phase = x / period_us - std::floor(x / period_us);
    size_t b = static_cast<size_t>(phase * bins);
    if (b >= hist.size()) b = hist.size() - 1;
    hist[b] += 1.0;
  }
  return hist;
}

// Phase (fraction of a period, relative to times.front()) in the middle of
// the longest circular run of sparsely occupied bins.
double FrameBoundaryPhase(const std::vector<Micros>& times, double period_us,
                          int bins) {
  const std::vector<double> hist = FoldedHistogram(times, period_us, bins);
  const double peak = *std::max_element(hist.begin(), hist.end());
  const double sparse = 0.2 * peak;
  int best_len = 0, best_start = 0;
  for (int start = 0; start < bins; ++start) {
    if (hist[static_cast<size_t>(start)] > sparse) continue;
    const int prev = (start + bins - 1) % bins;
    if (hist[static_cast<size_t>(prev)] <= sparse && start != 0) continue;
    int len = 0;
    while (len < bins && hist[static_cast<size_t>((start + len) % bins)] <= sparse)
      ++len;
    if (len > best_len) {
      best_len = len;
      best_start = start;
    }
  }
  if (best_len == 0) return 0.0;
  return (best_start + 0.5 * best_len) / bins;
}

// Re-estimates the period by regressing frame start times on frame index,
// over windows growing by 4x until the whole trace is covered.
double RefinePeriod(const std::vector<Micros>& times, double period_us,
                    int bins) {
  const Micros t0 = times.front();
  const double total = static_cast<double>(times.back() - t0);
  double window = kCoarseWindowUs;
  while (true) {
    window = std::min(window, total);
    auto end = std::upper_bound(times.begin(), times.end(),
                                t0 + static_cast<Micros>(window));
    std::vector<Micros> sub(times.begin(), end);
    const double boundary = FrameBoundaryPhase(sub, period_us, bins) * period_us;
    std::map<int64_t, Micros> starts;
    for (Micros t : sub) {
      const int64_t n = static_cast<int64_t>(
          std::floor((static_cast<double>(t - t0) - boundary) / period_us));
      auto [it, inserted] = starts.emplace(n, t);
      if (!inserted) it->second = std::min(it->second, t);
    }
    if (starts.size() >= 3) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(starts.size());
      for (const auto& [idx, t] : starts) {
        const double x = static_cast<double>(idx);
        const double y = static_cast<double>(t - t0);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      const double denom = n * sxx - sx * sx;
      if (denom > 0) period_us = (n * sxy - sx * sy) / denom;
    }
    if (window >= total) break;
    window *= 4.0;
  }
  return period_us;
}

}  // namespace

double PhaseConcentration(const std::vector<Micros>& times, double period_us,
                          int bins) {
  if (times.empty()) return 0.0;
  const std::vector<double> hist = FoldedHistogram(times, period_us, bins);
  const double n = static_cast<double>(times.size());
  double h = 0.0;
  for (double c : hist)
    if (c > 0) h -= (c / n) * std::log(c / n);
  return 1.0 - h / std::log(static_cast<double>(bins));
}

FitResult FitGeneratorParams(const Trace& video_trace, bool audio_assumed,
                             const FitOptions& o) {
  const auto& recs = video_trace.records;
  if (recs.size() < 2 || video_trace.span_seconds() < 10.0)
    throw FitError("fit needs a trace of at least 10 s");

  FitResult result;
  GeneratorParams& p = result.params;
  p = o.base;
  p.game = video_trace.meta.game;
  if (video_trace.meta.codec != Codec::kNotAvailable) p.codec = video_trace.meta.codec;
  if (video_trace.meta.resolution != Resolution::kNotAvailable)
    p.resolution = video_trace.meta.resolution;

  std::vector<bool> audio(recs.size(), false);
  if (audio_assumed) audio = AudioMask(recs, o);
  std::vector<Packet> video;
  std::vector<Micros> audio_times;
  std::vector<int> audio_sizes;
  for (size_t i = 0; i < recs.size(); ++i) {
    if (audio[i]) {
      audio_times.push_back(recs[i].t_epoch_us);
      audio_sizes.push_back(recs[i].payload_len);
    } else {
      video.push_back({recs[i].t_epoch_us, recs[i].payload_len});
    }
  }
  result.audio_packets = audio_times.size();
  if (audio_assumed) {
    if (audio_times.size() >= 2) {
      std::vector<double> gaps;
      for (size_t i = 1; i < audio_times.size(); ++i) {
        const double g = static_cast<double>(audio_times[i] - audio_times[i - 1]);
        if (std::abs(g / 1000.0 - o.audio_period_ms) <= o.audio_tolerance_ms)
          gaps.push_back(g);
      }
      double sum = 0.0;
      for (int s : audio_sizes) sum += s;
      p.audio.enabled = true;
      p.audio.size = static_cast<int>(std::lround(sum / audio_sizes.size()));
      if (!gaps.empty()) {
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
        p.audio.period_ms = gaps[gaps.size() / 2] / 1000.0;
      }
    } else {
      p.audio.enabled = false;
    }
  }
  if (video.size() < 10) throw FitError("too few video packets to fit");

  std::vector<Micros> times;
  times.reserve(video.size());
  for (const Packet& v : video) times.push_back(v.t);

  // Coarse scan on a short prefix, keeping the best few candidates.
  auto prefix_end = std::upper_bound(
      times.begin(), times.end(), times.front() + static_cast<Micros>(kCoarseWindowUs));
  std::vector<Micros> prefix(times.begin(), prefix_end);
  std::vector<std::pair<double, double>> scored;  // (score, period_us)
  for (double per = o.min_period_ms * 1000.0; per <= o.max_period_ms * 1000.0;
       per += kCoarseStepUs)
    scored.emplace_back(PhaseConcentration(prefix, per, o.phase_bins), per);
  std::sort(scored.begin(), scored.end(), std::greater<>());
  std::vector<double> picks;
  for (const auto& [score, per] : scored) {
    bool near = false;
    for (double q : picks) near |= std::abs(q - per) < 50.0;
    if (!near) picks.push_back(per);
    if (static_cast<int>(picks.size()) == kCandidates) break;
  }

  double best_score = -1.0, best_period = 0.0;
  for (double cand : picks) {
    const double refined = RefinePeriod(times, cand, o.phase_bins);
    if (refined < o.min_period_ms * 1000.0 * 0.98 ||
        refined > o.max_period_ms * 1000.0 * 1.02)
      continue;
    const double score = PhaseConcentration(times, refined, o.phase_bins);
    if (score > best_score) {
      best_score = score;
      best_period = refined;
    }
  }
  result.concentration = std::max(0.0, best_score);
  if (best_score < o.min_concentration)
    throw FitError("no frame period with phase concentration above " +
                   std::to_string(o.min_concentration));
  result.period_ms = best_period / 1000.0;
  double fps = 1e6 / best_period;
  if (std::abs(fps - std::round(fps)) < o.frame_rate_snap) fps = std::round(fps);
  p.frame_rate = fps;

  // Split into frames at the boundary phase; drop the partial first/last.
  const double boundary =
      FrameBoundaryPhase(times, best_period, o.phase_bins) * best_period;
  const Micros t0 = times.front();
  std::map<int64_t, std::vector<Packet>> frames;
  for (const Packet& v : video) {
    const int64_t n = static_cast<int64_t>(
        std::floor((static_cast<double>(v.t - t0) - boundary) / best_period));
    frames[n].push_back(v);
  }
  const int64_t first = frames.begin()->first + 1;
  const int64_t last = frames.rbegin()->first - 1;
  if (last < first) throw FitError("trace holds fewer than 3 frames");

  const Micros gap = SecondsToMicros(o.group_gap_ms / 1000.0);
  std::vector<int> group_counts, group_sizes, sizes;
  double spacing_sum = 0.0, intra_sum = 0.0;
  size_t spacing_n = 0, intra_n = 0;
  for (int64_t n = first; n <= last; ++n) {
    auto it = frames.find(n);
    if (it == frames.end()) {
      group_counts.push_back(0);
      continue;
    }
    const std::vector<Packet>& f = it->second;
    int groups = 1, in_group = 1;
    Micros group_start = f.front().t;
    sizes.push_back(f.front().size);
    for (size_t i = 1; i < f.size(); ++i) {
      sizes.push_back(f[i].size);
      const Micros d = f[i].t - f[i - 1].t;
      if (d >= gap) {
        group_sizes.push_back(in_group);
        spacing_sum += static_cast<double>(f[i].t - group_start);
        ++spacing_n;
        group_start = f[i].t;
        in_group = 1;
        ++groups;
      } else {
        intra_sum += static_cast<double>(d);
        ++intra_n;
        ++in_group;
      }
    }
    group_sizes.push_back(in_group);
    group_counts.push_back(groups);
  }
  result.frames = group_counts.size();
  result.groups = group_sizes.size();
  result.video_packets = sizes.size();
  if (sizes.empty()) throw FitError("no video packets inside whole frames");

  p.group_count_dist = DiscreteDistribution::FromSamples(group_counts);
  p.group_size_dist = DiscreteDistribution::FromSamples(group_sizes);
  p.video_size_dist = DiscreteDistribution::FromSamples(sizes);
  if (spacing_n > 0) p.group_spacing_ms = spacing_sum / spacing_n / 1000.0;
  if (intra_n > 0) p.intra_group_spacing_ms = intra_sum / intra_n / 1000.0;
  // Keep the params valid when measured spacing stretches the frame.
  const double max_spacing =
      (1000.0 / p.frame_rate) / std::max(1, p.group_count_dist.Max() - 1);
  if (p.group_spacing_ms >= max_spacing) p.group_spacing_ms = 0.99 * max_spacing;
  p.Validate();
  return result;
}

}  // namespace stadia
