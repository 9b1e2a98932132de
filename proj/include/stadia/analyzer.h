#ifndef STADIA_ANALYZER_H_
#define STADIA_ANALYZER_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stadia/trace.h"

namespace stadia {

class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrafficStats {
  double mean_pkt_size = 0.0;   // bytes
  double stdev_pkt_size = 0.0;  // bytes, sample (n-1) deviation
  double mean_ipt_ms = 0.0;     // mean of the delta column over records 2..n
  double load_mbps = 0.0;
  size_t packet_count = 0;
  double duration_s = 0.0;  // t_last - t_first
  int min_pkt = 0;
  int max_pkt = 0;
  // Most frequent sizes with their share of packets, most frequent first.
  std::vector<std::pair<int, double>> top_sizes;
};

// Load counts the bytes that arrive after t_first, i.e. records 2..n, over
// t_last - t_first: the first packet opens the interval and carries no
// airtime inside it. Throws InsufficientDataError below 2 records.
TrafficStats SummaryStats(const Trace& trace, size_t top_n = 3);

std::vector<double> PacketSizes(const Trace& trace);
// Inter-packet times in ms (records 2..n).
std::vector<double> InterPacketTimesMs(const Trace& trace);

struct LoadSeries {
  double window_s = 1.0;
  std::vector<double> starts_s;  // relative to the first packet
  std::vector<double> mbps;
};

// Windows start at the first packet. The last packet always falls in the
// final window, whose rate is normalized by its true length (the remainder
// of the span, or a full window when the span is a whole multiple).
LoadSeries LoadTimeseries(const Trace& trace, double window_s);

enum class GameState { kMainMenu, kLoading, kIdle, kPlay, kPause };
std::string ToString(GameState state);
GameState ParseGameState(const std::string& text);

struct StateInterval {
  GameState state;
  double start_s;  // relative to the series start
  double end_s;
};

struct StateSchedule {
  std::vector<StateInterval> intervals;
};

struct StateSegment {
  StateInterval interval;
  double mean_mbps = 0.0;
  double stdev_mbps = 0.0;
  size_t windows = 0;
};

struct SegmentOptions {
  double trim_s = 10.0;
};

// Statistics over the windows lying fully inside each trimmed interval.
// Throws std::invalid_argument if an interval is shorter than 2x trim, leaves
// the series span, or overlaps its predecessor.
std::vector<StateSegment> SegmentStats(const LoadSeries& series,
                                       const StateSchedule& schedule,
                                       const SegmentOptions& options = {});

// Size of the largest set of segments whose means differ pairwise by more
// than twice the pooled standard deviation of the pair.
int CountDistinctRegimes(const std::vector<StateSegment>& segments);

}  // namespace stadia

#endif  // STADIA_ANALYZER_H_
