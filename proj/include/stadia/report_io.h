#ifndef STADIA_REPORT_IO_H_
#define STADIA_REPORT_IO_H_

#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "stadia/analyzer.h"
#include "stadia/sim.h"

namespace stadia {

inline constexpr char kSimReportHeader[] = "# stadia-sim-report v1";
inline constexpr char kStatsHeader[] = "# stadia-stats v1";

// Per-second simulation report. The CSV form starts with the version line,
// then "# refused" when the session was refused, then a column header and
// one row per second. An empty rtt_s cell means no probe completed in that
// second.
void WriteSimReportCsv(std::ostream& out, const SimReport& report);
void WriteSimReportJson(std::ostream& out, const SimReport& report);

// Reads the CSV form back. Only the per-second records and the refusal flag
// survive the round trip. Throws ParseError.
SimReport ReadSimReportCsv(std::istream& in);

struct StatsRow {
  std::string label;
  TrafficStats stats;
};

void WriteStatsCsv(std::ostream& out, const std::vector<StatsRow>& rows);
void WriteStatsJson(std::ostream& out, const std::vector<StatsRow>& rows);
std::vector<StatsRow> ReadStatsCsv(std::istream& in);

using MetricMap = std::map<std::string, double>;

// Scalar summaries of a report: mean_fps, min_fps, mean_rtt_ms,
// p95_rtt_ms, total_packets_lost, mean_jitter_buffer_ms,
// mean_delivered_mbps, mean_resolution_height, final_resolution_height,
// resolution_changes, seconds. Throws InsufficientDataError when there are
// no records.
MetricMap ReportMetrics(const SimReport& report);

// mean_pkt_size, stdev_pkt_size, mean_ipt_ms, load_mbps, packet_count,
// duration_s.
MetricMap StatsMetrics(const TrafficStats& stats);

// Reads a sim report or stats file (told apart by the version line). A
// stats file with several rows prefixes each key with "<label>.".
MetricMap ReadMetricsFile(const std::filesystem::path& path);

}  // namespace stadia

#endif  // STADIA_REPORT_IO_H_
