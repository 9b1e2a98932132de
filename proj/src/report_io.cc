#include "stadia/report_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stadia/ecdf.h"
#include "stadia/trace.h"

namespace stadia {
namespace {

constexpr char kRefusedMarker[] = "# refused";
constexpr char kReportColumns[] =
    "second,resolution_height,fps,rtt_s,packets_lost,jitter_buffer_s,"
    "delivered_mbps,target_bps,encoder_bps,phase";
constexpr char kStatsColumns[] =
    "label,packet_count,duration_s,mean_pkt_size,stdev_pkt_size,mean_ipt_ms,"
    "load_mbps,min_pkt,max_pkt";

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double CellDouble(const std::string& s, int line) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "not a number: '" + s + "'");
  }
}

int CellInt(const std::string& s, int line) {
  const double v = CellDouble(s, line);
  if (v != std::floor(v)) throw ParseError(line, "not an integer: '" + s + "'");
  return static_cast<int>(v);
}

Phase ParsePhase(const std::string& s, int line) {
  if (s == "starting") return Phase::kStarting;
  if (s == "steady") return Phase::kSteady;
  if (s == "transient") return Phase::kTransient;
  throw ParseError(line, "unknown phase '" + s + "'");
}

double Mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

bool StartsWith(const std::string& s, const char* prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

void WriteSimReportCsv(std::ostream& out, const SimReport& report) {
  out << kSimReportHeader << '\n';
  if (report.refused) out << kRefusedMarker << '\n';
  out << kReportColumns << '\n';
  char buf[256];
  for (const SecondRecord& r : report.records) {
    char rtt[32] = "";
    if (r.rtt_s) std::snprintf(rtt, sizeof(rtt), "%.6f", *r.rtt_s);
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%s,%d,%.6f,%.6f,%.0f,%.0f,%s\n",
                  r.second, r.resolution_height, r.frames_decoded, rtt,
                  r.packets_lost, r.jitter_buffer_s, r.delivered_mbps,
                  r.target_bps, r.encoder_bps, ToString(r.phase).c_str());
    out << buf;
  }
}

void WriteSimReportJson(std::ostream& out, const SimReport& report) {
  nlohmann::ordered_json j;
  j["scenario"] = report.scenario;
  j["seed"] = report.seed;
  j["refused"] = report.refused;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const SecondRecord& r : report.records) {
    nlohmann::ordered_json row;
    row["second"] = r.second;
    row["resolution_height"] = r.resolution_height;
    row["fps"] = r.frames_decoded;
    row["rtt_s"] = r.rtt_s ? nlohmann::ordered_json(*r.rtt_s) : nlohmann::ordered_json();
    row["packets_lost"] = r.packets_lost;
    row["jitter_buffer_s"] = r.jitter_buffer_s;
    row["delivered_mbps"] = r.delivered_mbps;
    row["target_bps"] = r.target_bps;
    row["encoder_bps"] = r.encoder_bps;
    row["phase"] = ToString(r.phase);
    records.push_back(row);
  }
  j["records"] = records;
  nlohmann::ordered_json changes = nlohmann::ordered_json::array();
  for (const ConfigChange& c : report.changes)
    changes.push_back({{"t_s", c.t},
                       {"from", ToString(c.from.resolution)},
                       {"to", ToString(c.to.resolution)},
                       {"bitrate_bps", c.to.bitrate_bps},
                       {"reason", c.reason}});
  j["resolution_changes"] = changes;
  nlohmann::ordered_json counters;
  for (const auto& [name, c] : report.counters)
    counters[name] = {{"generated", c.generated},
                      {"delivered", c.delivered},
                      {"dropped", c.dropped},
                      {"in_flight", c.in_flight}};
  j["streams"] = counters;
  out << j.dump(2) << '\n';
}

SimReport ReadSimReportCsv(std::istream& in) {
  SimReport report;
  std::string line;
  int n = 0;
  if (!std::getline(in, line) || line != kSimReportHeader)
    throw ParseError(1, "missing sim report version line");
  ++n;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (!header_seen) {
      if (line == kRefusedMarker) {
        report.refused = true;
        continue;
      }
      if (line != kReportColumns) throw ParseError(n, "unexpected column header");
      header_seen = true;
      continue;
    }
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != 10) throw ParseError(n, "expected 10 columns");
    SecondRecord r;
    r.second = CellInt(c[0], n);
    r.resolution_height = CellInt(c[1], n);
    r.frames_decoded = CellInt(c[2], n);
    if (!c[3].empty()) r.rtt_s = CellDouble(c[3], n);
    r.packets_lost = CellInt(c[4], n);
    r.jitter_buffer_s = CellDouble(c[5], n);
    r.delivered_mbps = CellDouble(c[6], n);
    r.target_bps = CellDouble(c[7], n);
    r.encoder_bps = CellDouble(c[8], n);
    r.phase = ParsePhase(c[9], n);
    report.records.push_back(r);
  }
  if (!header_seen) throw ParseError(n, "missing column header");
  return report;
}

void WriteStatsCsv(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << kStatsHeader << '\n' << kStatsColumns << '\n';
  char buf[256];
  for (const StatsRow& row : rows) {
    const TrafficStats& s = row.stats;
    std::snprintf(buf, sizeof(buf), ",%zu,%.6f,%.4f,%.4f,%.6f,%.6f,%d,%d\n",
                  s.packet_count, s.duration_s, s.mean_pkt_size,
                  s.stdev_pkt_size, s.mean_ipt_ms, s.load_mbps, s.min_pkt,
                  s.max_pkt);
    out << row.label << buf;
  }
}

void WriteStatsJson(std::ostream& out, const std::vector<StatsRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const StatsRow& row : rows) {
    const TrafficStats& s = row.stats;
    nlohmann::ordered_json top = nlohmann::ordered_json::array();
    for (const auto& [size, share] : s.top_sizes)
      top.push_back({{"size", size}, {"share", share}});
    j.push_back({{"label", row.label},
                 {"packet_count", s.packet_count},
                 {"duration_s", s.duration_s},
                 {"mean_pkt_size", s.mean_pkt_size},
                 {"stdev_pkt_size", s.stdev_pkt_size},
                 {"mean_ipt_ms", s.mean_ipt_ms},
                 {"load_mbps", s.load_mbps},
                 {"min_pkt", s.min_pkt},
                 {"max_pkt", s.max_pkt},
                 {"top_sizes", top}});
  }
  out << j.dump(2) << '\n';
}

std::vector<StatsRow> ReadStatsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kStatsHeader)
    throw ParseError(1, "missing stats version line");
  if (!std::getline(in, line) || line != kStatsColumns)
    throw ParseError(2, "unexpected column header");
  std::vector<StatsRow> rows;
  int n = 2;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const std::vector<std::string> c = SplitCsv(line);
    if (c.size() != 9) throw ParseError(n, "expected 9 columns");
    StatsRow row;
    row.label = c[0];
    row.stats.packet_count = static_cast<size_t>(CellInt(c[1], n));
    row.stats.duration_s = CellDouble(c[2], n);
    row.stats.mean_pkt_size = CellDouble(c[3], n);
    row.stats.stdev_pkt_size = CellDouble(c[4], n);
    row.stats.mean_ipt_ms = CellDouble(c[5], n);
    row.stats.load_mbps = CellDouble(c[6], n);
    row.stats.min_pkt = CellInt(c[7], n);
    row.stats.max_pkt = CellInt(c[8], n);
    rows.push_back(row);
  }
  return rows;
}

MetricMap ReportMetrics(const SimReport& report) {
  if (report.records.empty())
    throw InsufficientDataError(report.refused ? "session was refused"
                                               : "report has no records");
  std::vector<double> fps, rtt_ms, jb_ms, mbps, height;
  double lost = 0.0;
  int changes = 0;
  for (size_t i = 0; i < report.records.size(); ++i) {
    const SecondRecord& r = report.records[i];
    fps.push_back(r.frames_decoded);
    if (r.rtt_s) rtt_ms.push_back(*r.rtt_s * 1000.0);
    jb_ms.push_back(r.jitter_buffer_s * 1000.0);
    mbps.push_back(r.delivered_mbps);
    height.push_back(r.resolution_height);
    lost += r.packets_lost;
    if (i > 0 && r.resolution_height != report.records[i - 1].resolution_height)
      ++changes;
  }
  MetricMap m;
  m["seconds"] = static_cast<double>(report.records.size());
  m["mean_fps"] = Mean(fps);
  m["min_fps"] = *std::min_element(fps.begin(), fps.end());
  if (!rtt_ms.empty()) {
    m["mean_rtt_ms"] = Mean(rtt_ms);
    m["p95_rtt_ms"] = Ecdf::Build(rtt_ms).Quantile(0.95);
  }
  m["total_packets_lost"] = lost;
  m["mean_jitter_buffer_ms"] = Mean(jb_ms);
  m["mean_delivered_mbps"] = Mean(mbps);
  m["mean_resolution_height"] = Mean(height);
  m["final_resolution_height"] = height.back();
  m["resolution_changes"] = changes;
  return m;
}

MetricMap StatsMetrics(const TrafficStats& s) {
  return {{"mean_pkt_size", s.mean_pkt_size},
          {"stdev_pkt_size", s.stdev_pkt_size},
          {"mean_ipt_ms", s.mean_ipt_ms},
          {"load_mbps", s.load_mbps},
          {"packet_count", static_cast<double>(s.packet_count)},
          {"duration_s", s.duration_s}};
}

MetricMap ReadMetricsFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  const int first = in.peek();
  if (first == EOF) throw InsufficientDataError(path.string() + " is empty");
  std::string head;
  std::getline(in, head);
  in.clear();
  in.seekg(0);
  if (StartsWith(head, kSimReportHeader)) return ReportMetrics(ReadSimReportCsv(in));
  if (!StartsWith(head, kStatsHeader))
    throw ParseError(1, path.string() + " is neither a sim report nor a stats file");
  const std::vector<StatsRow> rows = ReadStatsCsv(in);
  if (rows.empty()) throw InsufficientDataError(path.string() + " has no rows");
  if (rows.size() == 1) return StatsMetrics(rows.front().stats);
  MetricMap all;
  for (const StatsRow& row : rows)
    for (const auto& [k, v] : StatsMetrics(row.stats)) all[row.label + "." + k] = v;
  return all;
}

}  // namespace stadia
