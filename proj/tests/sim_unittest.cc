#include <filesystem>
#include <sstream>

#include "gtest/gtest.h"
#include "stadia/compare.h"
#include "stadia/presets.h"
#include "stadia/report_io.h"
#include "stadia/sim.h"

namespace stadia {
namespace {

const std::filesystem::path kScenarioDir = std::filesystem::path(STADIA_DATA_DIR) / "scenarios";

const PresetLibrary& Presets() {
  static const PresetLibrary lib = PresetLibrary::Load(DefaultPresetDir());
  return lib;
}

SimReport RunNamed(const std::string& name) {
  return RunScenario(LoadScenario(kScenarioDir / (name + ".yaml")), Presets());
}

SimReport RunText(const std::string& yaml) {
  return RunScenario(ParseScenario(yaml), Presets());
}

constexpr char kShortUncongested[] =
    "game: TR\nduration_s: 20\nseed: 3\n"
    "downlink: {rate_bps: 100e6, one_way_delay_ms: 5}\n"
    "uplink: {rate_bps: 100e6, one_way_delay_ms: 5}\n";

TEST(ScenarioParseTest, ReadsScheduleAndOverrides) {
  const Scenario s = ParseScenario(
      "name: x\ngame: TH\ncodec: H264\nmax_resolution: 4K\nduration_s: 30\nseed: 9\n"
      "downlink: {schedule: [[0, 50e6], [10, 20e6]], one_way_delay_ms: 7,"
      " queue_cap_bytes: 4096, burst_bytes: 2048}\n"
      "measured_capacity_bps: 40e6\n"
      "gcc: {ar_increase: 1.1}\nadaptation: {hold_s: 4}\njitter_buffer: {min_ms: 10}\n");
  EXPECT_EQ(s.game, Game::kThumper);
  EXPECT_EQ(s.codec, Codec::kH264);
  EXPECT_EQ(s.max_resolution, Resolution::k4K);
  EXPECT_EQ(s.seed, 9u);
  ASSERT_EQ(s.downlink.schedule.points().size(), 2u);
  EXPECT_EQ(s.downlink.schedule.RateAt(15.0), 20e6);
  EXPECT_DOUBLE_EQ(s.downlink.one_way_delay_s, 0.007);
  EXPECT_EQ(s.downlink.queue_cap_bytes, 4096);
  EXPECT_EQ(s.downlink.burst_bytes, 2048);
  EXPECT_EQ(*s.measured_capacity_bps, 40e6);
  EXPECT_DOUBLE_EQ(s.gcc.ar_increase, 1.1);
  EXPECT_DOUBLE_EQ(s.adaptation.hold_s, 4.0);
  EXPECT_DOUBLE_EQ(s.jitter_buffer.min_ms, 10.0);
}

TEST(ScenarioParseTest, RejectsInvalidScenarios) {
  EXPECT_THROW(ParseScenario("game: TR\ndownlink: {rate_bps: 1e6}\n"), ConfigError);
  EXPECT_THROW(ParseScenario("game: TR\nduration_s: 0\ndownlink: {rate_bps: 1e6}\n"),
               ConfigError);
  EXPECT_THROW(ParseScenario("game: TR\nduration_s: 10\n"), ConfigError);
  EXPECT_THROW(ParseScenario("game: TR\nduration_s: 10\nmax_resolution: NA\n"
                             "downlink: {rate_bps: 1e6}\n"),
               ConfigError);
  EXPECT_THROW(LoadScenario(kScenarioDir / "no_such.yaml"), ConfigError);
}

TEST(ScenarioParseTest, NameDefaultsToFileStem) {
  EXPECT_EQ(LoadScenario(kScenarioDir / "drop_30.yaml").name, "drop_30");
}

TEST(SimTest, UncongestedRunsCleanAtFullFrameRate) {
  const SimReport r = RunText(kShortUncongested);
  ASSERT_FALSE(r.refused);
  ASSERT_EQ(r.records.size(), 20u);
  for (const SecondRecord& rec : r.records) {
    EXPECT_EQ(rec.packets_lost, 0);
    EXPECT_EQ(rec.resolution_height, 1080);
    if (rec.second > 0 && rec.second < 19) EXPECT_EQ(rec.frames_decoded, 60) << rec.second;
    ASSERT_TRUE(rec.rtt_s.has_value());
    EXPECT_NEAR(*rec.rtt_s, 0.010, 0.0005);
  }
  EXPECT_TRUE(r.changes.empty());
}

TEST(SimTest, CountersBalancePerStream) {
  const SimReport r = RunNamed("drop_15");
  for (const char* name : {"video", "audio", "feedback", "stun_request", "stun_response"})
    ASSERT_TRUE(r.counters.count(name)) << name;
  for (const auto& [name, c] : r.counters) {
    EXPECT_EQ(c.generated, c.delivered + c.dropped + c.in_flight) << name;
    EXPECT_GT(c.generated, 0) << name;
  }
  long long lost = 0;
  for (const SecondRecord& rec : r.records) lost += rec.packets_lost;
  EXPECT_EQ(lost, r.counters.at("video").dropped);
}

TEST(SimTest, RefusesLowStartupCapacity) {
  const SimReport r = RunText(
      "game: TR\nduration_s: 20\ndownlink: {rate_bps: 8e6}\n");
  EXPECT_TRUE(r.refused);
  EXPECT_TRUE(r.records.empty());
  EXPECT_THROW(ReportMetrics(r), InsufficientDataError);
}

TEST(SimTest, MeasuredCapacityOverridesLinkRate) {
  const SimReport r = RunText(
      "game: TR\nduration_s: 5\nmeasured_capacity_bps: 15e6\n"
      "downlink: {rate_bps: 100e6}\n");
  ASSERT_FALSE(r.records.empty());
  EXPECT_EQ(r.records.front().resolution_height, 720);
}

TEST(SimTest, SameSeedSameReport) {
  std::ostringstream a, b;
  WriteSimReportCsv(a, RunText(kShortUncongested));
  WriteSimReportCsv(b, RunText(kShortUncongested));
  EXPECT_EQ(a.str(), b.str());
}

TEST(SimTest, RemovingLimitAt720pStepsUpQuickly) {
  const SimReport r = RunNamed("raise_15");
  double upswitch = -1.0;
  for (const ConfigChange& c : r.changes)
    if (c.t >= 150.0 && c.to.resolution == Resolution::k1080p) upswitch = c.t;
  ASSERT_GT(upswitch, 0.0);
  EXPECT_LT(upswitch - 150.0, 30.0);
  EXPECT_EQ(r.records.back().resolution_height, 1080);
}

TEST(SimTest, RemovingLimitAt1080pRaisesLoadOnly) {
  const SimReport r = RunNamed("raise_20");
  EXPECT_TRUE(r.changes.empty());
  double before = 0.0, after = 0.0;
  for (const SecondRecord& rec : r.records) {
    EXPECT_EQ(rec.resolution_height, 1080);
    if (rec.second >= 100 && rec.second < 150) before += rec.delivered_mbps / 50.0;
    if (rec.second >= 250) after += rec.delivered_mbps / 50.0;
  }
  EXPECT_LT(before, 20.0);
  EXPECT_GT(after, before * 1.3);
}

TEST(SimTest, ConstantCapacityConvergesToSteady) {
  for (double rate : {13e6, 18e6, 25e6}) {
    const SimReport r = RunText(
        "game: TR\nduration_s: 300\n"
        "downlink: {rate_bps: " + std::to_string(rate) +
        ", queue_cap_bytes: 8192, burst_bytes: 10240}\n");
    ASSERT_FALSE(r.refused) << rate;
    EXPECT_EQ(r.records.back().phase, Phase::kSteady) << rate;
  }
}

TEST(SimTest, JitterBufferShrinksWithResolution) {
  const double jb720 = ReportMetrics(RunNamed("uncongested_720p")).at("mean_jitter_buffer_ms");
  const double jb1080 = ReportMetrics(RunNamed("uncongested")).at("mean_jitter_buffer_ms");
  const double jb4k = ReportMetrics(RunNamed("uncongested_4k")).at("mean_jitter_buffer_ms");
  EXPECT_GT(jb720, jb1080);
  EXPECT_GT(jb1080, jb4k);
  EXPECT_GE(jb4k, 20.0);
}

TEST(ReportIoTest, CsvRoundTrip) {
  const SimReport r = RunText(kShortUncongested);
  std::ostringstream out;
  WriteSimReportCsv(out, r);
  std::istringstream in(out.str());
  const SimReport back = ReadSimReportCsv(in);
  ASSERT_EQ(back.records.size(), r.records.size());
  std::ostringstream again;
  WriteSimReportCsv(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(ReportIoTest, RefusedMarkerSurvives) {
  SimReport r;
  r.refused = true;
  std::ostringstream out;
  WriteSimReportCsv(out, r);
  std::istringstream in(out.str());
  EXPECT_TRUE(ReadSimReportCsv(in).refused);
}

TEST(ReportIoTest, RejectsMalformedReports) {
  std::istringstream no_header("second,x\n");
  EXPECT_THROW(ReadSimReportCsv(no_header), ParseError);
  std::istringstream bad_cell(std::string(kSimReportHeader) +
                              "\nsecond,resolution_height,fps,rtt_s,packets_lost,"
                              "jitter_buffer_s,delivered_mbps,target_bps,encoder_bps,phase\n"
                              "0,1080,x,,0,0,0,0,0,steady\n");
  try {
    ReadSimReportCsv(bad_cell);
    FAIL() << "no throw";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ReportIoTest, MetricsFromRecords) {
  SimReport r;
  r.records = {{0, 720, 60, 0.010, 0, 0.030, 10.0},
               {1, 1080, 50, 0.020, 4, 0.020, 20.0},
               {2, 1080, 40, std::nullopt, 0, 0.025, 30.0}};
  const MetricMap m = ReportMetrics(r);
  EXPECT_DOUBLE_EQ(m.at("mean_fps"), 50.0);
  EXPECT_DOUBLE_EQ(m.at("min_fps"), 40.0);
  EXPECT_DOUBLE_EQ(m.at("mean_rtt_ms"), 15.0);
  EXPECT_DOUBLE_EQ(m.at("p95_rtt_ms"), 20.0);
  EXPECT_DOUBLE_EQ(m.at("total_packets_lost"), 4.0);
  EXPECT_DOUBLE_EQ(m.at("mean_jitter_buffer_ms"), 25.0);
  EXPECT_DOUBLE_EQ(m.at("mean_delivered_mbps"), 20.0);
  EXPECT_DOUBLE_EQ(m.at("final_resolution_height"), 1080.0);
  EXPECT_DOUBLE_EQ(m.at("resolution_changes"), 1.0);
}

TEST(ReportIoTest, StatsCsvRoundTrip) {
  TrafficStats s;
  s.packet_count = 10;
  s.duration_s = 1.5;
  s.mean_pkt_size = 1118.01;
  s.mean_ipt_ms = 0.34;
  s.load_mbps = 25.6;
  s.min_pkt = 73;
  s.max_pkt = 1198;
  std::ostringstream out;
  WriteStatsCsv(out, {{"a", s}, {"b", s}});
  std::istringstream in(out.str());
  const auto rows = ReadStatsCsv(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].label, "b");
  EXPECT_DOUBLE_EQ(rows[0].stats.load_mbps, 25.6);
  EXPECT_EQ(rows[0].stats.max_pkt, 1198);
}

TEST(CompareTest, TargetsAndBands) {
  const auto targets = ParseTargets(
      "targets:\n"
      "  - {key: load_mbps, target: 25.6, rel_tol: 0.05}\n"
      "  - {key: mean_rtt_ms, min: 10, max: 15}\n");
  const ComparisonReport pass = Compare({{"load_mbps", 26.5}, {"mean_rtt_ms", 11.0}}, targets);
  EXPECT_TRUE(pass.pass);
  const ComparisonReport fail = Compare({{"load_mbps", 27.0}, {"mean_rtt_ms", 11.0}}, targets);
  EXPECT_FALSE(fail.pass);
  EXPECT_FALSE(fail.results[0].pass);
  EXPECT_TRUE(fail.results[1].pass);
  std::ostringstream out;
  WriteComparisonCsv(out, fail);
  EXPECT_NE(out.str().find("overall,,,,,,fail"), std::string::npos);
}

TEST(CompareTest, Errors) {
  EXPECT_THROW(ParseTargets("targets: []\n"), ConfigError);
  EXPECT_THROW(ParseTargets("targets:\n  - {key: a}\n"), ConfigError);
  EXPECT_THROW(ParseTargets("targets:\n  - {key: a, target: 1, min: 0}\n"), ConfigError);
  EXPECT_THROW(ParseTargets("targets:\n  - {key: a, min: 2, max: 1}\n"), ConfigError);
  const auto t = ParseTargets("targets:\n  - {key: a, target: 1}\n");
  EXPECT_THROW(Compare({{"b", 1.0}}, t), std::invalid_argument);
  EXPECT_THROW(Compare({}, t), InsufficientDataError);
}

}  // namespace
}  // namespace stadia
