// End-to-end acceptance gate for the checks that need no external data.
// Prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stadia/analyzer.h"
#include "stadia/congestion_control.h"
#include "stadia/fit.h"
#include "stadia/generator.h"
#include "stadia/link_emulator.h"
#include "stadia/presets.h"
#include "stadia/report_io.h"
#include "stadia/sim.h"

namespace stadia {
namespace {

// Tolerances.
constexpr double kFitPeriodTol = 0.02;
constexpr double kFitLoadTol = 0.05;
constexpr double kFitTvMax = 0.05;
constexpr double kFitDurationS = 120.0;
constexpr double kLoadDurationS = 600.0;
constexpr double kTrLoadMbps = 25.60;
constexpr double kThLoadMbps = 18.33;
constexpr double kSpLoadMbps = 1.87;
constexpr double kVideoGameLoadTol = 0.05;
constexpr double kSpLoadTol = 0.10;
constexpr double kAudioMinKbps = 110.0;
constexpr double kAudioMaxKbps = 150.0;
constexpr double kShaperRateTol = 0.01;
constexpr double kSerializationS = 0.796e-3;
constexpr double kSerializationTolS = 1e-6;
constexpr double kLossSpikeWindowS = 2.0;
constexpr double kSteadyLoadShare = 0.95;
constexpr double kScenarioRuntimeS = 60.0;
constexpr double kStartupLoadMaxMbps = 13.5;
constexpr double kRttMeanMinMs = 10.0;
constexpr double kRttMeanMaxMs = 15.0;
constexpr double kRttP95MaxMs = 16.67;

const std::filesystem::path kDataDir = STADIA_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

Scenario LoadNamed(const std::string& name) {
  return LoadScenario(kDataDir / "scenarios" / (name + ".yaml"));
}

double RelErr(double value, double target) {
  return std::abs(value - target) / std::abs(target);
}

// Criterion 3: fit recovers the generating model.
Outcome FitRoundTrip(const PresetLibrary& presets) {
  Outcome o;
  for (const GeneratorParams& p : presets.presets()) {
    const Trace trace = GenerateSessionTrace(p, kFitDurationS);
    FitOptions options;
    options.base = p;
    const FitResult fit = FitGeneratorParams(trace, p.audio.enabled, options);
    const double period_err = RelErr(fit.period_ms, 1000.0 / p.frame_rate);
    const double load_err =
        RelErr(fit.params.ExpectedVideoLoadBps(), p.ExpectedVideoLoadBps());
    const double tv =
        TotalVariationDistance(fit.params.video_size_dist, p.video_size_dist);
    o.Check(period_err <= kFitPeriodTol && load_err <= kFitLoadTol && tv < kFitTvMax,
            p.name + Fmt(" period %.4f load %.4f tv %.4f", period_err, load_err, tv));
  }
  return o;
}

// Criterion 4: preset loads over a long run.
Outcome GeneratorLoads(const PresetLibrary& presets) {
  Outcome o;
  struct Case {
    const char* name;
    double target;
    double tol;
  };
  for (const Case& c : {Case{"tr_1080p_vp9", kTrLoadMbps, kVideoGameLoadTol},
                        Case{"th_1080p_vp9", kThLoadMbps, kVideoGameLoadTol},
                        Case{"sp_1080p_vp9", kSpLoadMbps, kSpLoadTol}}) {
    const GeneratorParams* p = presets.FindByName(c.name);
    if (!p) {
      o.Check(false, std::string(c.name) + " missing");
      continue;
    }
    const double load = SummaryStats(GenerateSessionTrace(*p, kLoadDurationS)).load_mbps;
    o.Check(RelErr(load, c.target) <= c.tol,
            std::string(c.name) + Fmt(" %.3f Mbit/s vs %.2f", load, c.target));
  }
  const GeneratorParams* tr = presets.FindByName("tr_1080p_vp9");
  if (tr) {
    const Session s = GenerateSession(*tr, kLoadDurationS);
    const double kbps =
        SummaryStats(SessionTrace(s, Direction::kDownlink, {StreamKind::kAudio}))
            .load_mbps * 1000.0;
    o.Check(kbps >= kAudioMinKbps && kbps <= kAudioMaxKbps,
            Fmt("audio %.1f kbit/s", kbps));
  }
  return o;
}

// Criterion 5: exact controller values.
Outcome ControllerTruths() {
  Outcome o;
  const GccConfig c;
  o.Check(UpdateLossRate(10e6, 0.05, c) == 10e6, "loss 0.05 holds");
  o.Check(UpdateLossRate(10e6, 0.0, c) > 10e6, "loss 0 increases");
  o.Check(UpdateLossRate(10e6, 0.2, c) == 9e6,
          Fmt("loss 0.2 gives %.1f", UpdateLossRate(10e6, 0.2, c)));
  o.Check(TargetRate(7e6, 9e6) == 7e6 && TargetRate(9e6, 7e6) == 7e6, "target is min");
  o.Check(ShouldNotify(10e6, 10.31e6, 0.1, c), "4% change notifies");
  o.Check(!ShouldNotify(10e6, 10.29e6, 0.1, c), "2.9% change waits");
  o.Check(ShouldNotify(10e6, 10e6, 1.0, c), "1 s elapsed notifies");
  return o;
}

// Criterion 6: shaper throughput and serialization delay.
Outcome ShaperTruths() {
  Outcome o;
  constexpr double kRate = 12e6;
  constexpr int kSize = 1194;
  LinkConfig config;
  config.schedule = CapacitySchedule::Constant(kRate);
  config.queue_cap_bytes = 64 * 1024;
  TokenBucketLink link(config);
  const double interval = kSize * 8.0 / (2.0 * kRate);
  double last_depart = 0.0;
  constexpr double kRunS = 60.0;
  for (double t = 0.0; t < kRunS; t += interval) {
    const AdmitOutcome a = link.Admit(t, kSize);
    if (!a.dropped) last_depart = a.depart;
  }
  const double rate = (link.delivered_bytes() - config.burst_bytes) * 8.0 / last_depart;
  o.Check(RelErr(rate, kRate) <= kShaperRateTol, Fmt("delivered %.0f bit/s", rate));

  LinkConfig empty;
  empty.schedule = CapacitySchedule::Constant(kRate);
  empty.burst_bytes = 0;
  TokenBucketLink fresh(empty);
  const double depart = fresh.Admit(0.0, kSize).depart;
  o.Check(std::abs(depart - kSerializationS) <= kSerializationTolS,
          Fmt("serialization %.6f ms", depart * 1000.0));
  return o;
}

struct TimedRun {
  SimReport report;
  double seconds = 0.0;
};

TimedRun Run(const Scenario& s, const PresetLibrary& presets) {
  const auto start = std::chrono::steady_clock::now();
  TimedRun r{RunScenario(s, presets), 0.0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

// Time from the first downswitch to the last resolution change.
double TransientLength(const SimReport& r) {
  if (r.changes.empty()) return 0.0;
  return r.changes.back().t - r.changes.front().t;
}

// Criterion 7: response to a capacity drop.
Outcome DropResponse(const PresetLibrary& presets) {
  Outcome o;
  constexpr double kDropAt = 120.0;
  double transient_10 = 0.0, transient_30 = 0.0;
  for (int limit : {10, 15, 20, 30}) {
    const std::string name = "drop_" + std::to_string(limit);
    const TimedRun run = Run(LoadNamed(name), presets);
    const SimReport& r = run.report;
    const double limit_mbps = limit;

    int spike = 0;
    for (const SecondRecord& rec : r.records)
      if (rec.second >= kDropAt && rec.second < kDropAt + kLossSpikeWindowS)
        spike += rec.packets_lost;
    o.Check(spike > 0, name + Fmt(" loss %.0f in 2 s", spike));

    bool downswitch = false;
    for (const ConfigChange& c : r.changes)
      if (c.t >= kDropAt && FrameHeight(c.to.resolution) < FrameHeight(c.from.resolution))
        downswitch = true;
    o.Check(downswitch, name + " downswitch");

    // Trailing run of steady seconds.
    double load = 0.0;
    int steady = 0;
    for (auto it = r.records.rbegin(); it != r.records.rend(); ++it) {
      if (it->phase != Phase::kSteady) break;
      load += it->delivered_mbps;
      ++steady;
    }
    const double mean = steady ? load / steady : 0.0;
    o.Check(steady > 0 && mean <= kSteadyLoadShare * limit_mbps,
            name + Fmt(" steady %.0f s at %.2f Mbit/s", steady, mean));

    const int want = limit >= 30 ? 1080 : limit <= 15 ? 720 : 0;
    const int final_height = r.records.empty() ? 0 : r.records.back().resolution_height;
    if (want) o.Check(final_height == want, name + Fmt(" final %.0fp", final_height));

    o.Check(run.seconds < kScenarioRuntimeS, name + Fmt(" ran %.2f s", run.seconds));
    if (limit == 10) transient_10 = TransientLength(r);
    if (limit == 30) transient_30 = TransientLength(r);
  }
  o.Check(transient_30 < transient_10,
          Fmt("transient 30: %.0f s, 10: %.0f s", transient_30, transient_10));
  return o;
}

// Criterion 8: startup decisions.
Outcome StartupPolicy(const PresetLibrary& presets) {
  Outcome o;
  for (const char* name : {"start_5", "start_10"}) {
    const SimReport r = RunScenario(LoadNamed(name), presets);
    o.Check(r.refused, std::string(name) + " refused");
  }
  const SimReport r15 = RunScenario(LoadNamed("start_15"), presets);
  if (r15.refused || r15.records.empty()) {
    o.Check(false, "start_15 refused");
  } else {
    const MetricMap m = ReportMetrics(r15);
    o.Check(m.at("final_resolution_height") == 720 &&
                m.at("mean_delivered_mbps") <= kStartupLoadMaxMbps,
            Fmt("start_15 final %.0fp, mean %.2f Mbit/s",
                m.at("final_resolution_height"), m.at("mean_delivered_mbps")));
  }
  const SimReport r20 = RunScenario(LoadNamed("start_20"), presets);
  bool all_1080 = !r20.refused && !r20.records.empty();
  for (const SecondRecord& rec : r20.records) all_1080 = all_1080 && rec.resolution_height == 1080;
  o.Check(all_1080, "start_20 holds 1080p");
  return o;
}

// Criterion 9: latency on an uncongested link.
Outcome Latency(const PresetLibrary& presets) {
  Outcome o;
  const MetricMap m = ReportMetrics(RunScenario(LoadNamed("uncongested"), presets));
  const double mean = m.at("mean_rtt_ms");
  const double p95 = m.at("p95_rtt_ms");
  o.Check(mean >= kRttMeanMinMs && mean <= kRttMeanMaxMs && p95 < kRttP95MaxMs,
          Fmt("rtt mean %.2f p95 %.2f ms", mean, p95));
  double jb[3];
  const char* names[3] = {"uncongested_720p", "uncongested", "uncongested_4k"};
  for (int i = 0; i < 3; ++i)
    jb[i] = ReportMetrics(RunScenario(LoadNamed(names[i]), presets)).at("mean_jitter_buffer_ms");
  o.Check(jb[0] > jb[1] && jb[1] > jb[2],
          Fmt("jitter buffer 720p %.2f > 1080p %.2f > 4K %.2f ms", jb[0], jb[1], jb[2]));
  return o;
}

// Criterion 10: same seed, same bytes.
Outcome Determinism(const PresetLibrary& presets) {
  Outcome o;
  for (const auto& entry : std::filesystem::directory_iterator(kDataDir / "scenarios")) {
    if (entry.path().extension() != ".yaml") continue;
    const Scenario s = LoadScenario(entry.path());
    std::ostringstream a, b;
    WriteSimReportCsv(a, RunScenario(s, presets));
    WriteSimReportCsv(b, RunScenario(s, presets));
    o.Check(a.str() == b.str(), entry.path().stem().string());
  }
  return o;
}

int RunAll() {
  const PresetLibrary presets = PresetLibrary::Load(DefaultPresetDir());
  struct Criterion {
    int id;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {3, [&] { return FitRoundTrip(presets); }},
      {4, [&] { return GeneratorLoads(presets); }},
      {5, [] { return ControllerTruths(); }},
      {6, [] { return ShaperTruths(); }},
      {7, [&] { return DropResponse(presets); }},
      {8, [&] { return StartupPolicy(presets); }},
      {9, [&] { return Latency(presets); }},
      {10, [&] { return Determinism(presets); }},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %d: %s  %s\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace stadia

int main() { return stadia::RunAll(); }
