// Command line front end: analyze, fit, generate, simulate, compare.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stadia/analyzer.h"
#include "stadia/compare.h"
#include "stadia/fit.h"
#include "stadia/generator.h"
#include "stadia/presets.h"
#include "stadia/report_io.h"
#include "stadia/sim.h"
#include "stadia/trace.h"

namespace {

using namespace stadia;

const std::vector<Column> kThreeColumns = {Column::kY1, Column::kY2, Column::kY3};

// Writes to `path`, or stdout for "" and "-".
template <typename Fn>
void WithOutput(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  write(out);
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string Label(const StreamMeta& m) {
  return ToString(m.dataset) + "_" + ToString(m.game) + "_" +
         ToString(m.protocol) + "_" + ToString(m.direction);
}

int Analyze(const std::string& input, const std::string& filter, bool json) {
  std::vector<StatsRow> rows;
  const std::filesystem::path path(input);
  if (path.extension() == ".yaml" || path.extension() == ".yml") {
    const Dataset dataset = LoadDataset(LoadManifest(path));
    std::optional<Game> game;
    std::optional<Protocol> proto;
    std::optional<Direction> dir;
    for (const std::string& f : SplitList(filter)) {
      // Each filter token names a game, protocol or direction.
      try { game = ParseGame(f); continue; } catch (const ConfigError&) {}
      try { proto = ParseProtocol(f); continue; } catch (const ConfigError&) {}
      dir = ParseDirection(f);
    }
    for (const Trace& t : dataset.traces()) {
      if (game && t.meta.game != *game) continue;
      if (proto && t.meta.protocol != *proto) continue;
      if (dir && t.meta.direction != *dir) continue;
      rows.push_back({Label(t.meta), SummaryStats(t)});
    }
  } else {
    const Trace t = LoadTraceFile(path, kThreeColumns, {});
    rows.push_back({path.stem().string(), SummaryStats(t)});
  }
  if (json)
    WriteStatsJson(std::cout, rows);
  else
    WriteStatsCsv(std::cout, rows);
  return 0;
}

int Fit(const std::string& trace_path, const std::string& out_path,
        const std::string& base_path, bool no_audio) {
  FitOptions options;
  StreamMeta meta;
  if (!base_path.empty()) {
    options.base = LoadGeneratorParams(base_path);
    meta.game = options.base.game;
    meta.codec = options.base.codec;
    meta.resolution = options.base.resolution;
  }
  const Trace trace = LoadTraceFile(trace_path, kThreeColumns, meta);
  const FitResult fit = FitGeneratorParams(trace, !no_audio, options);
  std::cerr << "period " << fit.period_ms << " ms, concentration "
            << fit.concentration << ", " << fit.frames << " frames, "
            << fit.groups << " groups\n";
  WithOutput(out_path, [&](std::ostream& o) { o << GeneratorParamsToYaml(fit.params); });
  return 0;
}

int Generate(const std::string& params_path, double duration, int64_t seed,
             bool seed_given, const std::string& out_path,
             const std::string& direction, const std::string& streams) {
  GeneratorParams params = LoadGeneratorParams(params_path);
  if (seed_given) params.seed = static_cast<uint64_t>(seed);
  std::vector<StreamKind> kinds;
  for (const std::string& s : SplitList(streams)) {
    if (s == "video") kinds.push_back(StreamKind::kVideo);
    else if (s == "audio") kinds.push_back(StreamKind::kAudio);
    else if (s == "stun") kinds.push_back(StreamKind::kStun);
    else if (s == "dtls") kinds.push_back(StreamKind::kDtls);
    else if (s == "rtcp") kinds.push_back(StreamKind::kRtcp);
    else throw ConfigError("unknown stream '" + s + "'");
  }
  const Session session = GenerateSession(params, duration);
  const Trace trace = SessionTrace(session, ParseDirection(direction), kinds);
  WithOutput(out_path, [&](std::ostream& o) { WriteTraceText(o, trace.records); });
  return 0;
}

int Simulate(const std::string& scenario_path, const std::string& out_path,
             const std::string& changes_path, const std::string& controller_path,
             bool json) {
  const Scenario scenario = LoadScenario(scenario_path);
  const SimReport report = RunScenario(scenario);
  WithOutput(out_path, [&](std::ostream& o) {
    if (json)
      WriteSimReportJson(o, report);
    else
      WriteSimReportCsv(o, report);
  });
  if (!changes_path.empty())
    WithOutput(changes_path, [&](std::ostream& o) { WriteChangeLogCsv(o, report.changes); });
  if (!controller_path.empty())
    WithOutput(controller_path,
               [&](std::ostream& o) { WriteControllerTraceCsv(o, report.controller_trace); });
  if (report.refused) std::cerr << "session refused at startup\n";
  return 0;
}

int CompareCmd(const std::string& input, const std::string& targets_path, bool json) {
  const ComparisonReport report =
      Compare(ReadMetricsFile(input), LoadTargets(targets_path));
  if (json)
    WriteComparisonJson(std::cout, report);
  else
    WriteComparisonCsv(std::cout, report);
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cloud gaming traffic analysis, generation and simulation"};
  app.require_subcommand(1);
  std::string format = "csv";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string input, filter, output, base, targets, changes, controller;
  std::string direction = "downlink", streams = "video,audio";
  double duration = 60.0;
  int64_t seed = 0;
  bool no_audio = false;

  auto* analyze = app.add_subcommand("analyze", "Summary statistics of a manifest or a trace file");
  analyze->add_option("input", input, "Dataset manifest (.yaml) or trace file")->required();
  analyze->add_option("--filter", filter, "Comma separated game, protocol and direction");

  auto* fit = app.add_subcommand("fit", "Fit generator params to a downlink RTP trace");
  fit->add_option("trace", input, "Trace file (Y1 Y2 Y3)")->required();
  fit->add_option("-o,--output", output, "Params file to write");
  fit->add_option("--base", base, "Params file supplying sidecar streams");
  fit->add_flag("--no-audio", no_audio, "Trace carries no audio packets");

  auto* generate = app.add_subcommand("generate", "Generate a packet trace from params");
  generate->add_option("params", input, "Params file")->required();
  generate->add_option("--duration", duration, "Seconds")->check(CLI::PositiveNumber);
  auto* seed_opt = generate->add_option("--seed", seed, "Overrides the params seed");
  generate->add_option("-o,--output", output, "Trace file to write");
  generate->add_option("--direction", direction, "downlink or uplink");
  generate->add_option("--streams", streams, "Comma separated: video,audio,stun,dtls,rtcp");

  auto* simulate = app.add_subcommand("simulate", "Run a scenario");
  simulate->add_option("scenario", input, "Scenario file")->required();
  simulate->add_option("-o,--output", output, "Report file to write");
  simulate->add_option("--changes", changes, "Resolution change log CSV");
  simulate->add_option("--controller-trace", controller, "Rate controller trace CSV");

  auto* compare = app.add_subcommand("compare", "Check a report or stats file against targets");
  compare->add_option("input", input, "Sim report or stats CSV")->required();
  compare->add_option("targets", targets, "Targets file")->required();

  CLI11_PARSE(app, argc, argv);
  const bool json = format == "json";
  try {
    if (*analyze) return Analyze(input, filter, json);
    if (*fit) return Fit(input, output, base, no_audio);
    if (*generate)
      return Generate(input, duration, seed, seed_opt->count() > 0, output,
                      direction, streams);
    if (*simulate) return Simulate(input, output, changes, controller, json);
    if (*compare) return CompareCmd(input, targets, json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
