#include <cmath>
#include <map>

#include "gtest/gtest.h"
#include "stadia/analyzer.h"
#include "stadia/distribution.h"
#include "stadia/fit.h"
#include "stadia/generator.h"
#include "stadia/presets.h"

namespace stadia {
namespace {

const PresetLibrary& Presets() {
  static const PresetLibrary lib = PresetLibrary::Load(DefaultPresetDir());
  return lib;
}

const GeneratorParams& Tr1080() { return *Presets().FindByName("tr_1080p_vp9"); }

TEST(DistributionTest, NormalizesAndMerges) {
  const auto d = DiscreteDistribution::FromWeights({{5, 1}, {1, 2}, {5, 1}});
  ASSERT_EQ(d.entries().size(), 2u);
  EXPECT_DOUBLE_EQ(d.Probability(5), 0.5);
  EXPECT_DOUBLE_EQ(d.Mean(), 3.0);
  EXPECT_DOUBLE_EQ(d.Variance(), 4.0);
  EXPECT_EQ(d.Mode(), 1);
  EXPECT_DOUBLE_EQ(d.TailAtLeast(5), 0.5);
  EXPECT_THROW(DiscreteDistribution::FromWeights({}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution::FromWeights({{1, -1}, {2, 2}}), std::invalid_argument);
  EXPECT_THROW(DiscreteDistribution::FromWeights({{1, 0}}), std::invalid_argument);
}

TEST(DistributionTest, SamplingMatchesWeights) {
  const auto d = DiscreteDistribution::FromWeights({{1, 0.2}, {2, 0.8}});
  Rng rng(3);
  int ones = 0;
  constexpr int kN = 100000;
  for (int i = 0; i < kN; ++i) ones += d.Sample(rng) == 1;
  EXPECT_NEAR(ones / static_cast<double>(kN), 0.2, 0.01);
}

TEST(DistributionTest, ScalingKeepsMeanExact) {
  const auto d = DiscreteDistribution::FromWeights({{1194, 0.9}, {73, 0.1}});
  const auto s = d.Scaled(0.83, 1);
  EXPECT_NEAR(s.Mean(), d.Mean() * 0.83, 1e-9);
  EXPECT_GE(s.Min(), 1);
}

TEST(DistributionTest, TotalVariation) {
  const auto a = DiscreteDistribution::FromWeights({{1, 0.5}, {2, 0.5}});
  const auto b = DiscreteDistribution::FromWeights({{2, 0.5}, {3, 0.5}});
  EXPECT_DOUBLE_EQ(TotalVariationDistance(a, a), 0.0);
  EXPECT_DOUBLE_EQ(TotalVariationDistance(a, b), 0.5);
}

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.NextDouble();
    EXPECT_EQ(x, b.NextDouble());
    differs = differs || x != c.NextDouble();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_TRUE(differs);
}

TEST(GenerateFrameTest, LaysOutGroups) {
  GeneratorParams p;
  p.group_count_dist = DiscreteDistribution::PointMass(3);
  p.group_size_dist = DiscreteDistribution::PointMass(4);
  Rng rng(1);
  const auto pkts = GenerateFrame(p, rng, 1.0, 7);
  ASSERT_EQ(pkts.size(), 12u);
  EXPECT_DOUBLE_EQ(pkts[0].t, 1.0);
  EXPECT_NEAR(pkts[1].t - pkts[0].t, 0.0001, 1e-12);
  EXPECT_NEAR(pkts[4].t - pkts[0].t, 0.002, 1e-12);
  EXPECT_TRUE(pkts[3].group_end);
  EXPECT_FALSE(pkts[3].frame_end);
  EXPECT_TRUE(pkts.back().frame_end);
  for (const auto& pk : pkts) EXPECT_EQ(pk.frame_id, 7);
}

TEST(GenerateSessionTest, FrameCountAndOrdering) {
  const Session s = GenerateSession(Tr1080(), 2.0);
  int frame_ends = 0;
  for (size_t i = 0; i < s.packets.size(); ++i) {
    if (i > 0) EXPECT_LE(s.packets[i - 1].t, s.packets[i].t);
    frame_ends += s.packets[i].frame_end && s.packets[i].direction == Direction::kDownlink;
  }
  EXPECT_EQ(frame_ends, 120);
}

TEST(GenerateSessionTest, DeterministicInSeed) {
  GeneratorParams p = Tr1080();
  const Trace a = GenerateSessionTrace(p, 5.0);
  const Trace b = GenerateSessionTrace(p, 5.0);
  EXPECT_EQ(a.records, b.records);
  p.seed = 99;
  EXPECT_NE(GenerateSessionTrace(p, 5.0).records, a.records);
}

TEST(GenerateSessionTest, VideoLoadMatchesProductOfMeans) {
  const GeneratorParams& p = Tr1080();
  // Independent oracle: frames/s x groups x packets x bytes.
  const double oracle = p.frame_rate * p.group_count_dist.Mean() *
                        p.group_size_dist.Mean() * p.video_size_dist.Mean() * 8.0;
  EXPECT_NEAR(p.ExpectedVideoLoadBps(), oracle, 1e-6);
  const Session s = GenerateSession(p, 120.0);
  const Trace video = SessionTrace(s, Direction::kDownlink, {StreamKind::kVideo});
  EXPECT_NEAR(SummaryStats(video).load_mbps * 1e6, oracle, 0.01 * oracle);
}

TEST(GenerateSessionTest, SidecarRates) {
  const GeneratorParams& p = Tr1080();
  const Session s = GenerateSession(p, 300.0);
  const Trace stun = SessionTrace(s, Direction::kDownlink, {StreamKind::kStun});
  EXPECT_NEAR(SummaryStats(stun).mean_ipt_ms, p.stun.period_ms, 0.03 * p.stun.period_ms);
  EXPECT_EQ(stun.meta.protocol, Protocol::kStun);
  const Trace dtls = SessionTrace(s, Direction::kUplink, {StreamKind::kDtls});
  EXPECT_NEAR(SummaryStats(dtls).mean_ipt_ms, p.dtls_uplink.mean_ipt_ms,
              0.05 * p.dtls_uplink.mean_ipt_ms);
  const Trace rtcp = SessionTrace(s, Direction::kUplink, {StreamKind::kRtcp});
  EXPECT_NEAR(SummaryStats(rtcp).mean_ipt_ms, p.rtcp_uplink.mean_ipt_ms,
              0.05 * p.rtcp_uplink.mean_ipt_ms);
  const Trace audio = SessionTrace(s, Direction::kDownlink, {StreamKind::kAudio});
  EXPECT_NEAR(SummaryStats(audio).mean_ipt_ms, 20.0, 0.01);
}

TEST(GeneratorParamsTest, ValidateRejectsBadValues) {
  GeneratorParams p;
  EXPECT_NO_THROW(p.Validate());
  p.frame_rate = 0.0;
  EXPECT_THROW(p.Validate(), std::invalid_argument);
  p = GeneratorParams();
  p.group_size_dist = DiscreteDistribution::PointMass(0);
  EXPECT_THROW(p.Validate(), std::invalid_argument);
  p = GeneratorParams();
  p.video_size_dist = DiscreteDistribution::PointMass(70000);
  EXPECT_THROW(p.Validate(), std::invalid_argument);
}

TEST(ScaleToRateTest, HitsTargetBothWays) {
  const GeneratorParams& p = Tr1080();
  for (double target : {8.0, 17.0, 25.0, 40.0}) {
    const GeneratorParams s = ScaleToRate(p, target);
    EXPECT_NEAR(s.ExpectedVideoLoadBps() / 1e6, target, 0.005 * target) << target;
    EXPECT_NO_THROW(s.Validate());
  }
  // Reductions shrink packets a little; increases never grow them.
  EXPECT_LT(ScaleToRate(p, 10.0).video_size_dist.Mean(), p.video_size_dist.Mean());
  EXPECT_DOUBLE_EQ(ScaleToRate(p, 40.0).video_size_dist.Mean(), p.video_size_dist.Mean());
  EXPECT_THROW(ScaleToRate(p, 0.1), ScaleError);
}

TEST(PresetLibraryTest, ShipsEveryPreset) {
  EXPECT_EQ(Presets().presets().size(), 7u);
  EXPECT_NE(Presets().Find(Game::kTombRaider, Resolution::k4K, Codec::kVp9), nullptr);
  EXPECT_EQ(Presets().Find(Game::kThumper, Resolution::k4K, Codec::kVp9), nullptr);
  const GeneratorParams th4k =
      Presets().Resolve(Game::kThumper, Resolution::k4K, Codec::kVp9, 30.0);
  EXPECT_NEAR(th4k.ExpectedVideoLoadBps() / 1e6, 30.0, 0.15);
  EXPECT_EQ(th4k.resolution, Resolution::k4K);
}

TEST(PresetLibraryTest, YamlRoundTrip) {
  const GeneratorParams& p = Tr1080();
  const GeneratorParams back = ParseGeneratorParams(YAML::Load(GeneratorParamsToYaml(p)));
  EXPECT_EQ(back.name, p.name);
  EXPECT_NEAR(back.ExpectedVideoLoadBps(), p.ExpectedVideoLoadBps(), 1e-3);
  EXPECT_DOUBLE_EQ(back.stun.period_ms, p.stun.period_ms);
  EXPECT_DOUBLE_EQ(TotalVariationDistance(back.video_size_dist, p.video_size_dist), 0.0);
}

TEST(PresetLibraryTest, RejectsBadParamsFile) {
  EXPECT_THROW(ParseGeneratorParams(YAML::Load("game: XX\n")), ConfigError);
  EXPECT_THROW(ParseGeneratorParams(YAML::Load(
                   "video: {packet_size: {1194: -1}}\n")),
               std::exception);
}

TEST(FitTest, RecoversGeneratingModel) {
  const GeneratorParams& p = Tr1080();
  FitOptions options;
  options.base = p;
  const FitResult fit = FitGeneratorParams(GenerateSessionTrace(p, 60.0), true, options);
  EXPECT_NEAR(fit.period_ms, 1000.0 / 60.0, 0.02);
  EXPECT_DOUBLE_EQ(fit.params.frame_rate, 60.0);
  EXPECT_NEAR(fit.params.group_count_dist.Mean(), p.group_count_dist.Mean(), 0.05);
  EXPECT_NEAR(fit.params.group_size_dist.Mean(), p.group_size_dist.Mean(), 0.05);
  EXPECT_LT(TotalVariationDistance(fit.params.video_size_dist, p.video_size_dist), 0.02);
  EXPECT_NEAR(static_cast<double>(fit.frames), 3600.0, 3.0);
  EXPECT_GT(fit.audio_packets, 2900u);
}

TEST(FitTest, RejectsShortOrAperiodicTraces) {
  EXPECT_THROW(FitGeneratorParams(GenerateSessionTrace(Tr1080(), 5.0), true), FitError);
  // Poisson arrivals carry no frame period.
  Trace t;
  Rng rng(5);
  Micros now = 0;
  for (int i = 0; i < 20000; ++i) {
    const Micros gap = static_cast<Micros>(rng.Exponential(1000.0));
    now += gap;
    t.records.push_back({now, i == 0 ? 0 : gap, 1194});
  }
  EXPECT_THROW(FitGeneratorParams(t, false), FitError);
}

TEST(FitTest, PhaseConcentrationBounds) {
  std::vector<Micros> periodic, spread;
  for (int i = 0; i < 1000; ++i) {
    periodic.push_back(i * 16667);
    spread.push_back(i * 16667 + (i * 7919) % 16667);
  }
  EXPECT_GT(PhaseConcentration(periodic, 16667.0, 64), 0.9);
  EXPECT_LT(PhaseConcentration(spread, 16667.0, 64), 0.05);
}

}  // namespace
}  // namespace stadia
