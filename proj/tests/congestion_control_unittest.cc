#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "stadia/congestion_control.h"

namespace stadia {
namespace {

TEST(LossRateTest, ModerateLossHolds) {
  EXPECT_EQ(UpdateLossRate(10e6, 0.05), 10e6);
  EXPECT_EQ(UpdateLossRate(10e6, 0.02), 10e6);
  EXPECT_EQ(UpdateLossRate(10e6, 0.1), 10e6);
}

TEST(LossRateTest, LowLossIncreases) {
  EXPECT_EQ(UpdateLossRate(10e6, 0.0), 10e6 * 1.05);
  EXPECT_EQ(UpdateLossRate(10e6, 0.019), 10e6 * 1.05);
}

TEST(LossRateTest, HighLossDecreasesByHalfTheLoss) {
  EXPECT_EQ(UpdateLossRate(10e6, 0.2), 9e6);
  EXPECT_EQ(UpdateLossRate(10e6, 1.0), 5e6);
}

TEST(LossRateTest, ClampsAndValidates) {
  GccConfig c;
  EXPECT_EQ(UpdateLossRate(c.as_max_bps, 0.0, c), c.as_max_bps);
  EXPECT_EQ(UpdateLossRate(c.as_min_bps, 1.0, c), c.as_min_bps);
  EXPECT_THROW(UpdateLossRate(10e6, -0.1), std::invalid_argument);
  EXPECT_THROW(UpdateLossRate(10e6, 1.5), std::invalid_argument);
  EXPECT_THROW(UpdateLossRate(10e6, std::nan("")), std::invalid_argument);
}

TEST(LossRateTest, ControllerCarriesState) {
  LossBasedController ctl(GccConfig{}, 10e6);
  ctl.Update(0.2);
  EXPECT_EQ(ctl.as_bps(), 9e6);
  ctl.Update(0.05);
  EXPECT_EQ(ctl.as_bps(), 9e6);
  EXPECT_EQ(LossBasedController(GccConfig{}).as_bps(), GccConfig{}.as_max_bps);
}

TEST(TargetRateTest, IsExactMinimum) {
  EXPECT_EQ(TargetRate(3e6, 4e6), 3e6);
  EXPECT_EQ(TargetRate(4e6, 3e6), 3e6);
  EXPECT_EQ(TargetRate(5e6, 5e6), 5e6);
}

TEST(NotifyTest, ChangeOrInterval) {
  EXPECT_TRUE(ShouldNotify(10e6, 10.31e6, 0.0));
  EXPECT_TRUE(ShouldNotify(10e6, 9.69e6, 0.0));
  EXPECT_FALSE(ShouldNotify(10e6, 10.3e6, 0.999));
  EXPECT_TRUE(ShouldNotify(10e6, 10e6, 1.0));
}

TEST(ReceiveRateWindowTest, AveragesOverTrailingWindow) {
  ReceiveRateWindow w(0.5);
  for (int i = 0; i < 100; ++i) w.Add(i * 0.01, 1250);  // 1 Mbit/s
  EXPECT_NEAR(w.RateBps(0.99), 1e6, 0.03e6);
  // Packets at 0.81..0.99 remain in (0.805, 1.305].
  EXPECT_NEAR(w.RateBps(1.305), 19 * 1250 * 8.0 / 0.5, 1e-6);
  EXPECT_EQ(w.RateBps(5.0), 0.0);
}

TEST(ReceiveRateWindowTest, UsesElapsedTimeBeforeFullWindow) {
  ReceiveRateWindow w(0.5);
  w.Add(0.0, 1000);
  w.Add(0.1, 1000);
  EXPECT_NEAR(w.RateBps(0.1), 2000 * 8 / 0.1, 1e-6);
}

FrameSample Sample(double send_ms, double recv_ms) {
  return {send_ms / 1000.0, recv_ms / 1000.0};
}

TEST(DelayBasedEstimatorTest, GrowthIsPerSecondNotPerFrame) {
  GccConfig c;
  for (int frames_per_s : {30, 60, 120}) {
    DelayBasedEstimator est(c, 10e6);
    for (int i = 0; i <= frames_per_s; ++i)
      est.Update(Sample(10, 10), 100e6, static_cast<double>(i) / frames_per_s);
    EXPECT_NEAR(est.ar_bps(), 10e6 * 1.05, 1.0) << frames_per_s;
    EXPECT_EQ(est.usage(), BandwidthUsage::kNormal);
  }
}

TEST(DelayBasedEstimatorTest, PerUpdateGrowthWhenPeriodIsZero) {
  GccConfig c;
  c.ar_increase_period_s = 0.0;
  DelayBasedEstimator est(c, 10e6);
  est.Update(Sample(10, 10), 100e6, 0.0);
  est.Update(Sample(10, 10), 100e6, 0.0);
  EXPECT_NEAR(est.ar_bps(), 10e6 * 1.05 * 1.05, 1e-6);
}

TEST(DelayBasedEstimatorTest, CappedByReceiveRate) {
  DelayBasedEstimator est(GccConfig{}, 40e6);
  est.Update(Sample(10, 10), 10e6, 0.0);
  EXPECT_DOUBLE_EQ(est.ar_bps(), 15e6);
}

TEST(DelayBasedEstimatorTest, OveruseBacksOffToReceiveRate) {
  DelayBasedEstimator est(GccConfig{}, 40e6);
  double t = 0.0;
  // Frames stretch by 20 ms in the network: the smoothed gradient crosses
  // the threshold on the first sample (0.1 x 20 ms = 2 ms).
  est.Update(Sample(10, 30), 20e6, t);
  EXPECT_EQ(est.usage(), BandwidthUsage::kOveruse);
  EXPECT_DOUBLE_EQ(est.ar_bps(), 0.85 * 20e6);
  EXPECT_NEAR(est.smoothed_gradient_ms(), 2.0, 1e-9);
  // Frames arriving compressed flip the estimate to underuse.
  for (int i = 0; i < 50; ++i) est.Update(Sample(10, 0), 20e6, t += 0.0167);
  EXPECT_EQ(est.usage(), BandwidthUsage::kUnderuse);
}

TEST(DelayBasedEstimatorTest, NeverBelowFloor) {
  GccConfig c;
  DelayBasedEstimator est(c, 1e6);
  est.Update(Sample(0, 50), 0.0, 0.0);
  EXPECT_EQ(est.ar_bps(), c.ar_min_bps);
}

TEST(ControllerTraceTest, WritesCsv) {
  std::ostringstream out;
  WriteControllerTraceCsv(out, {{1.5, 2e6, 3e6, 2e6}});
  EXPECT_EQ(out.str(), "t_s,ar_bps,as_bps,target_bps\n1.500000,2000000,3000000,2000000\n");
  EXPECT_EQ(ToString(BandwidthUsage::kOveruse), "overuse");
}

}  // namespace
}  // namespace stadia
