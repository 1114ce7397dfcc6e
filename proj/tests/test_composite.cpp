#include <gtest/gtest.h>

#include <cmath>

#include "clm/composite.hpp"
#include "clm/signal.hpp"

using namespace clm;

TEST(Playback, PrefaultIsNominal) {
  const PlaybackParams p;
  EXPECT_EQ(playback_voltage(0.5, p), 1.0);
  EXPECT_EQ(playback_voltage(0.0, p), 1.0);
  EXPECT_EQ(playback_voltage(3.0, p), 1.0);
}

TEST(Playback, FaultWindowHoldsA) {
  const PlaybackParams p;
  EXPECT_EQ(playback_voltage(1.04, p), 0.8);
  EXPECT_EQ(playback_voltage(1.0, p), 0.8);
}

TEST(Playback, RecoveryBranchEndsAtOne) {
  const PlaybackParams p;
  EXPECT_NEAR(playback_voltage(2.0, p), 1.0, 1e-12);
  // Both sides of t = 1 + c agree.
  EXPECT_NEAR(playback_voltage(2.0 - 1e-12, p), playback_voltage(2.0 + 1e-12, p), 1e-12);
}

TEST(Playback, VerbatimDiscontinuityAtFaultEnd) {
  const PlaybackParams p;
  const double fault_end = 1.0 + p.b / 60.0;
  // Recovery branch value at its left endpoint: (1 - d)(b/60 - c)/(b/60 - c) + 1.
  const double branch2 = (1.0 - p.d) * (fault_end - p.c - 1.0) / (p.b / 60.0 - p.c) + 1.0;
  EXPECT_NEAR(branch2, 1.1, 1e-12);
  EXPECT_NEAR(playback_voltage(fault_end + 1e-9, p), 1.1, 1e-9);
  EXPECT_NEAR(std::abs(playback_voltage(fault_end + 1e-9, p) - p.a), 0.3, 1e-9);
}

TEST(Playback, LinearRampRisesFromA) {
  const PlaybackParams p;
  const double fault_end = 1.0 + p.b / 60.0;
  EXPECT_NEAR(playback_voltage_ramp(fault_end + 1e-12, p), p.a, 1e-9);
  EXPECT_NEAR(playback_voltage_ramp(2.0, p), 1.0, 1e-12);
  const double mid = 0.5 * (fault_end + 2.0);
  EXPECT_NEAR(playback_voltage_ramp(mid, p), 0.5 * (p.a + 1.0), 1e-12);
  EXPECT_EQ(playback_voltage(1.5, p, PlaybackShape::LinearRamp), playback_voltage_ramp(1.5, p));
}

TEST(Playback, Validation) {
  PlaybackParams p;
  EXPECT_NO_THROW(p.validate());
  p.a = 1.2;
  EXPECT_THROW(p.validate(), Error);
  p = PlaybackParams{};
  p.c = 0.05;
  EXPECT_THROW(p.validate(), Error);
}

TEST(BusSignal, SeriesInterpolatesAndHolds) {
  SampledSeries s;
  s.t = {0.0, 1.0, 2.0};
  s.v = {1.0, 0.5, 1.0};
  s.f = {1.0, 0.98, 1.0};
  const BusSignal bus(SeriesBus{s, ""});
  EXPECT_DOUBLE_EQ(bus.voltage(0.5), 0.75);
  EXPECT_DOUBLE_EQ(bus.frequency(0.5), 0.99);
  EXPECT_EQ(bus.voltage(5.0), 1.0);
  EXPECT_EQ(bus.voltage(-1.0), 1.0);
}

TEST(BusSignal, ConstantAndPlayback) {
  const BusSignal c(ConstantBus{0.9, 1.01});
  EXPECT_EQ(c.voltage(10.0), 0.9);
  EXPECT_EQ(c.frequency(10.0), 1.01);
  const BusSignal p(PlaybackBus{});
  EXPECT_EQ(p.voltage(1.04), 0.8);
  EXPECT_EQ(p.frequency(1.04), 1.0);
}

TEST(LoadMix, RejectsFractionsNotSummingToOne) {
  LoadMix m;
  m.motor_a = 0.5;
  m.zip = 0.4;
  try {
    m.validate();
    FAIL() << "expected a validation error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigValue);
    EXPECT_NE(std::string(e.what()).find("motor_a"), std::string::npos);
  }
  m.zip = 0.5;
  EXPECT_NO_THROW(m.validate());
  m.motor_b = -0.1;
  EXPECT_THROW(m.validate(), Error);
}

TEST(Composite, ZipOnlyPassesThrough) {
  LoadMix m;
  m.zip = 1.0;
  ComponentOutputs c;
  c.zip = {0.7, 0.3};
  const auto pq = composite_step_outputs(c, m);
  EXPECT_EQ(pq.P, 0.7);
  EXPECT_EQ(pq.Q, 0.3);
}

TEST(Composite, DerInjectionReducesLoad) {
  LoadMix m;
  m.zip = 1.0;
  m.der_scale = 0.4;
  ComponentOutputs c;
  c.dera = {0.5, 0.0};
  EXPECT_DOUBLE_EQ(composite_step_outputs(c, m).P, -0.5 * 0.4);
}

TEST(Composite, HandSummedMix) {
  LoadMix m;
  m.motor_a = 0.5;
  m.zip = 0.5;
  ComponentOutputs c;
  c.motor_a = {0.8, 0.586};
  c.zip = {1.0, 0.1};
  const auto pq = composite_step_outputs(c, m);
  EXPECT_DOUBLE_EQ(pq.P, 0.5 * 0.8 + 0.5 * 1.0);
  EXPECT_DOUBLE_EQ(pq.Q, 0.5 * 0.586 + 0.5 * 0.1);
}

TEST(Composite, LinearInEachComponent) {
  LoadMix m;
  m.motor_a = 0.2, m.motor_b = 0.2, m.motor_c = 0.1, m.electronic = 0.3, m.zip = 0.2;
  m.der_scale = 0.5;
  ComponentOutputs a, b;
  a.motor_a = {0.3, 0.1}, a.motor_b = {0.5, 0.2}, a.electronic = {0.9, 0.0}, a.dera = {0.4, 0.1};
  b.motor_a = {0.7, -0.2}, b.motor_c = {0.6, 0.3}, b.zip = {1.0, 0.5}, b.dera = {0.1, 0.0};
  ComponentOutputs sum;
  sum.motor_a = {a.motor_a.P + b.motor_a.P, a.motor_a.Q + b.motor_a.Q};
  sum.motor_b = {a.motor_b.P + b.motor_b.P, a.motor_b.Q + b.motor_b.Q};
  sum.motor_c = {a.motor_c.P + b.motor_c.P, a.motor_c.Q + b.motor_c.Q};
  sum.electronic = {a.electronic.P + b.electronic.P, a.electronic.Q + b.electronic.Q};
  sum.zip = {a.zip.P + b.zip.P, a.zip.Q + b.zip.Q};
  sum.dera = {a.dera.P + b.dera.P, a.dera.Q + b.dera.Q};
  const auto ta = composite_step_outputs(a, m), tb = composite_step_outputs(b, m);
  const auto ts = composite_step_outputs(sum, m);
  EXPECT_NEAR(ts.P, ta.P + tb.P, 1e-15);
  EXPECT_NEAR(ts.Q, ta.Q + tb.Q, 1e-15);
}

TEST(Composite, ComponentNames) {
  EXPECT_STREQ(component_name(ComponentKind::MotorD), "motor_d");
  EXPECT_STREQ(component_name(ComponentKind::DerA), "dera");
}
