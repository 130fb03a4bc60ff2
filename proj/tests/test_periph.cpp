// Copyright 2026 The PELS Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <gtest/gtest.h>

#include "pels/fabric.hpp"
#include "pels/periph.hpp"

namespace pels {
namespace {

std::vector<Cycle> pulse_cycles(Timer& timer, Cycle until) {
  EventFabric fabric(4, 4);
  std::vector<Cycle> out;
  for (Cycle t = 0; t <= until; ++t) {
    fabric.begin_cycle();
    timer.tick(t, fabric);
    if (fabric.strobes().test(0)) out.push_back(t);
    fabric.end_cycle();
  }
  return out;
}

TEST(Gpio, RegisterSemantics) {
  Gpio g("g", 0x100);
  g.write(Gpio::kOut, 0b0101, 0);
  EXPECT_EQ(g.pins(), 0b0101u);
  g.write(Gpio::kTgl, 0b0011, 0);
  EXPECT_EQ(g.pins(), 0b0110u);
  g.write(Gpio::kOut, 0b0101, 0);
  g.write(Gpio::kSet, 0b1000, 0);
  EXPECT_EQ(g.read(Gpio::kOut, 0), 0b1101u);
  g.write(Gpio::kClr, 0b0001, 0);
  EXPECT_EQ(g.read(Gpio::kOut, 0), 0b1100u);
  EXPECT_EQ(g.read(Gpio::kSet, 0), 0u);
}

TEST(Timer, PeriodTen) {
  Timer t("t", 0, 10, true, 0);
  EXPECT_EQ(pulse_cycles(t, 35), (std::vector<Cycle>{10, 20, 30}));
}

TEST(Timer, DisabledNeverPulses) {
  Timer t("t", 0, 10, false, 0);
  EXPECT_TRUE(pulse_cycles(t, 100).empty());
  EXPECT_FALSE(t.has_pending_activity(0));
}

TEST(Timer, PeriodOnePulsesEveryCycle) {
  Timer t("t", 0, 1, true, 0);
  EXPECT_EQ(pulse_cycles(t, 5), (std::vector<Cycle>{1, 2, 3, 4, 5}));
}

TEST(Timer, EnableThroughControlRegister) {
  Timer t("t", 0, 4, false, 0);
  EventFabric fabric(4, 4);
  std::vector<Cycle> out;
  for (Cycle c = 0; c < 20; ++c) {
    fabric.begin_cycle();
    if (c == 5) t.write(Timer::kCtrl, 1, c);
    t.tick(c, fabric);
    if (fabric.strobes().test(0)) out.push_back(c);
    fabric.end_cycle();
  }
  EXPECT_EQ(out, (std::vector<Cycle>{9, 13, 17}));
  EXPECT_EQ(t.read(Timer::kPeriod, 0), 4u);
}

TEST(Sensor, SampleVisibility) {
  Sensor s("s", 0, Sensor::Mode::kContinuous, {{10, 111}, {20, 222}}, 1, std::nullopt);
  EXPECT_EQ(s.read(Sensor::kSample, 9), 0u);
  EXPECT_EQ(s.read(Sensor::kSample, 10), 111u);
  EXPECT_EQ(s.read(Sensor::kSample, 19), 111u);
  EXPECT_EQ(s.read(Sensor::kSample, 20), 222u);
  EventFabric fabric(4, 4);
  std::vector<Cycle> pulses;
  for (Cycle t = 0; t < 30; ++t) {
    fabric.begin_cycle();
    s.tick(t, fabric);
    if (fabric.strobes().test(1)) pulses.push_back(t);
    fabric.end_cycle();
  }
  EXPECT_EQ(pulses, (std::vector<Cycle>{10, 20}));
}

TEST(Sensor, TriggeredConversion) {
  Sensor s("adc", 0, Sensor::Mode::kTriggered, {{0, 5}, {50, 77}}, 2, 0);
  EventFabric fabric(4, 4);
  EXPECT_EQ(s.read(Sensor::kSample, 60), 0u);
  s.write(Sensor::kStart, 1, 60);
  EXPECT_TRUE(s.has_pending_activity(60));
  fabric.begin_cycle();
  s.tick(61, fabric);
  EXPECT_TRUE(fabric.strobes().test(2));
  EXPECT_EQ(s.read(Sensor::kSample, 61), 77u);

  // Rising edge on the start output line also converts.
  Sensor t("adc2", 0, Sensor::Mode::kTriggered, {{0, 9}}, 2, 0);
  EventVector out(4);
  out.set(0);
  t.observe_outputs(out, 3);
  EXPECT_EQ(t.sample(), 9u);
  t.observe_outputs(out, 4);  // still high: no second conversion
  fabric.begin_cycle();
  t.tick(4, fabric);
  fabric.begin_cycle();
  t.tick(5, fabric);
  EXPECT_FALSE(fabric.strobes().test(2));
}

TEST(Sensor, RandomScheduleIsSeededAndBounded) {
  const auto a = random_schedule(5, 100, 10, 3, 9, 100, 200);
  const auto b = random_schedule(5, 100, 10, 3, 9, 100, 200);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 100u);
  EXPECT_EQ(a.front().cycle, 10u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GE(a[i].value, 100u);
    EXPECT_LE(a[i].value, 200u);
    if (i > 0) {
      EXPECT_GE(a[i].cycle - a[i - 1].cycle, 3u);
      EXPECT_LE(a[i].cycle - a[i - 1].cycle, 9u);
    }
  }
  EXPECT_NE(random_schedule(6, 100, 10, 3, 9, 100, 200), a);
}

TEST(Baseline, DefaultsTakeSixteenCycles) {
  const BaselineCpuParams p;
  EXPECT_EQ(baseline_handle_event(p, 100).completion, 116u);
  EXPECT_EQ(baseline_handle_event(p, 100).shared_fetches, 16u);
  EXPECT_EQ(baseline_handle_event({0, 0, 0}, 42).completion, 42u);
}

TEST(Baseline, EventsSerializeOnTheCore) {
  BaselineCpu cpu({10, 6, 16});
  cpu.raise(0, 0);
  cpu.raise(1, 4);
  EXPECT_TRUE(cpu.retire(15).empty());
  auto a = cpu.retire(16);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].completion, 16u);
  auto b = cpu.retire(32);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].completion, 32u);
  EXPECT_TRUE(cpu.idle());
  EXPECT_EQ(cpu.shared_fetches(), 32u);
}

TEST(Baseline, ZeroJitterAcrossRepetitions) {
  BaselineCpu cpu({3, 4, 2});
  for (Cycle t = 0; t < 1000; t += 50) cpu.raise(0, t);
  for (Cycle t = 0; t < 1100; ++t) {
    for (const auto& j : cpu.retire(t)) EXPECT_EQ(j.completion - j.event_cycle, 7u);
  }
}

TEST(Peripheral, MisalignedBaseRejected) {
  EXPECT_ANY_THROW(RegisterFile("r", 0x102, 1));
}

}  // namespace
}  // namespace pels
