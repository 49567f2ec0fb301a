#include <gtest/gtest.h>

#include <algorithm>

#include "b2bsdr/schedule.hpp"

using namespace b2bsdr::msg;

namespace {

ScheduleInput table_state() {
  ScheduleInput in;
  in.mask.iod = 5;
  in.mask.bds3 = {19, 21, 22, 29, 34, 35, 38, 39, 40, 44};
  in.mask.gps = {2, 5, 6, 7, 9, 12, 13, 15, 18, 19, 25, 29, 30};
  for (int p : in.mask.bds3) {
    in.orbit.push_back({System::bds3, p, true, 0.01 * p, 0.0, 0.0, 2});
    in.clock.push_back({System::bds3, p, true, 0.001 * p});
    in.bias.push_back({System::bds3, p, {{0, 0.0017}}});
  }
  for (int p : in.mask.gps) {
    in.orbit.push_back({System::gps, p, true, -0.01 * p, 0.0, 0.0, 2});
    in.clock.push_back({System::gps, p, true, -0.001 * p});
  }
  return in;
}

std::vector<ScheduleObservation> observe_all(const std::vector<ScheduledFrame>& frames) {
  std::vector<ScheduleObservation> obs;
  for (const auto& f : frames) obs.push_back(observe(f.second, parse_message(f.frame, MessageSchema::builtin_default())));
  return obs;
}

}  // namespace

TEST(Schedule, CycleLayout) {
  const auto frames = generate_schedule(table_state(), 17710, MessageSchema::builtin_default());
  ASSERT_EQ(frames.size(), 48u);
  for (int s = 0; s < 48; ++s) EXPECT_EQ(frames[s].second, 17710 + s);

  EXPECT_EQ(frames[0].mestype, 1);
  EXPECT_EQ(frames[46].mestype, 63);
  EXPECT_EQ(frames[47].mestype, 63);
  for (int u = 0; u < kOutputUnits; ++u) {
    EXPECT_EQ(frames[1 + 3 * u].mestype, 4) << u;
    EXPECT_EQ(frames[3 + 3 * u].mestype, 4) << u;
    const int x = frames[2 + 3 * u].mestype;
    EXPECT_TRUE(x == 2 || x == 3 || x == 63) << u;
  }

  std::map<int, int> counts;
  for (const auto& f : frames) ++counts[f.mestype];
  EXPECT_EQ(counts[1], 1);
  EXPECT_EQ(counts[4], 30);
  EXPECT_EQ(counts[2], 4);   // 23 satellites over 7 slots
  EXPECT_EQ(counts[3], 2);   // 10 biased satellites over 6 slots
  EXPECT_EQ(counts[63], 11);
}

TEST(Schedule, EpochStamps) {
  const long start = 17710;
  const auto& schema = MessageSchema::builtin_default();
  const auto frames = generate_schedule(table_state(), start, schema);
  for (const auto& f : frames) {
    const auto m = parse_message(f.frame, schema);
    const long s = f.second - start;
    switch (m.mestype) {
      case 1:
        EXPECT_EQ(std::get<MaskContent>(m.content).epoch, start);
        break;
      case 2:
        EXPECT_EQ(std::get<OrbitContent>(m.content).epoch, start - kOrbitEpochOffset);
        EXPECT_EQ(std::get<OrbitContent>(m.content).iod, 5);
        break;
      case 3:
        EXPECT_EQ(std::get<BiasContent>(m.content).epoch, start - kOrbitEpochOffset);
        break;
      case 4:
        EXPECT_EQ(std::get<ClockContent>(m.content).epoch, start + 6 * (s / 6)) << "s=" << s;
        EXPECT_EQ(std::get<ClockContent>(m.content).iod, 5);
        break;
      default:
        break;
    }
  }
}

TEST(Schedule, EpochsWrapAtMidnight) {
  const auto& schema = MessageSchema::builtin_default();
  const auto frames = generate_schedule(table_state(), 3, schema);
  const auto m = parse_message(frames[2].frame, schema);
  ASSERT_EQ(m.mestype, 2);
  EXPECT_EQ(std::get<OrbitContent>(m.content).epoch, 86400 - 4);
}

TEST(Schedule, EverySatelliteBroadcastOncePerCycle) {
  const auto in = table_state();
  const auto& schema = MessageSchema::builtin_default();
  const auto frames = generate_schedule(in, 17710, schema);
  std::map<int, int> orbit_seen, bias_seen;
  for (const auto& f : frames) {
    const auto m = parse_message(f.frame, schema);
    if (m.mestype == 2)
      for (const auto& e : std::get<OrbitContent>(m.content).sats) ++orbit_seen[e.prn + (e.system == System::gps ? 100 : 0)];
    if (m.mestype == 3)
      for (const auto& e : std::get<BiasContent>(m.content).sats) ++bias_seen[e.prn];
  }
  for (const auto& e : in.orbit) EXPECT_EQ(orbit_seen[e.prn + (e.system == System::gps ? 100 : 0)], 1);
  for (const auto& e : in.bias) EXPECT_EQ(bias_seen[e.prn], 1);
}

TEST(Schedule, AnalyzerAcceptsGeneratorOutput) {
  const auto& schema = MessageSchema::builtin_default();
  std::vector<ScheduledFrame> frames;
  for (int cycle = 0; cycle < 3; ++cycle) {
    auto f = generate_schedule(table_state(), 17710 + 48 * cycle, schema);
    frames.insert(frames.end(), f.begin(), f.end());
  }
  const auto report = analyze_schedule(observe_all(frames));
  EXPECT_TRUE(report.deviations.empty()) << report.deviations.front();
  EXPECT_EQ(report.type_counts.at(1), 3);
  ASSERT_EQ(report.type1_spacing.size(), 2u);
  EXPECT_EQ(report.type1_spacing[0], 48);
  EXPECT_EQ(report.type1_spacing[1], 48);
  ASSERT_TRUE(report.orbit_epoch_offset.has_value());
  EXPECT_EQ(*report.orbit_epoch_offset, 7);
  // clock epochs advance by 6 everywhere, cycle boundary included
  const auto& iv = report.epoch_intervals.at(4);
  ASSERT_FALSE(iv.empty());
  for (long d : iv) EXPECT_EQ(d, 6);
  for (long d : report.epoch_intervals.at(2)) EXPECT_EQ(d, 48);
}

TEST(Schedule, AnalyzerFlagsLateTypeOne) {
  std::vector<ScheduleObservation> obs;
  auto add_cycle = [&](long t0, long epoch0) {
    const auto frames = generate_schedule(table_state(), epoch0, MessageSchema::builtin_default());
    for (const auto& f : frames)
      obs.push_back(observe(t0 + (f.second - epoch0), parse_message(f.frame, MessageSchema::builtin_default())));
  };
  add_cycle(1000, 17710);
  add_cycle(1049, 17758);  // one second late
  const auto report = analyze_schedule(obs);
  const bool flagged = std::any_of(report.deviations.begin(), report.deviations.end(),
                                   [](const std::string& d) { return d.find("mask spacing 49") != std::string::npos; });
  EXPECT_TRUE(flagged);
}

TEST(Schedule, AnalyzerFlagsStaleClockEpoch) {
  const auto& schema = MessageSchema::builtin_default();
  auto frames = generate_schedule(table_state(), 17710, schema);
  auto obs = observe_all(frames);
  // freeze the second 6 s window's clock epoch at the first window's value
  for (auto& o : obs)
    if (o.mestype == 4 && o.epoch == 17716) o.epoch = 17710;
  const auto report = analyze_schedule(obs);
  const bool flagged = std::any_of(report.deviations.begin(), report.deviations.end(), [](const std::string& d) {
    return d.find("type 4 epoch advanced 12") != std::string::npos;
  });
  EXPECT_TRUE(flagged);
  // the doubled interval is visible in the report
  const auto& iv = report.epoch_intervals.at(4);
  EXPECT_NE(std::find(iv.begin(), iv.end(), 12l), iv.end());
}

TEST(Schedule, AnalyzerReportsMissingFrames) {
  const auto frames = generate_schedule(table_state(), 17710, MessageSchema::builtin_default());
  auto obs = observe_all(frames);
  obs.erase(obs.begin() + 5);
  const auto report = analyze_schedule(obs);
  const bool flagged = std::any_of(report.deviations.begin(), report.deviations.end(),
                                   [](const std::string& d) { return d.find("missing frame") != std::string::npos; });
  EXPECT_TRUE(flagged);
}

TEST(Schedule, OverflowListsDroppedRecords) {
  ScheduleInput in = table_state();
  // 16 orbit groups cannot fit 15 X slots
  in.orbit.clear();
  for (int p = 1; p <= 60; ++p) {
    in.orbit.push_back({System::bds3, p, true, 0.0, 0.0, 0.0, 1});
    in.orbit.push_back({System::gps, p, true, 0.0, 0.0, 0.0, 1});
  }
  try {
    generate_schedule(in, 17710, MessageSchema::builtin_default());
    FAIL() << "expected overflow";
  } catch (const std::range_error& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("dropped"), std::string::npos);
    EXPECT_NE(what.find("orbit/"), std::string::npos);
  }
  // clock overflow: more than four 19-slot groups per 6 s window
  ScheduleInput in2 = table_state();
  in2.clock.clear();
  for (int p = 1; p <= 60; ++p) {
    in2.clock.push_back({System::bds3, p, true, 0.0});
    in2.clock.push_back({System::gps, p, true, 0.0});
  }
  EXPECT_THROW(generate_schedule(in2, 17710, MessageSchema::builtin_default()), std::range_error);
}

TEST(Schedule, EmptyStateStillFillsTheCycle) {
  ScheduleInput in;
  in.mask.iod = 1;
  in.mask.bds3 = {19};
  const auto frames = generate_schedule(in, 0, MessageSchema::builtin_default());
  ASSERT_EQ(frames.size(), 48u);
  std::map<int, int> counts;
  for (const auto& f : frames) ++counts[f.mestype];
  EXPECT_EQ(counts[1], 1);
  EXPECT_EQ(counts[4], 30);  // empty clock frames still hold the slot
  EXPECT_EQ(counts[63], 17);
  const auto report = analyze_schedule(observe_all(frames));
  EXPECT_TRUE(report.deviations.empty()) << report.deviations.front();
}
