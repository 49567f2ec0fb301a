#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "b2bsdr/pppmsg.hpp"

// One broadcast cycle is 48 s at one frame per second:
//
//   second 0         type 1 (mask), epoch = cycle start
//   seconds 1..45    fifteen 3 s output units [4, X, 4]; the X slots carry
//                    one full round of type 2, one of type 3, then type 63
//   seconds 46..47   type 63
//
// Type-4 epochs advance every 6 s.  Types 2 and 3 are broadcast once per
// cycle and stamp an epoch 7 s before the cycle start.  The analyzer checks
// decoded streams against the same rules; the measured type-2/3 epoch offset
// is reported, not judged, since live data shows it varying.

namespace b2bsdr::msg {

inline constexpr int kCycleSeconds = 48;
inline constexpr int kOutputUnits = 15;
inline constexpr long kClockEpochStep = 6;
inline constexpr long kOrbitEpochOffset = 7;

struct ScheduleInput {
  MaskContent mask;  // epoch/iod fields are overwritten by the generator
  std::vector<OrbitEntry> orbit;
  std::vector<ClockEntry> clock;
  std::vector<BiasEntry> bias;
};

struct ScheduledFrame {
  long second = 0;  // broadcast time, cycle start + 0..47
  int mestype = 63;
  BitVec frame;  // full 486-bit body with crc
};

namespace detail {

template <typename T>
std::vector<std::vector<T>> chunk(const std::vector<T>& v, int n) {
  std::vector<std::vector<T>> out;
  for (std::size_t i = 0; i < v.size(); i += n)
    out.emplace_back(v.begin() + i, v.begin() + std::min(v.size(), i + n));
  return out;
}

inline long wrap_day(long s) {
  constexpr long day = 86400;
  return ((s % day) + day) % day;
}

}  // namespace detail

// Lays out one cycle starting at start_epoch (seconds of day).  Throws
// range_error when the correction state cannot fit, listing what was dropped.
inline std::vector<ScheduledFrame> generate_schedule(const ScheduleInput& in, long start_epoch,
                                                     const MessageSchema& schema) {
  const auto orbit_groups = detail::chunk(in.orbit, orbit_capacity(schema));
  const auto bias_groups = detail::chunk(in.bias, bias_capacity(schema));
  const auto clock_groups = detail::chunk(in.clock, clock_capacity(schema));

  // X slots: one per output unit
  std::vector<std::optional<int>> x_kind(kOutputUnits);  // 2 or 3, else null frame
  {
    std::size_t want = orbit_groups.size() + bias_groups.size();
    if (want > static_cast<std::size_t>(kOutputUnits)) {
      std::ostringstream os;
      os << "schedule: " << want << " correction frames exceed " << kOutputUnits << " slots per cycle; dropped:";
      std::size_t slot = 0;
      for (std::size_t g = 0; g < orbit_groups.size(); ++g, ++slot)
        if (slot >= static_cast<std::size_t>(kOutputUnits))
          for (const auto& e : orbit_groups[g]) os << " orbit/" << system_name(e.system) << "-" << e.prn;
      for (std::size_t g = 0; g < bias_groups.size(); ++g, ++slot)
        if (slot >= static_cast<std::size_t>(kOutputUnits))
          for (const auto& e : bias_groups[g]) os << " bias/" << system_name(e.system) << "-" << e.prn;
      throw std::range_error(os.str());
    }
  }
  // four type-4 slots share each 6 s epoch window; the clock set must fit them
  if (clock_groups.size() > 4) {
    std::ostringstream os;
    os << "schedule: " << in.clock.size() << " clock records exceed " << 4 * clock_capacity(schema)
       << " per epoch window; dropped:";
    for (std::size_t g = 4; g < clock_groups.size(); ++g)
      for (const auto& e : clock_groups[g]) os << " clock/" << system_name(e.system) << "-" << e.prn;
    throw std::range_error(os.str());
  }

  MaskContent mask = in.mask;
  mask.epoch = detail::wrap_day(start_epoch);

  const long corr_epoch = detail::wrap_day(start_epoch - kOrbitEpochOffset);
  OrbitContent oc;
  oc.iod = mask.iod;
  oc.epoch = corr_epoch;
  BiasContent bc;
  bc.epoch = corr_epoch;

  std::vector<ScheduledFrame> out;
  out.reserve(kCycleSeconds);
  auto emit = [&](int second, int mestype, const BitVec& frame) {
    out.push_back(ScheduledFrame{start_epoch + second, mestype, frame});
  };

  emit(0, 1, serialize_message(mask, schema));

  int clock_rr = 0;  // round-robin over clock groups within each epoch window
  long last_window = -1;
  std::size_t next_orbit = 0, next_bias = 0;
  for (int u = 0; u < kOutputUnits; ++u) {
    for (int s : {1 + 3 * u, 3 + 3 * u}) {
      const long window = s / 6;
      if (window != last_window) {
        last_window = window;
        clock_rr = 0;
      }
      ClockContent cc;
      cc.iod = mask.iod;
      cc.epoch = detail::wrap_day(start_epoch + 6 * window);
      if (!clock_groups.empty()) {
        cc.sats = clock_groups[clock_rr % clock_groups.size()];
        ++clock_rr;
      }
      emit(s, 4, serialize_message(cc, schema));
    }
    const int xs = 2 + 3 * u;
    if (next_orbit < orbit_groups.size()) {
      oc.sats = orbit_groups[next_orbit++];
      emit(xs, 2, serialize_message(oc, schema));
    } else if (next_bias < bias_groups.size()) {
      bc.sats = bias_groups[next_bias++];
      emit(xs, 3, serialize_message(bc, schema));
    } else {
      emit(xs, 63, serialize_null(schema));
    }
  }
  emit(46, 63, serialize_null(schema));
  emit(47, 63, serialize_null(schema));

  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  return out;
}

// ---- analysis of a decoded stream ----

struct ScheduleObservation {
  long t = 0;  // receive second
  int mestype = 63;
  long epoch = 0;
  bool has_epoch = false;
};

inline ScheduleObservation observe(long t, const ParsedMessage& m) {
  ScheduleObservation o;
  o.t = t;
  o.mestype = m.mestype;
  switch (m.mestype) {
    case 1: o.epoch = std::get<MaskContent>(m.content).epoch; o.has_epoch = true; break;
    case 2: o.epoch = std::get<OrbitContent>(m.content).epoch; o.has_epoch = true; break;
    case 3: o.epoch = std::get<BiasContent>(m.content).epoch; o.has_epoch = true; break;
    case 4: o.epoch = std::get<ClockContent>(m.content).epoch; o.has_epoch = true; break;
    default: break;
  }
  return o;
}

struct ScheduleReport {
  std::map<int, int> type_counts;
  std::vector<long> type1_spacing;                    // seconds between consecutive masks
  std::map<int, std::vector<long>> epoch_intervals;   // per type, deltas between epoch changes
  std::optional<long> orbit_epoch_offset;             // mask epoch minus type-2/3 epoch, measured
  std::vector<std::string> deviations;
};

// Checks a timestamped stream against the cycle rules.  Needs at least one
// full cycle; gaps in reception are reported as deviations, not errors.
inline ScheduleReport analyze_schedule(const std::vector<ScheduleObservation>& obs) {
  ScheduleReport r;
  if (obs.empty()) {
    r.deviations.push_back("empty stream");
    return r;
  }
  auto flag = [&](const std::string& s) { r.deviations.push_back(s); };

  std::vector<long> mask_times;
  for (const auto& o : obs) {
    ++r.type_counts[o.mestype];
    if (o.mestype == 1) mask_times.push_back(o.t);
  }
  if (obs.back().t - obs.front().t + 1 < kCycleSeconds) flag("stream shorter than one 48 s cycle");

  // rule: one mask per cycle, 48 s apart
  for (std::size_t i = 1; i < mask_times.size(); ++i) {
    const long d = mask_times[i] - mask_times[i - 1];
    r.type1_spacing.push_back(d);
    if (d != kCycleSeconds)
      flag("mask spacing " + std::to_string(d) + " s at t=" + std::to_string(mask_times[i]) + ", expected 48");
  }
  if (mask_times.empty()) {
    flag("no mask frame seen");
    return r;
  }

  // rules: slot structure within each complete cycle present in the stream
  std::map<long, const ScheduleObservation*> by_t;
  for (const auto& o : obs) by_t[o.t] = &o;
  for (long t0 : mask_times) {
    if (t0 + kCycleSeconds - 1 > obs.back().t) break;  // incomplete tail cycle
    for (int s = 1; s <= 45; ++s) {
      auto it = by_t.find(t0 + s);
      if (it == by_t.end()) {
        flag("missing frame at t=" + std::to_string(t0 + s));
        continue;
      }
      const int ty = it->second->mestype;
      const bool is_x = (s % 3) == 2;  // middle second of its output unit
      if (is_x) {
        if (ty != 2 && ty != 3 && ty != 63)
          flag("slot t=" + std::to_string(t0 + s) + " carries type " + std::to_string(ty) + ", expected 2/3/63");
      } else if (ty != 4) {
        flag("slot t=" + std::to_string(t0 + s) + " carries type " + std::to_string(ty) + ", expected 4");
      }
    }
    for (int s = 46; s <= 47; ++s) {
      auto it = by_t.find(t0 + s);
      if (it != by_t.end() && it->second->mestype != 63)
        flag("cycle tail t=" + std::to_string(t0 + s) + " carries type " + std::to_string(it->second->mestype) +
             ", expected 63");
    }
    // rule: types 2 and 3 each stamp exactly one epoch per cycle
    for (int ty : {2, 3}) {
      std::vector<long> epochs;
      for (int s = 1; s <= 45; ++s) {
        auto it = by_t.find(t0 + s);
        if (it != by_t.end() && it->second->mestype == ty && it->second->has_epoch) {
          if (std::find(epochs.begin(), epochs.end(), it->second->epoch) == epochs.end())
            epochs.push_back(it->second->epoch);
        }
      }
      if (epochs.size() > 1)
        flag("type " + std::to_string(ty) + " carries " + std::to_string(epochs.size()) +
             " epochs in the cycle at t=" + std::to_string(t0));
    }
  }

  // per-type epoch update cadence; a repeat across an update boundary shows
  // up here as a doubled interval
  for (int ty : {1, 2, 3, 4}) {
    std::vector<std::pair<long, long>> seen;  // (t, epoch) at each change
    for (const auto& o : obs) {
      if (o.mestype != ty || !o.has_epoch) continue;
      if (seen.empty() || seen.back().second != o.epoch) seen.push_back({o.t, o.epoch});
    }
    auto& iv = r.epoch_intervals[ty];
    for (std::size_t i = 1; i < seen.size(); ++i) iv.push_back(epoch_delta(seen[i].second, seen[i - 1].second));
    const long cadence = ty == 4 ? kClockEpochStep : kCycleSeconds;
    for (std::size_t i = 0; i < iv.size(); ++i)
      if (iv[i] != cadence)
        flag("type " + std::to_string(ty) + " epoch advanced " + std::to_string(iv[i]) + " s at t=" +
             std::to_string(seen[i + 1].first) + ", expected " + std::to_string(cadence));
  }

  // measured, not judged: offset between the mask epoch and the shared
  // type-2/3 epoch within the first complete cycle
  for (long t0 : mask_times) {
    auto mask_it = by_t.find(t0);
    if (mask_it == by_t.end() || !mask_it->second->has_epoch) continue;
    for (int s = 1; s <= 45 && !r.orbit_epoch_offset; ++s) {
      auto it = by_t.find(t0 + s);
      if (it != by_t.end() && (it->second->mestype == 2 || it->second->mestype == 3) && it->second->has_epoch)
        r.orbit_epoch_offset = epoch_delta(mask_it->second->epoch, it->second->epoch);
    }
    if (r.orbit_epoch_offset) break;
  }
  return r;
}

}  // namespace b2bsdr::msg
