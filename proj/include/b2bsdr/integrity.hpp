#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "b2bsdr/store.hpp"

// Service completeness accounting per satellite, one row per satellite over
// its observed epoch window:
//
//   total      = last epoch - first epoch (seconds)
//   abnormal   = seconds not covered by a fresh, usable correction: when two
//                consecutive distinct epochs sit further apart than the
//                nominal cadence the whole gap counts, and an epoch whose
//                correction is unavailable counts one cadence
//   completeness = (total - abnormal) / total, as a two-decimal percent
//
// Nominal cadences: clock 6 s, orbit 48 s.

namespace b2bsdr::msg {

inline constexpr long kClockCadenceS = 6;
inline constexpr long kOrbitCadenceS = 48;

// one decoded correction record, reduced to what the accounting needs
struct EpochRecord {
  long epoch = 0;
  bool available = true;
};

struct SatIntegrity {
  SatKey sat;
  long epoch_start = 0, epoch_end = 0;
  long total = 0;
  long orbit_abnormal = 0;
  double orbit_completeness = 100.0;
  long clock_abnormal = 0;
  double clock_completeness = 100.0;
};

inline double completeness_percent(long total, long abnormal) {
  if (total <= 0) return 100.0;
  const double pct = 100.0 * static_cast<double>(total - abnormal) / static_cast<double>(total);
  return std::round(pct * 100.0) / 100.0;
}

namespace detail {

inline long abnormal_seconds(std::vector<EpochRecord> recs, long cadence) {
  // collapse to distinct epochs; an epoch is unavailable if any record at it is
  std::sort(recs.begin(), recs.end(), [](const EpochRecord& a, const EpochRecord& b) { return a.epoch < b.epoch; });
  std::vector<EpochRecord> distinct;
  for (const auto& r : recs) {
    if (!distinct.empty() && distinct.back().epoch == r.epoch) {
      distinct.back().available = distinct.back().available && r.available;
      continue;
    }
    distinct.push_back(r);
  }
  long abnormal = 0;
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (!distinct[i].available) abnormal += cadence;
    if (i > 0) {
      const long gap = distinct[i].epoch - distinct[i - 1].epoch;
      if (gap > cadence) abnormal += gap;
    }
  }
  return abnormal;
}

}  // namespace detail

inline std::vector<SatIntegrity> integrity_report(const std::map<SatKey, std::vector<EpochRecord>>& orbit,
                                                  const std::map<SatKey, std::vector<EpochRecord>>& clock) {
  std::vector<SatIntegrity> rows;
  std::vector<SatKey> keys;
  for (const auto& [k, v] : orbit)
    if (!v.empty()) keys.push_back(k);
  for (const auto& [k, v] : clock)
    if (!v.empty() && std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());

  for (const auto& k : keys) {
    SatIntegrity row;
    row.sat = k;
    long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
    auto span = [&](const std::map<SatKey, std::vector<EpochRecord>>& m) {
      auto it = m.find(k);
      if (it == m.end()) return;
      for (const auto& r : it->second) {
        lo = std::min(lo, r.epoch);
        hi = std::max(hi, r.epoch);
      }
    };
    span(orbit);
    span(clock);
    row.epoch_start = lo;
    row.epoch_end = hi;
    row.total = hi - lo;
    // a kind with no records at all gave no service over the window
    auto kind_abnormal = [&](const std::map<SatKey, std::vector<EpochRecord>>& m, long cadence) {
      auto it = m.find(k);
      if (it == m.end() || it->second.empty()) return row.total;
      return detail::abnormal_seconds(it->second, cadence);
    };
    row.orbit_abnormal = kind_abnormal(orbit, kOrbitCadenceS);
    row.clock_abnormal = kind_abnormal(clock, kClockCadenceS);
    row.orbit_completeness = completeness_percent(row.total, row.orbit_abnormal);
    row.clock_completeness = completeness_percent(row.total, row.clock_abnormal);
    rows.push_back(row);
  }
  return rows;
}

// rows as comma-separated text, two decimals on the percentages
inline std::string integrity_csv(const std::vector<SatIntegrity>& rows) {
  std::ostringstream os;
  os << "system,prn,epoch_start,epoch_end,total_s,orbit_abnormal_s,orbit_completeness,clock_abnormal_s,clock_completeness\n";
  os << std::fixed << std::setprecision(2);
  for (const auto& r : rows)
    os << system_name(r.sat.system) << ',' << r.sat.prn << ',' << r.epoch_start << ',' << r.epoch_end << ',' << r.total
       << ',' << r.orbit_abnormal << ',' << r.orbit_completeness << ',' << r.clock_abnormal << ','
       << r.clock_completeness << '\n';
  return os.str();
}

}  // namespace b2bsdr::msg
