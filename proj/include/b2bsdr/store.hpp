#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "b2bsdr/pppmsg.hpp"

// Correction matching.  Mask, orbit, and clock messages carry issue-of-data
// tags; a satellite's corrections are usable only once all three agree.  The
// store keeps the latest record per (system, prn, kind), last write wins, and
// emits a matched CorrectionSet whenever an update completes the triple.
// Re-ingesting an identical record emits nothing new.

namespace b2bsdr::msg {

struct SatKey {
  System system = System::bds3;
  int prn = 0;
  auto operator<=>(const SatKey&) const = default;
};

struct OrbitRecord {
  long epoch = 0;
  int iod = 0;
  bool available = false;
  double radial = 0, along = 0, cross = 0;
  int ura = 0;
  double recv_time = 0;
  bool operator==(const OrbitRecord&) const = default;
};

struct ClockRecord {
  long epoch = 0;
  int iod = 0;
  bool available = false;
  double c0 = 0;
  double recv_time = 0;
  bool operator==(const ClockRecord&) const = default;
};

struct BiasRecord {
  long epoch = 0;
  std::vector<BiasMode> modes;
  double recv_time = 0;
  bool operator==(const BiasRecord&) const = default;
};

// The matched state for one satellite.  Biases carry no issue-of-data tag and
// ride along as the latest held record.
struct CorrectionSet {
  SatKey sat;
  int iod = 0;
  long mask_epoch = 0;
  OrbitRecord orbit;
  ClockRecord clock;
  std::optional<BiasRecord> biases;
  bool operator==(const CorrectionSet&) const = default;
};

class CorrectionStore {
 public:
  std::vector<CorrectionSet> ingest(const MaskContent& c, double recv_time) {
    mask_ = MaskState{c.epoch, c.iod, recv_time};
    masked_.clear();
    for (int p : c.bds3) masked_.push_back({System::bds3, p});
    for (int p : c.gps) masked_.push_back({System::gps, p});
    // a new mask can complete triples that were held for its iod
    std::vector<CorrectionSet> out;
    for (auto& [key, sat] : sats_) try_emit(key, sat, out);
    return out;
  }

  std::vector<CorrectionSet> ingest(const OrbitContent& c, double recv_time) {
    std::vector<CorrectionSet> out;
    for (const auto& e : c.sats) {
      const SatKey key{e.system, e.prn};
      auto& sat = sats_[key];
      sat.orbit = OrbitRecord{c.epoch, c.iod, e.available, e.radial, e.along, e.cross, e.ura, recv_time};
      note_orphan(key);
      try_emit(key, sat, out);
    }
    return out;
  }

  std::vector<CorrectionSet> ingest(const ClockContent& c, double recv_time) {
    std::vector<CorrectionSet> out;
    for (const auto& e : c.sats) {
      const SatKey key{e.system, e.prn};
      auto& sat = sats_[key];
      sat.clock = ClockRecord{c.epoch, c.iod, e.available, e.c0, recv_time};
      note_orphan(key);
      try_emit(key, sat, out);
    }
    return out;
  }

  std::vector<CorrectionSet> ingest(const BiasContent& c, double recv_time) {
    std::vector<CorrectionSet> out;
    for (const auto& e : c.sats) {
      const SatKey key{e.system, e.prn};
      if (e.system == System::gps) ++gps_bias_records_;  // service defines biases for BDS3 only
      for (const auto& m : e.modes) {
        const auto& known = known_bias_modes();
        if (std::find(known.begin(), known.end(), m.mode) == known.end()) ++unknown_mode_records_;
      }
      auto& sat = sats_[key];
      sat.bias = BiasRecord{c.epoch, e.modes, recv_time};
      note_orphan(key);
      try_emit(key, sat, out);
    }
    return out;
  }

  std::vector<CorrectionSet> ingest(const ParsedMessage& m, double recv_time) {
    switch (m.mestype) {
      case 1: return ingest(std::get<MaskContent>(m.content), recv_time);
      case 2: return ingest(std::get<OrbitContent>(m.content), recv_time);
      case 3: return ingest(std::get<BiasContent>(m.content), recv_time);
      case 4: return ingest(std::get<ClockContent>(m.content), recv_time);
      default: return {};
    }
  }

  bool has_mask() const { return mask_.has_value(); }
  int mask_iod() const { return mask_ ? mask_->iod : -1; }
  bool is_masked(SatKey key) const { return std::find(masked_.begin(), masked_.end(), key) != masked_.end(); }

  // corrections held for satellites the active mask does not list
  std::vector<SatKey> orphans() const {
    std::vector<SatKey> out;
    for (const auto& [key, sat] : sats_)
      if (!is_masked(key) && (sat.orbit || sat.clock || sat.bias)) out.push_back(key);
    return out;
  }

  long orphan_records() const { return orphan_records_; }
  long gps_bias_records() const { return gps_bias_records_; }
  long unknown_mode_records() const { return unknown_mode_records_; }
  long emitted_sets() const { return emitted_sets_; }

 private:
  struct MaskState {
    long epoch = 0;
    int iod = 0;
    double recv_time = 0;
  };

  struct SatState {
    std::optional<OrbitRecord> orbit;
    std::optional<ClockRecord> clock;
    std::optional<BiasRecord> bias;
    std::optional<CorrectionSet> last_emitted;
  };

  void note_orphan(SatKey key) {
    if (!is_masked(key)) ++orphan_records_;
  }

  void try_emit(SatKey key, SatState& sat, std::vector<CorrectionSet>& out) {
    if (!mask_ || !is_masked(key)) return;
    if (!sat.orbit || !sat.clock) return;
    if (sat.orbit->iod != mask_->iod || sat.clock->iod != mask_->iod) return;
    CorrectionSet set;
    set.sat = key;
    set.iod = mask_->iod;
    set.mask_epoch = mask_->epoch;
    set.orbit = *sat.orbit;
    set.clock = *sat.clock;
    set.biases = sat.bias;
    // receive times differ between rebroadcasts of identical content and must
    // not defeat duplicate suppression
    CorrectionSet key_copy = set;
    key_copy.orbit.recv_time = key_copy.clock.recv_time = 0;
    if (key_copy.biases) key_copy.biases->recv_time = 0;
    if (sat.last_emitted && *sat.last_emitted == key_copy) return;  // duplicate ingest, nothing new
    sat.last_emitted = key_copy;
    ++emitted_sets_;
    out.push_back(std::move(set));
  }

  std::optional<MaskState> mask_;
  std::vector<SatKey> masked_;
  std::map<SatKey, SatState> sats_;
  long orphan_records_ = 0;
  long gps_bias_records_ = 0;
  long unknown_mode_records_ = 0;
  long emitted_sets_ = 0;
};

}  // namespace b2bsdr::msg
